// Copyright 2026 The Clom Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clom/annotation.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "clom/stateparse.hpp"

namespace clom {

AnnotationError::AnnotationError(std::string message, int row_in, int line_in)
    : Error(std::move(message)), row(row_in), line(line_in) {}

HeaderMissing::HeaderMissing(const std::string& what_is_missing)
    : AnnotationError("missing header: " + what_is_missing, 0, 0) {}

NonMonotonicTime::NonMonotonicTime(int row, int line)
    : AnnotationError("segment row " + std::to_string(row) + " (line " +
                          std::to_string(line) +
                          "): t_start is not strictly increasing",
                      row, line) {}

DuplicateConsecutiveState::DuplicateConsecutiveState(int row, int line)
    : AnnotationError("segment row " + std::to_string(row) + " (line " +
                          std::to_string(line) +
                          "): state equals the previous segment's state",
                      row, line) {}

DanglingAction::DanglingAction(int row, int line)
    : AnnotationError("segment row " + std::to_string(row) + " (line " +
                          std::to_string(line) +
                          "): last segment must not have an action",
                      row, line) {}

MissingAction::MissingAction(int row, int line)
    : AnnotationError("segment row " + std::to_string(row) + " (line " +
                          std::to_string(line) +
                          "): only the last segment may omit the action",
                      row, line) {}

TooFewSegments::TooFewSegments(int line)
    : AnnotationError("at least two segment rows are required", 0, line) {}

RowFormat::RowFormat(std::string message, int row, int line)
    : AnnotationError("segment row " + std::to_string(row) + " (line " +
                          std::to_string(line) + "): " + message,
                      row, line) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool parse_seconds(std::string_view s, double* out) {
  s = trim(s);
  if (s.empty()) return false;
  std::string buf(s);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) return false;
  *out = v;
  return true;
}

std::string format_seconds(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", t);
  return buf;
}

}  // namespace

Trial parse_trial(std::string_view text, const Vocabulary& vocab) {
  Trial trial;
  bool saw_subject = false, saw_task = false, saw_trial = false;
  bool any_header = false, in_rows = false;
  int line_no = 0, row_no = 0, prev_row_line = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    if (trim(line).front() == '#') {
      if (in_rows)
        throw RowFormat("header line after segment rows", row_no, line_no);
      any_header = true;
      std::string_view body = trim(line).substr(1);
      std::size_t colon = body.find(':');
      if (colon == std::string_view::npos)
        throw RowFormat("header line has no ':'", 0, line_no);
      std::string key(trim(body.substr(0, colon)));
      std::string value(trim(body.substr(colon + 1)));
      if (key == "subject") {
        trial.subject_id = value;
        saw_subject = true;
      } else if (key == "task") {
        trial.task_id = value;
        saw_task = true;
      } else if (key == "trial") {
        int v = 0;
        auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc() || p != value.data() + value.size() || v < 1)
          throw RowFormat("trial index must be an integer >= 1", 0, line_no);
        trial.trial_index = v;
        saw_trial = true;
      } else if (key == "clap") {
        double t = 0.0;
        if (!parse_seconds(value, &t) || t < 0.0)
          throw RowFormat("clap time must be non-negative seconds", 0, line_no);
        trial.clap_video_time = t;
      } else if (key == "format") {
        if (value != "clom/1")
          throw RowFormat("unsupported format '" + value + "'", 0, line_no);
      } else {
        trial.metadata[key] = value;
      }
      continue;
    }

    // Segment row: t_start TAB state TAB action.
    in_rows = true;
    ++row_no;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    std::string_view row = line;
    for (std::size_t i = 0; i <= row.size(); ++i) {
      if (i == row.size() || row[i] == '\t') {
        cells.push_back(row.substr(start, i - start));
        start = i + 1;
      }
    }
    if (cells.size() != 3)
      throw RowFormat("expected 3 TAB-separated cells, got " +
                          std::to_string(cells.size()),
                      row_no, line_no);

    Segment seg;
    if (!parse_seconds(cells[0], &seg.t_start))
      throw RowFormat("bad t_start '" + std::string(trim(cells[0])) + "'",
                      row_no, line_no);
    try {
      seg.state = parse_state(cells[1], vocab);
    } catch (const Error& e) {
      throw RowFormat(std::string("bad state: ") + e.what(), row_no, line_no);
    }
    std::string_view action = trim(cells[2]);
    if (!action.empty() && action != "-") {
      MotionLabel label(action);
      if (!label.empty()) seg.action = label;
    }

    if (!trial.segments.empty()) {
      const Segment& prev = trial.segments.back();
      if (seg.t_start <= prev.t_start) throw NonMonotonicTime(row_no, line_no);
      if (seg.state == prev.state)
        throw DuplicateConsecutiveState(row_no, line_no);
      if (!prev.action) throw MissingAction(row_no - 1, prev_row_line);
    }
    trial.segments.push_back(std::move(seg));
    prev_row_line = line_no;
  }

  if (!any_header) throw HeaderMissing("no '#key: value' header block");
  if (!saw_subject) throw HeaderMissing("subject");
  if (!saw_task) throw HeaderMissing("task");
  if (!saw_trial) throw HeaderMissing("trial");
  if (trial.segments.size() < 2) throw TooFewSegments(prev_row_line);
  if (trial.segments.back().action)
    throw DanglingAction(row_no, prev_row_line);
  return trial;
}

std::string serialize_trial(const Trial& trial) {
  std::string out = "#format: clom/1\n";
  out += "#subject: " + trial.subject_id + "\n";
  out += "#task: " + trial.task_id + "\n";
  out += "#trial: " + std::to_string(trial.trial_index) + "\n";
  if (trial.clap_video_time)
    out += "#clap: " + format_seconds(*trial.clap_video_time) + "\n";
  for (const auto& [key, value] : trial.metadata)
    out += "#" + key + ": " + value + "\n";
  for (const auto& seg : trial.segments) {
    out += format_seconds(seg.t_start) + "\t" + serialize_state(seg.state) +
           "\t" + (seg.action ? seg.action->text() : "-") + "\n";
  }
  return out;
}

std::vector<ManipulationPrimitive> primitives_of(const Trial& trial) {
  std::vector<ManipulationPrimitive> primitives;
  if (trial.segments.size() < 2) return primitives;
  primitives.reserve(trial.segments.size() - 1);
  for (std::size_t i = 0; i + 1 < trial.segments.size(); ++i) {
    const Segment& from = trial.segments[i];
    const Segment& to = trial.segments[i + 1];
    primitives.push_back(ManipulationPrimitive{
        from.state, to.state, from.action ? *from.action : MotionLabel()});
  }
  return primitives;
}

}  // namespace clom
