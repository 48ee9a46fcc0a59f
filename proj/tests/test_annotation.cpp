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

#include "doctest.h"

#include <cmath>
#include <random>
#include <string>

#include "clom/annotation.hpp"
#include "testutil.hpp"

using namespace clom;
using testutil::S;

namespace {

const char* kMinimal =
    "#format: clom/1\n"
    "#subject: s01\n"
    "#task: napkin\n"
    "#trial: 1\n"
    "0.000\tPie | - | Crumpled\tGrasp corner\n"
    "4.250\tPP+Pie | RC | Crumpled\tLift\n"
    "9.000\tPP | RC | Crumpled\t-\n";

}  // namespace

TEST_CASE("a three-row file yields two primitives") {
  Trial t = parse_trial(kMinimal);
  CHECK(t.subject_id == "s01");
  CHECK(t.task_id == "napkin");
  CHECK(t.trial_index == 1);
  CHECK_FALSE(t.clap_video_time.has_value());
  REQUIRE(t.segments.size() == 3);
  CHECK(primitives_of(t).size() == 2);
  CHECK_FALSE(t.segments.back().action.has_value());
}

TEST_CASE("the bundled napkin trial matches its hand enumeration") {
  Trial t = parse_trial(
      testutil::slurp_file(std::string(CLOM_SOURCE_DIR) +
                           "/tests/data/napkin_s01_t1.clom"));
  CHECK(t.subject_id == "s01");
  CHECK(t.task_id == "napkin");
  CHECK(t.trial_index == 1);
  CHECK(t.clap_video_time == 2.134);
  CHECK(t.metadata.at("cloth") == "small napkin");
  REQUIRE(t.segments.size() == 9);

  std::vector<ManipulationPrimitive> prims = primitives_of(t);
  REQUIRE(prims.size() == 8);
  // Hand enumeration of the file, row by row.
  const char* expected[][3] = {
      {"Pie | - | Crumpled", "PP+Pie | RC@RH | Crumpled", "Grasp corner"},
      {"PP+Pie | RC@RH | Crumpled", "PP | RC@RH | Crumpled", "Lift"},
      {"PP | RC@RH | Crumpled", "2PP | LC@LH+RC@RH | Crumpled", "Trace edge"},
      {"2PP | LC@LH+RC@RH | Crumpled", "2PP | LC@LH+RC@RH | Flat",
       "Unfold in the air"},
      {"2PP | LC@LH+RC@RH | Flat", "Pie | - | Flat", "Place flat on table"},
      {"Pie | - | Flat", "2PP+Pie | FL@LH+FR@RH | Flat", "Grasp corners"},
      {"2PP+Pie | FL@LH+FR@RH | Flat",
       "2PP+Pie | FL_1@LH+FR_1@RH | SemiFolded", "Fold in half"},
      {"2PP+Pie | FL_1@LH+FR_1@RH | SemiFolded", "Pie | - | SemiFolded",
       "Release"},
  };
  for (std::size_t i = 0; i < prims.size(); ++i) {
    CHECK(prims[i].origin == S(expected[i][0]));
    CHECK(prims[i].destination == S(expected[i][1]));
    CHECK(prims[i].label == MotionLabel(expected[i][2]));
  }
}

TEST_CASE("a thirteen-segment trial yields twelve primitives") {
  std::string text =
      "#format: clom/1\n#subject: s\n#task: t\n#trial: 1\n";
  const char* states[] = {"P | LC | Crumpled", "P | RC | Crumpled"};
  for (int i = 0; i < 13; ++i) {
    text += std::to_string(i) + ".0\t" + states[i % 2] + "\t" +
            (i == 12 ? "-" : "go") + "\n";
  }
  CHECK(primitives_of(parse_trial(text)).size() == 12);
}

TEST_CASE("decreasing or equal timestamps are rejected with the row number") {
  const std::string text =
      "#subject: s\n#task: t\n#trial: 1\n"
      "5.000\tPie | - | Crumpled\tGrasp\n"
      "4.000\tPP | LC | Crumpled\t-\n";
  CHECK_THROWS_AS(parse_trial(text), NonMonotonicTime);
  try {
    parse_trial(text);
  } catch (const NonMonotonicTime& e) {
    CHECK(e.row == 2);
    CHECK(e.line == 5);
  }

  const std::string equal_times =
      "#subject: s\n#task: t\n#trial: 1\n"
      "5.000\tPie | - | Crumpled\tGrasp\n"
      "5.000\tPP | LC | Crumpled\t-\n";
  CHECK_THROWS_AS(parse_trial(equal_times), NonMonotonicTime);
}

TEST_CASE("consecutive duplicate states are a labeling error") {
  const std::string literal =
      "#subject: s\n#task: t\n#trial: 1\n"
      "1.0\tPie | - | Crumpled\tGrasp\n"
      "2.0\tPie | - | Crumpled\t-\n";
  CHECK_THROWS_AS(parse_trial(literal), DuplicateConsecutiveState);

  // Different spellings of the same normalized state also collide.
  const std::string spelled =
      "#subject: s\n#task: t\n#trial: 1\n"
      "1.0\t2PP | LC+RC | Flat\tAdjust\n"
      "2.0\tPP+PP | RC+LC | Flat\t-\n";
  CHECK_THROWS_AS(parse_trial(spelled), DuplicateConsecutiveState);
}

TEST_CASE("the final row must not carry an action") {
  const std::string text =
      "#subject: s\n#task: t\n#trial: 1\n"
      "1.0\tPie | - | Crumpled\tGrasp\n"
      "2.0\tPP | LC | Crumpled\tKeep going\n";
  CHECK_THROWS_AS(parse_trial(text), DanglingAction);
  try {
    parse_trial(text);
  } catch (const DanglingAction& e) {
    CHECK(e.row == 2);
    CHECK(e.line == 5);
  }
}

TEST_CASE("a non-final row must carry an action") {
  const std::string text =
      "#subject: s\n#task: t\n#trial: 1\n"
      "1.0\tPie | - | Crumpled\t-\n"
      "2.0\tPP | LC | Crumpled\t-\n";
  CHECK_THROWS_AS(parse_trial(text), MissingAction);
  try {
    parse_trial(text);
  } catch (const MissingAction& e) {
    CHECK(e.row == 1);
    CHECK(e.line == 4);
  }
}

TEST_CASE("header requirements") {
  CHECK_THROWS_AS(parse_trial("1.0\tPie | - | Crumpled\t-\n"), HeaderMissing);
  CHECK_THROWS_AS(parse_trial("#subject: s\n#task: t\n"
                              "1.0\tPie | - | Crumpled\tx\n"
                              "2.0\tP | LC | Flat\t-\n"),
                  HeaderMissing);  // no trial index
  CHECK_THROWS_AS(parse_trial("#format: clom/9\n#subject: s\n#task: t\n"
                              "#trial: 1\n"
                              "1.0\tPie | - | Crumpled\tx\n"
                              "2.0\tP | LC | Flat\t-\n"),
                  RowFormat);  // unsupported format version
  CHECK_THROWS_AS(parse_trial("#subject: s\n#task: t\n#trial: 0\n"
                              "1.0\tPie | - | Crumpled\tx\n"
                              "2.0\tP | LC | Flat\t-\n"),
                  RowFormat);  // trial must be >= 1
}

TEST_CASE("row format diagnostics") {
  const std::string two_cells =
      "#subject: s\n#task: t\n#trial: 1\n"
      "1.0\tPie | - | Crumpled\n"
      "2.0\tP | LC | Flat\t-\n";
  CHECK_THROWS_AS(parse_trial(two_cells), RowFormat);

  const std::string bad_time =
      "#subject: s\n#task: t\n#trial: 1\n"
      "abc\tPie | - | Crumpled\tx\n"
      "2.0\tP | LC | Flat\t-\n";
  CHECK_THROWS_AS(parse_trial(bad_time), RowFormat);

  const std::string bad_state =
      "#subject: s\n#task: t\n#trial: 1\n"
      "1.0\tXX | - | Crumpled\tx\n"
      "2.0\tP | LC | Flat\t-\n";
  CHECK_THROWS_AS(parse_trial(bad_state), RowFormat);

  const std::string late_header =
      "#subject: s\n#task: t\n#trial: 1\n"
      "1.0\tPie | - | Crumpled\tx\n"
      "#clap: 1.0\n"
      "2.0\tP | LC | Flat\t-\n";
  CHECK_THROWS_AS(parse_trial(late_header), RowFormat);

  const std::string one_row =
      "#subject: s\n#task: t\n#trial: 1\n"
      "1.0\tPie | - | Crumpled\t-\n";
  CHECK_THROWS_AS(parse_trial(one_row), TooFewSegments);
}

TEST_CASE("blank lines and CRLF endings are tolerated") {
  const std::string text =
      "#format: clom/1\r\n#subject: s01\r\n#task: t\r\n#trial: 2\r\n\r\n"
      "1.0\tPie | - | Crumpled\tGrasp\r\n"
      "\r\n"
      "2.0\tPP | LC | Crumpled\t-\r\n";
  Trial t = parse_trial(text);
  CHECK(t.trial_index == 2);
  CHECK(t.segments.size() == 2);
}

TEST_CASE("line numbers stay accurate across blank separator lines") {
  const std::string text =
      "#subject: s\n#task: t\n#trial: 1\n\n"
      "1.0\tPie | - | Crumpled\t-\n\n\n"
      "2.0\tPP | LC | Crumpled\t-\n";
  try {
    parse_trial(text);
    FAIL("expected MissingAction");
  } catch (const MissingAction& e) {
    CHECK(e.row == 1);
    CHECK(e.line == 5);  // the offending row, not the blank lines after it
  }
}

TEST_CASE("serialization round-trips and is canonical") {
  Trial t = parse_trial(
      testutil::slurp_file(std::string(CLOM_SOURCE_DIR) +
                           "/tests/data/napkin_s01_t1.clom"));
  const std::string once = serialize_trial(t);
  Trial back = parse_trial(once);
  CHECK(serialize_trial(back) == once);
  CHECK(back.metadata == t.metadata);
  CHECK(back.segments.size() == t.segments.size());
}

TEST_CASE("random trials round-trip through text") {
  std::mt19937_64 rng(321);
  std::vector<SceneState> pool;
  for (int i = 0; i < 6; ++i) pool.push_back(testutil::random_state(rng));
  for (int i = 0; i < 100; ++i) {
    Trial t = testutil::random_trial(rng, pool, "s01", "task", i + 1);
    // Millisecond precision is the format's contract; align expectations.
    for (Segment& seg : t.segments)
      seg.t_start = std::round(seg.t_start * 1000.0) / 1000.0;
    if (t.clap_video_time)
      t.clap_video_time = std::round(*t.clap_video_time * 1000.0) / 1000.0;
    const std::string text = serialize_trial(t);
    Trial back = parse_trial(text);
    REQUIRE(back.segments.size() == t.segments.size());
    for (std::size_t j = 0; j < t.segments.size(); ++j) {
      CHECK(back.segments[j].state == t.segments[j].state);
      CHECK(back.segments[j].t_start == doctest::Approx(t.segments[j].t_start));
      CHECK(back.segments[j].action.has_value() ==
            t.segments[j].action.has_value());
      if (back.segments[j].action)
        CHECK(*back.segments[j].action == *t.segments[j].action);
    }
    CHECK(serialize_trial(back) == text);
  }
}
