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

#ifndef CLOM_ANNOTATION_HPP
#define CLOM_ANNOTATION_HPP

#include <string>
#include <string_view>
#include <vector>

#include "clom/model.hpp"

namespace clom {

// `.clom` trial annotation files are line-oriented UTF-8:
//
//   #format: clom/1
//   #subject: s01
//   #task: napkin
//   #trial: 1
//   #clap: 2.134            (optional; video time of the sync clap)
//   #cloth: small napkin    (free text; unknown keys preserved)
//   0.000<TAB>Pie | - | Crumpled<TAB>Grasp corner
//   4.250<TAB>PP+Pie | RC | Crumpled<TAB>Lift
//   ...
//   21.900<TAB>Pie | - | Folded<TAB>-
//
// One TAB-separated row per segment; the final row carries "-" in place of
// an action. Times are seconds from video start, millisecond precision.

/// Errors carry the 1-based segment-row index (`row`, 0 when the error is
/// not tied to a row) and the 1-based file line (`line`).
class AnnotationError : public Error {
 public:
  AnnotationError(std::string message, int row, int line);
  int row;
  int line;
};

class HeaderMissing : public AnnotationError {
 public:
  explicit HeaderMissing(const std::string& what_is_missing);
};

class NonMonotonicTime : public AnnotationError {
 public:
  NonMonotonicTime(int row, int line);
};

/// Consecutive identical states signal a labeling error: segmentation exists
/// only at changes of scene state.
class DuplicateConsecutiveState : public AnnotationError {
 public:
  DuplicateConsecutiveState(int row, int line);
};

class DanglingAction : public AnnotationError {
 public:
  DanglingAction(int row, int line);
};

class MissingAction : public AnnotationError {
 public:
  MissingAction(int row, int line);
};

class TooFewSegments : public AnnotationError {
 public:
  explicit TooFewSegments(int line);
};

class RowFormat : public AnnotationError {
 public:
  RowFormat(std::string message, int row, int line);
};

Trial parse_trial(std::string_view text,
                  const Vocabulary& vocab = Vocabulary::standard());

/// Canonical file text for a trial; parse_trial round-trips it.
std::string serialize_trial(const Trial& trial);

/// The segments-1 primitives of a valid trial, in order.
std::vector<ManipulationPrimitive> primitives_of(const Trial& trial);

}  // namespace clom

#endif  // CLOM_ANNOTATION_HPP
