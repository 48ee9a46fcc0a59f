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

#ifndef CLOM_STATEPARSE_HPP
#define CLOM_STATEPARSE_HPP

#include <string>
#include <string_view>

#include "clom/model.hpp"

namespace clom {

// Text grammar for scene states:
//
//   state    = graspType sep bindings sep config ;
//   sep      = "|" ;                      (lenient: also "," or "-")
//   graspType= unitRun { "+" unitRun } ;
//   unitRun  = [ INT ] unit ;             (INT >= 2 replicates the unit)
//   unit     = geom [ geom ] ;
//   geom     = ( "P" | "L" | "Pi" ) [ "e" ] ;
//   bindings = "-" | binding { "+" binding } ;
//   binding  = LOC [ "_" INT ] [ "@" ( "LH" | "RH" ) ] ;
//   config   = "Crumpled" | "Flat" | "Folded" | "SemiFolded" | "SemiFlat" ;
//
// Whitespace around tokens is ignored; tokens are case-sensitive. The Greek
// capital pi (two-byte UTF-8) is accepted on input and normalized to "Pi".
// A lenient reader additionally accepts the inline renderings
// "(2PP, LC+RC, Flat)" and "2PP-LC+RC-Flat".

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::string expected);
  std::size_t offset;   // byte offset into the original input
  std::string expected; // human-readable expected-token set
};

class UnknownGeometry : public Error {
 public:
  UnknownGeometry(std::string token, std::size_t offset);
  std::string token;
  std::size_t offset;
};

class UnknownConfig : public Error {
 public:
  UnknownConfig(std::string token, std::size_t offset);
  std::string token;
  std::size_t offset;
};

/// Parses a full scene state in any accepted rendering and returns its
/// normalized value. Errors: SyntaxError, UnknownGeometry, UnknownLocation,
/// UnknownConfig, each with a byte offset into `text`.
SceneState parse_state(std::string_view text,
                       const Vocabulary& vocab = Vocabulary::standard());

/// Canonical text: parse_state(serialize_state(s)) == s. States are expected
/// normalized (as produced by parse_state / make_state).
std::string serialize_state(const SceneState& state);

GraspType parse_grasp_type(std::string_view text);
GraspBinding parse_binding(std::string_view text,
                           const Vocabulary& vocab = Vocabulary::standard());
ClothConfig parse_config(std::string_view text);

std::string serialize_grasp_type(const GraspType& grasp_type);
std::string serialize_binding(const GraspBinding& binding);
std::string serialize_bindings(const std::vector<GraspBinding>& bindings);
std::string to_token(ClothConfig config);

}  // namespace clom

#endif  // CLOM_STATEPARSE_HPP
