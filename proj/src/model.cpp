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

#include "clom/model.hpp"

#include <algorithm>
#include <cctype>

namespace clom {

Vocabulary::Vocabulary(std::vector<std::string> tokens)
    : tokens_(std::move(tokens)) {
  for (const auto& t : tokens_) {
    if (t.empty() || !std::isalpha(static_cast<unsigned char>(t[0])))
      throw std::invalid_argument("location token must start with a letter: '" +
                                  t + "'");
    for (char c : t)
      if (!std::isalnum(static_cast<unsigned char>(c)))
        throw std::invalid_argument("location token must be alphanumeric: '" +
                                    t + "'");
    if (t == "LH" || t == "RH")
      throw std::invalid_argument("location token collides with hand tag: '" +
                                  t + "'");
    if (std::count(tokens_.begin(), tokens_.end(), t) != 1)
      throw std::invalid_argument("duplicate location token: '" + t + "'");
  }
}

const Vocabulary& Vocabulary::standard() {
  static const Vocabulary v({"LC", "RC", "FL", "FR", "I"});
  return v;
}

Vocabulary Vocabulary::with_extras(const std::vector<std::string>& extras) {
  std::vector<std::string> tokens = standard().tokens_;
  tokens.insert(tokens.end(), extras.begin(), extras.end());
  return Vocabulary(std::move(tokens));
}

std::optional<int> Vocabulary::rank(std::string_view token) const {
  for (std::size_t i = 0; i < tokens_.size(); ++i)
    if (tokens_[i] == token) return static_cast<int>(i);
  return std::nullopt;
}

UnknownLocation::UnknownLocation(std::string token_in, std::size_t offset_in)
    : Error("unknown location '" + token_in + "' at offset " +
            std::to_string(offset_in)),
      token(std::move(token_in)),
      offset(offset_in) {}

GraspBinding make_binding(std::string_view location, std::optional<int> layer,
                          std::optional<Hand> hand, const Vocabulary& vocab) {
  auto r = vocab.rank(location);
  if (!r) throw UnknownLocation(std::string(location), 0);
  if (layer && *layer < 1)
    throw std::invalid_argument("layer index must be >= 1");
  return GraspBinding{*r, std::string(location), layer, hand};
}

static void normalize_unit(GraspUnit& unit) {
  if (unit.geometries.empty() || unit.geometries.size() > 2)
    throw std::invalid_argument("grasp unit must have 1 or 2 geometries");
  std::sort(unit.geometries.begin(), unit.geometries.end());
}

void normalize_state(SceneState& state, const Vocabulary& vocab) {
  if (state.grasp_type.units.empty())
    throw std::invalid_argument(
        "grasp type must have at least one unit (all cloth states realize a "
        "grasp)");
  for (auto& u : state.grasp_type.units) normalize_unit(u);
  std::sort(state.grasp_type.units.begin(), state.grasp_type.units.end());
  for (auto& b : state.bindings) {
    auto r = vocab.rank(b.location);
    if (!r) throw UnknownLocation(b.location, 0);
    b.location_rank = *r;
    if (b.layer && *b.layer < 1)
      throw std::invalid_argument("layer index must be >= 1");
  }
  std::sort(state.bindings.begin(), state.bindings.end());
}

SceneState make_state(GraspType grasp_type, std::vector<GraspBinding> bindings,
                      ClothConfig config, const Vocabulary& vocab) {
  SceneState s{std::move(grasp_type), std::move(bindings), config};
  normalize_state(s, vocab);
  return s;
}

std::vector<std::string> lint_state(const SceneState& state) {
  std::vector<std::string> warnings;
  if (state.bindings.empty()) {
    for (const auto& u : state.grasp_type.units) {
      bool subject_side = std::any_of(u.geometries.begin(), u.geometries.end(),
                                      [](const GraspGeometry& g) {
                                        return !g.extrinsic;
                                      });
      if (u.prehensile() && subject_side) {
        warnings.push_back(
            "state has a prehensile subject-side grasp unit but no grasp "
            "locations");
        break;
      }
    }
  }
  return warnings;
}

MotionLabel::MotionLabel(std::string_view raw) {
  // Trim and collapse internal whitespace runs to single spaces.
  std::string collapsed;
  bool in_space = true;  // leading whitespace dropped
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!in_space) collapsed.push_back(' ');
      in_space = true;
    } else {
      collapsed.push_back(c);
      in_space = false;
    }
  }
  while (!collapsed.empty() && collapsed.back() == ' ') collapsed.pop_back();
  text_ = collapsed;
  key_ = collapsed;
  std::transform(key_.begin(), key_.end(), key_.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
}

}  // namespace clom
