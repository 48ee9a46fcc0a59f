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

#include "clom/stateparse.hpp"

#include <array>
#include <cctype>
#include <sstream>

namespace clom {

SyntaxError::SyntaxError(std::size_t offset_in, std::string expected_in)
    : Error("syntax error at offset " + std::to_string(offset_in) +
            ": expected " + expected_in),
      offset(offset_in),
      expected(std::move(expected_in)) {}

UnknownGeometry::UnknownGeometry(std::string token_in, std::size_t offset_in)
    : Error("unknown geometry '" + token_in + "' at offset " +
            std::to_string(offset_in)),
      token(std::move(token_in)),
      offset(offset_in) {}

UnknownConfig::UnknownConfig(std::string token_in, std::size_t offset_in)
    : Error("unknown cloth configuration '" + token_in + "' at offset " +
            std::to_string(offset_in)),
      token(std::move(token_in)),
      offset(offset_in) {}

namespace {

constexpr std::array<std::string_view, 5> kConfigTokens = {
    "Crumpled", "Flat", "Folded", "SemiFolded", "SemiFlat"};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }

// Cursor over one field of the input. `base` maps local positions back to
// byte offsets in the original text for error reporting.
struct Cursor {
  std::string_view s;
  std::size_t base = 0;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && is_space(s[pos])) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() const { return pos < s.size() ? s[pos] : '\0'; }
  std::size_t offset() const { return base + pos; }

  // Maximal alphanumeric run at the cursor, for error messages.
  std::string alnum_run() const {
    std::size_t end = pos;
    while (end < s.size() && is_alnum(s[end])) ++end;
    return std::string(s.substr(pos, end - pos));
  }

  int read_int(const char* what) {
    skip_ws();
    if (pos >= s.size() || !is_digit(s[pos]))
      throw SyntaxError(offset(), what);
    long v = 0;
    while (pos < s.size() && is_digit(s[pos])) {
      v = v * 10 + (s[pos] - '0');
      if (v > 1000000) throw SyntaxError(offset(), "a smaller integer");
      ++pos;
    }
    return static_cast<int>(v);
  }
};

// UTF-8 for Greek capital pi, accepted as an alias of "Pi".
constexpr char kPiByte0 = static_cast<char>(0xCE);
constexpr char kPiByte1 = static_cast<char>(0xA0);

bool starts_geom(const Cursor& c) {
  char ch = c.peek();
  return ch == 'P' || ch == 'L' || ch == kPiByte0;
}

GraspGeometry parse_geom(Cursor& c) {
  c.skip_ws();
  GraspGeometry g;
  if (c.peek() == kPiByte0 && c.pos + 1 < c.s.size() &&
      c.s[c.pos + 1] == kPiByte1) {
    g.shape = GraspShape::Plane;
    c.pos += 2;
  } else if (c.peek() == 'P') {
    ++c.pos;
    if (c.peek() == 'i') {
      g.shape = GraspShape::Plane;
      ++c.pos;
    } else {
      g.shape = GraspShape::Point;
    }
  } else if (c.peek() == 'L') {
    g.shape = GraspShape::Line;
    ++c.pos;
  } else {
    std::string run = c.alnum_run();
    if (run.empty()) throw SyntaxError(c.offset(), "a geometry (P, L or Pi)");
    throw UnknownGeometry(run, c.offset());
  }
  if (c.peek() == 'e') {
    g.extrinsic = true;
    ++c.pos;
  }
  return g;
}

GraspUnit parse_unit(Cursor& c) {
  GraspUnit unit;
  unit.geometries.push_back(parse_geom(c));
  c.skip_ws();
  if (starts_geom(c)) unit.geometries.push_back(parse_geom(c));
  c.skip_ws();
  if (starts_geom(c))
    throw SyntaxError(c.offset(), "'+' or end (a unit has at most 2 geometries)");
  return unit;
}

GraspType parse_grasp_type_at(Cursor& c) {
  GraspType gt;
  while (true) {
    c.skip_ws();
    int count = 1;
    if (is_digit(c.peek())) {
      std::size_t at = c.offset();
      count = c.read_int("a replication count");
      if (count < 2)
        throw SyntaxError(at, "a replication count of at least 2");
    }
    GraspUnit unit = parse_unit(c);
    for (int i = 0; i < count; ++i) gt.units.push_back(unit);
    c.skip_ws();
    if (c.peek() == '+') {
      ++c.pos;
      continue;
    }
    break;
  }
  if (!c.done())
    throw SyntaxError(c.offset(), "'+' or end of grasp type");
  return gt;
}

GraspBinding parse_binding_at(Cursor& c, const Vocabulary& vocab) {
  c.skip_ws();
  std::size_t at = c.offset();
  std::string loc = c.alnum_run();
  if (loc.empty() || is_digit(loc[0]))
    throw SyntaxError(at, "a location token");
  c.pos += loc.size();
  auto rank = vocab.rank(loc);
  if (!rank) throw UnknownLocation(loc, at);
  GraspBinding b{*rank, loc, std::nullopt, std::nullopt};
  c.skip_ws();
  if (c.peek() == '_') {
    ++c.pos;
    std::size_t lat = c.offset();
    int layer = c.read_int("a layer index");
    if (layer < 1) throw SyntaxError(lat, "a layer index of at least 1");
    b.layer = layer;
  }
  c.skip_ws();
  if (c.peek() == '@') {
    ++c.pos;
    c.skip_ws();
    std::size_t hat = c.offset();
    std::string hand = c.alnum_run();
    c.pos += hand.size();
    if (hand == "LH")
      b.hand = Hand::Left;
    else if (hand == "RH")
      b.hand = Hand::Right;
    else
      throw SyntaxError(hat, "'LH' or 'RH'");
  }
  return b;
}

std::vector<GraspBinding> parse_bindings_at(Cursor& c,
                                            const Vocabulary& vocab) {
  std::vector<GraspBinding> bindings;
  c.skip_ws();
  if (c.peek() == '-') {
    ++c.pos;
    if (!c.done()) throw SyntaxError(c.offset(), "end of bindings after '-'");
    return bindings;
  }
  if (c.done()) return bindings;  // empty field equals "-" in lenient input
  while (true) {
    bindings.push_back(parse_binding_at(c, vocab));
    c.skip_ws();
    if (c.peek() == '+') {
      ++c.pos;
      continue;
    }
    break;
  }
  if (!c.done()) throw SyntaxError(c.offset(), "'+' or end of bindings");
  return bindings;
}

ClothConfig parse_config_at(Cursor& c) {
  c.skip_ws();
  std::size_t at = c.offset();
  std::string token = c.alnum_run();
  if (token.empty()) throw SyntaxError(at, "a cloth configuration");
  c.pos += token.size();
  if (!c.done()) throw SyntaxError(c.offset(), "end of state after configuration");
  for (std::size_t i = 0; i < kConfigTokens.size(); ++i)
    if (kConfigTokens[i] == token) return static_cast<ClothConfig>(i);
  throw UnknownConfig(token, at);
}

struct Field {
  std::string_view text;
  std::size_t base;
};

// Splits `text` into the three grammar fields. Canonical input uses "|";
// the lenient reader also accepts prose-style inline forms with "," or "-"
// separators and an optional outer pair of parentheses.
std::array<Field, 3> split_fields(std::string_view text) {
  std::size_t lo = 0, hi = text.size();
  while (lo < hi && is_space(text[lo])) ++lo;
  while (hi > lo && is_space(text[hi - 1])) --hi;
  if (lo >= hi) throw SyntaxError(lo, "a scene state");
  if (text[lo] == '(' && text[hi - 1] == ')') {
    ++lo;
    --hi;
  }
  std::string_view body = text.substr(lo, hi - lo);

  char sep = 0;
  for (char candidate : {'|', ',', '-'}) {
    if (body.find(candidate) != std::string_view::npos) {
      sep = candidate;
      break;
    }
  }
  if (sep == 0) throw SyntaxError(lo + body.size(), "a field separator");

  std::vector<Field> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == sep) {
      parts.push_back({body.substr(start, i - start), lo + start});
      start = i + 1;
    }
  }
  if (sep == '-') {
    // "-" doubles as the empty-bindings marker, so "GT--C" and "GT---C"
    // both denote an empty middle field.
    auto blank = [](const Field& f) {
      for (char ch : f.text)
        if (!is_space(ch)) return false;
      return true;
    };
    if (parts.size() == 4 && blank(parts[1]) && blank(parts[2]))
      parts.erase(parts.begin() + 2);
  }
  if (parts.size() != 3) {
    std::size_t at = parts.size() > 3 ? parts[3].base : lo + body.size();
    throw SyntaxError(at, "exactly 3 fields (grasp type, bindings, configuration)");
  }
  return {parts[0], parts[1], parts[2]};
}

}  // namespace

SceneState parse_state(std::string_view text, const Vocabulary& vocab) {
  auto fields = split_fields(text);
  Cursor c0{fields[0].text, fields[0].base};
  Cursor c1{fields[1].text, fields[1].base};
  Cursor c2{fields[2].text, fields[2].base};
  SceneState s;
  s.grasp_type = parse_grasp_type_at(c0);
  s.bindings = parse_bindings_at(c1, vocab);
  s.config = parse_config_at(c2);
  normalize_state(s, vocab);
  return s;
}

GraspType parse_grasp_type(std::string_view text) {
  Cursor c{text, 0};
  GraspType gt = parse_grasp_type_at(c);
  for (auto& u : gt.units) std::sort(u.geometries.begin(), u.geometries.end());
  std::sort(gt.units.begin(), gt.units.end());
  return gt;
}

GraspBinding parse_binding(std::string_view text, const Vocabulary& vocab) {
  Cursor c{text, 0};
  GraspBinding b = parse_binding_at(c, vocab);
  if (!c.done()) throw SyntaxError(c.offset(), "end of binding");
  return b;
}

ClothConfig parse_config(std::string_view text) {
  Cursor c{text, 0};
  return parse_config_at(c);
}

namespace {

std::string geom_token(const GraspGeometry& g) {
  std::string t;
  switch (g.shape) {
    case GraspShape::Point: t = "P"; break;
    case GraspShape::Line: t = "L"; break;
    case GraspShape::Plane: t = "Pi"; break;
  }
  if (g.extrinsic) t += "e";
  return t;
}

std::string unit_token(const GraspUnit& u) {
  std::string t;
  for (const auto& g : u.geometries) t += geom_token(g);
  return t;
}

}  // namespace

std::string serialize_grasp_type(const GraspType& grasp_type) {
  std::string out;
  const auto& units = grasp_type.units;
  for (std::size_t i = 0; i < units.size();) {
    std::size_t j = i;
    while (j < units.size() && units[j] == units[i]) ++j;
    if (!out.empty()) out += "+";
    std::size_t run = j - i;
    if (run >= 2) out += std::to_string(run);
    out += unit_token(units[i]);
    i = j;
  }
  return out;
}

std::string serialize_binding(const GraspBinding& binding) {
  std::string out = binding.location;
  if (binding.layer) out += "_" + std::to_string(*binding.layer);
  if (binding.hand) out += binding.hand == Hand::Left ? "@LH" : "@RH";
  return out;
}

std::string serialize_bindings(const std::vector<GraspBinding>& bindings) {
  if (bindings.empty()) return "-";
  std::string out;
  for (const auto& b : bindings) {
    if (!out.empty()) out += "+";
    out += serialize_binding(b);
  }
  return out;
}

std::string to_token(ClothConfig config) {
  return std::string(kConfigTokens[static_cast<std::size_t>(config)]);
}

std::string serialize_state(const SceneState& state) {
  return serialize_grasp_type(state.grasp_type) + " | " +
         serialize_bindings(state.bindings) + " | " + to_token(state.config);
}

}  // namespace clom
