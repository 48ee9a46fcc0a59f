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

#ifndef CLOM_ERROR_HPP
#define CLOM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace clom {

/// Base class of all library errors. Subclasses carry structured fields
/// (byte offset, row number, offending token) next to the message.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace clom

#endif  // CLOM_ERROR_HPP
