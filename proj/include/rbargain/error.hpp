// Copyright 2026 The rbargain Authors. All rights reserved.
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

#ifndef RBARGAIN_ERROR_HPP_
#define RBARGAIN_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace rbargain {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A violated precondition or parameter invariant. `field` names the offending
// input when there is one.
class InvalidParameter : public Error {
 public:
  InvalidParameter(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Parameters sit on a knife-edge where the limit object is not unique.
// `candidates` holds a short description of each neighbouring outcome.
class NonGeneric : public Error {
 public:
  NonGeneric(const std::string& what, std::vector<std::string> candidates)
      : Error(what), candidates_(std::move(candidates)) {}
  const std::vector<std::string>& candidates() const { return candidates_; }

 private:
  std::vector<std::string> candidates_;
};

// Zero-probability observation with no belief policy supplied.
class OffPath : public Error {
 public:
  using Error::Error;
};

inline void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw InvalidParameter(field, what);
}

}  // namespace rbargain

#endif  // RBARGAIN_ERROR_HPP_
