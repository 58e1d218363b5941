// Copyright 2026 The OLA Authors
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

#ifndef OLA_ERROR_H_
#define OLA_ERROR_H_

#include <stdexcept>
#include <string>

namespace ola {

// Error families. The CLI maps each family to its own exit code.
enum class ErrorKind {
  kInvalidArgument = 1,
  kIo,
  kParse,
  kValidation,
  kQuadrature,
  kNumeric,
  kDegenerateLayer,
  kLookup,
  kBoundUnreachable,
  kTooLarge,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when a projection coefficient does not survive rule refinement.
class QuadratureError : public Error {
 public:
  QuadratureError(int degree, double coarse, double refined);

  int degree() const { return degree_; }

 private:
  int degree_;
};

class DegenerateLayerError : public Error {
 public:
  explicit DegenerateLayerError(int layer);

  int layer() const { return layer_; }

 private:
  int layer_;
};

}  // namespace ola

#endif  // OLA_ERROR_H_
