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

#include "ola/error.h"

#include "ola/series.h"

namespace ola {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return "invalid-argument";
    case ErrorKind::kIo:
      return "io";
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kValidation:
      return "validation";
    case ErrorKind::kQuadrature:
      return "quadrature";
    case ErrorKind::kNumeric:
      return "numeric";
    case ErrorKind::kDegenerateLayer:
      return "degenerate-layer";
    case ErrorKind::kLookup:
      return "lookup";
    case ErrorKind::kBoundUnreachable:
      return "bound-unreachable";
    case ErrorKind::kTooLarge:
      return "too-large";
  }
  return "unknown";
}

QuadratureError::QuadratureError(int degree, double coarse, double refined)
    : Error(ErrorKind::kQuadrature,
            "coefficient " + std::to_string(degree) +
                " did not converge under rule refinement (" +
                FormatExact(coarse) + " vs " + FormatExact(refined) + ")"),
      degree_(degree) {}

DegenerateLayerError::DegenerateLayerError(int layer)
    : Error(ErrorKind::kDegenerateLayer,
            "activation layer " + std::to_string(layer) +
                " has zero input variance"),
      layer_(layer) {}

}  // namespace ola
