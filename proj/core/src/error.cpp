// Copyright 2026 The cpkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cpkit/error.hpp"

namespace cpkit {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidInput:
      return "invalid input";
    case ErrorKind::kInvalidParameter:
      return "invalid parameter";
    case ErrorKind::kInvalidState:
      return "invalid state";
    case ErrorKind::kIndex:
      return "index out of range";
    case ErrorKind::kSchema:
      return "schema mismatch";
    case ErrorKind::kFormat:
      return "format error";
    case ErrorKind::kCorruption:
      return "corrupt data";
    case ErrorKind::kValidation:
      return "validation error";
    case ErrorKind::kConfig:
      return "configuration error";
  }
  return "error";
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kInvalidParameter:
    case ErrorKind::kConfig:
      return 3;
    default:
      return 2;
  }
}

void raise(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace cpkit
