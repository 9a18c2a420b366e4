// Copyright 2026 The cavcoord Authors
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

#ifndef CAVCOORD_ERROR_H_
#define CAVCOORD_ERROR_H_

#include <stdexcept>
#include <string>

namespace cavcoord {

enum class ErrorKind {
  kInvalidArgument,
  kConfig,
  kInfeasible,
  kInternal,
};

// Single exception type for the library. The kind drives the C API error code
// and the CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void ThrowInvalidArgument(const std::string& message) {
  throw Error(ErrorKind::kInvalidArgument, message);
}
[[noreturn]] inline void ThrowConfig(const std::string& message) {
  throw Error(ErrorKind::kConfig, message);
}
[[noreturn]] inline void ThrowInfeasible(const std::string& message) {
  throw Error(ErrorKind::kInfeasible, message);
}
[[noreturn]] inline void ThrowInternal(const std::string& message) {
  throw Error(ErrorKind::kInternal, message);
}

}  // namespace cavcoord

#endif  // CAVCOORD_ERROR_H_
