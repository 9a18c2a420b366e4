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

#ifndef CAVCOORD_SRC_JSON_UTIL_H_
#define CAVCOORD_SRC_JSON_UTIL_H_

#include <string>
#include <string_view>

#include "json.hpp"

namespace cavcoord::internal {

using Json = nlohmann::json;

// Parses `text`, converting syntax errors to kConfig errors that name the
// line and column.
Json ParseDocument(std::string_view text);

const Json& RequireField(const Json& object, const char* key,
                         const std::string& path);
double RequireNumber(const Json& object, const char* key,
                     const std::string& path);
int RequireInt(const Json& object, const char* key, const std::string& path);
std::string RequireString(const Json& object, const char* key,
                          const std::string& path);
const Json& RequireArray(const Json& object, const char* key,
                         const std::string& path);

double NumberOr(const Json& object, const char* key, const std::string& path,
                double fallback);
int IntOr(const Json& object, const char* key, const std::string& path,
          int fallback);

std::string Join(const std::string& path, const char* key);
std::string Index(const std::string& path, std::size_t i);

}  // namespace cavcoord::internal

#endif  // CAVCOORD_SRC_JSON_UTIL_H_
