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

#include "json_util.h"

#include <cmath>

#include "cavcoord/error.h"

namespace cavcoord::internal {
namespace {

void LineAndColumn(std::string_view text, std::size_t byte, int& line,
                   int& column) {
  line = 1;
  column = 1;
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
}

}  // namespace

Json ParseDocument(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    int line = 0;
    int column = 0;
    // nlohmann reports the byte index just past the offending token.
    LineAndColumn(text, e.byte > 0 ? e.byte - 1 : 0, line, column);
    ThrowConfig("parse error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + e.what());
  }
}

std::string Join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

std::string Index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& RequireField(const Json& object, const char* key,
                         const std::string& path) {
  if (!object.is_object()) ThrowConfig(path + ": expected a table");
  auto it = object.find(key);
  if (it == object.end()) ThrowConfig(Join(path, key) + ": missing field");
  return *it;
}

double RequireNumber(const Json& object, const char* key,
                     const std::string& path) {
  const Json& value = RequireField(object, key, path);
  if (!value.is_number()) ThrowConfig(Join(path, key) + ": expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) ThrowConfig(Join(path, key) + ": must be finite");
  return x;
}

int RequireInt(const Json& object, const char* key, const std::string& path) {
  const Json& value = RequireField(object, key, path);
  if (!value.is_number_integer()) {
    ThrowConfig(Join(path, key) + ": expected an integer");
  }
  return value.get<int>();
}

std::string RequireString(const Json& object, const char* key,
                          const std::string& path) {
  const Json& value = RequireField(object, key, path);
  if (!value.is_string()) ThrowConfig(Join(path, key) + ": expected a string");
  return value.get<std::string>();
}

const Json& RequireArray(const Json& object, const char* key,
                         const std::string& path) {
  const Json& value = RequireField(object, key, path);
  if (!value.is_array()) ThrowConfig(Join(path, key) + ": expected an array");
  return value;
}

double NumberOr(const Json& object, const char* key, const std::string& path,
                double fallback) {
  if (!object.is_object() || !object.contains(key)) return fallback;
  return RequireNumber(object, key, path);
}

int IntOr(const Json& object, const char* key, const std::string& path,
          int fallback) {
  if (!object.is_object() || !object.contains(key)) return fallback;
  return RequireInt(object, key, path);
}

}  // namespace cavcoord::internal
