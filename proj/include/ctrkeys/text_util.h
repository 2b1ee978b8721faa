/*
 * Copyright 2026 The ctrkeys Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef CTRKEYS_TEXT_UTIL_H_
#define CTRKEYS_TEXT_UTIL_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctrkeys {

std::vector<std::string_view> Split(std::string_view line, char delimiter);

std::string_view Trim(std::string_view text);

std::optional<int64_t> ParseInt64(std::string_view text);
std::optional<double> ParseDouble(std::string_view text);

// Shortest representation that parses back to the identical double.
std::string FormatDouble(double value);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

// A "key = value" text file. Lines of the form "[name]" open a named stanza;
// entries before the first stanza are top-level. '#' starts a comment.
struct ConfigDocument {
  struct Stanza {
    std::string name;
    std::vector<ConfigEntry> entries;
  };
  std::vector<ConfigEntry> entries;
  std::vector<Stanza> stanzas;
};

// Throws Error(kInvalidConfig) on a line that is neither.
ConfigDocument ParseConfigDocument(std::istream& in);

}  // namespace ctrkeys

#endif  // CTRKEYS_TEXT_UTIL_H_
