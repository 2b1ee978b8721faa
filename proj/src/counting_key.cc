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
#include "ctrkeys/counting_key.h"

#include <algorithm>
#include <fstream>
#include <istream>

#include "ctrkeys/errors.h"
#include "ctrkeys/rng.h"
#include "ctrkeys/text_util.h"

namespace ctrkeys {

CountingKey::CountingKey(std::vector<std::string> features)
    : features_(std::move(features)) {
  std::sort(features_.begin(), features_.end());
  features_.erase(std::unique(features_.begin(), features_.end()),
                  features_.end());
  if (features_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "counting key with no features");
  }
  for (const auto& f : features_) {
    if (f.empty() || f == "user_id" || f == "ad_id" || IsReservedName(f)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "invalid counting key member: '" + f + "'");
    }
  }
}

std::string CountingKey::ToString() const { return Join(features_, "+"); }

CountingKey CountingKey::Parse(const std::string& text) {
  std::vector<std::string> names;
  for (const auto part : Split(Trim(text), '+')) {
    names.emplace_back(Trim(part));
  }
  return CountingKey(std::move(names));
}

size_t ValueTupleHash::operator()(const ValueTuple& tuple) const {
  uint64_t h = 0x243f6a8885a308d3ULL;
  for (const int64_t v : tuple) {
    h = Mix64(h ^ static_cast<uint64_t>(v));
  }
  return static_cast<size_t>(h);
}

KeyProjector::KeyProjector(const FeatureSchema& schema, const CountingKey& key) {
  columns_.reserve(key.size());
  for (const auto& name : key.features()) {
    columns_.push_back(schema.RequireIndex(name));
  }
}

ValueTuple KeyProjector::operator()(const Impression& impression) const {
  ValueTuple tuple;
  tuple.reserve(columns_.size() + 1);
  tuple.push_back(impression.user_id);
  for (const size_t c : columns_) tuple.push_back(impression.values[c]);
  return tuple;
}

ValueTuple Project(const FeatureSchema& schema, const Impression& impression,
                   const CountingKey& key) {
  return KeyProjector(schema, key)(impression);
}

std::vector<CountingKey> ParseKeys(std::istream& in) {
  std::vector<CountingKey> keys;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty()) continue;
    keys.push_back(CountingKey::Parse(line));
  }
  return keys;
}

std::vector<CountingKey> ReadKeys(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  return ParseKeys(in);
}

void WriteKeys(const std::vector<CountingKey>& keys, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path);
  for (const auto& key : keys) out << key.ToString() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path);
}

}  // namespace ctrkeys
