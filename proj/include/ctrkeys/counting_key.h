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
#ifndef CTRKEYS_COUNTING_KEY_H_
#define CTRKEYS_COUNTING_KEY_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctrkeys/dataset.h"
#include "ctrkeys/schema.h"

namespace ctrkeys {

// A set of contextual feature names. The user id is an implicit member and
// is prepended to every projected tuple. Stored sorted and deduplicated, so
// equality ignores the order the features were given in.
class CountingKey {
 public:
  CountingKey() = default;
  // Throws Error(kInvalidArgument) on an empty set or a reserved name.
  explicit CountingKey(std::vector<std::string> features);

  const std::vector<std::string>& features() const { return features_; }
  size_t size() const { return features_.size(); }

  // Features joined by '+', e.g. "hour_of_day+item_objective".
  std::string ToString() const;
  // Inverse of ToString().
  static CountingKey Parse(const std::string& text);

  auto operator<=>(const CountingKey&) const = default;

 private:
  std::vector<std::string> features_;
};

using ValueTuple = std::vector<int64_t>;

struct ValueTupleHash {
  size_t operator()(const ValueTuple& tuple) const;
};

// Resolves a key's feature names to schema columns once, so projecting many
// impressions does not repeat name lookups.
class KeyProjector {
 public:
  // Throws Error(kUnknownFeature).
  KeyProjector(const FeatureSchema& schema, const CountingKey& key);

  // (user_id, then the key's features in canonical name order).
  ValueTuple operator()(const Impression& impression) const;

  size_t arity() const { return columns_.size() + 1; }

 private:
  std::vector<size_t> columns_;
};

ValueTuple Project(const FeatureSchema& schema, const Impression& impression,
                   const CountingKey& key);

// Key files hold one key per line in ToString() form.
std::vector<CountingKey> ParseKeys(std::istream& in);
std::vector<CountingKey> ReadKeys(const std::string& path);
void WriteKeys(const std::vector<CountingKey>& keys, const std::string& path);

}  // namespace ctrkeys

#endif  // CTRKEYS_COUNTING_KEY_H_
