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
#ifndef CTRKEYS_COUNT_STORE_H_
#define CTRKEYS_COUNT_STORE_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctrkeys/counting_key.h"
#include "ctrkeys/dataset.h"
#include "ctrkeys/schema.h"

namespace ctrkeys {

// Past impressions and engagements of one value tuple.
struct CountRecord {
  int64_t impressions = 0;
  int64_t engagements = 0;

  bool present() const { return impressions > 0; }
  // engagements / impressions, or 0 when nothing was seen.
  double ctr() const {
    return impressions > 0 ? static_cast<double>(engagements) /
                                 static_cast<double>(impressions)
                           : 0.0;
  }
  bool operator==(const CountRecord&) const = default;
};

// Aggregated counts for a list of keys. Each key's table maps the projected
// tuple (user_id, key features...) to its record.
class CountTable {
 public:
  using Records = std::unordered_map<ValueTuple, CountRecord, ValueTupleHash>;

  static constexpr int64_t kNoTimestamp = std::numeric_limits<int64_t>::min();

  // Throws Error(kMissingKeys) for an empty key list and
  // Error(kUnknownFeature) for keys not in the schema.
  CountTable(const FeatureSchema& schema, std::vector<CountingKey> keys);

  const std::vector<CountingKey>& keys() const { return keys_; }
  size_t num_keys() const { return keys_.size(); }
  const Records& records(size_t key_index) const { return tables_[key_index]; }
  size_t num_entries() const;

  // Null when the tuple was never seen.
  const CountRecord* Find(size_t key_index, const ValueTuple& tuple) const;
  ValueTuple Project(size_t key_index, const Impression& impression) const {
    return projectors_[key_index](impression);
  }

  // Smallest and largest timestamp absorbed; kNoTimestamp while empty.
  int64_t window_start() const { return window_start_; }
  int64_t window_end() const { return window_end_; }

  // Adds one impression to every key. Throws Error(kOutOfOrderUpdate) if its
  // timestamp is before window_end().
  void Absorb(const Impression& impression);

  // Directly sets a record; used by the table reader.
  void Set(size_t key_index, ValueTuple tuple, CountRecord record);
  void SetWindow(int64_t start, int64_t end);

  bool operator==(const CountTable& other) const;

 private:
  std::vector<CountingKey> keys_;
  std::vector<KeyProjector> projectors_;
  std::vector<Records> tables_;
  int64_t window_start_ = kNoTimestamp;
  int64_t window_end_ = kNoTimestamp;
};

// Single pass over a sorted history.
CountTable BuildCounts(const Dataset& history,
                       const std::vector<CountingKey>& keys);

// Same increments as BuildCounts for one more impression. Join before
// updating so that an impression never sees its own label.
void StreamUpdate(CountTable& table, const Impression& impression);

// 3 values per key in key order: impressions, engagements, past CTR. Unseen
// tuples give (0, 0, 0) with present = 0 for all three slots.
struct JoinedCounts {
  std::vector<double> values;
  std::vector<uint8_t> present;
};

JoinedCounts JoinCounts(const Impression& impression, const CountTable& table);

// Per key: (sum of impressions, sum of engagements) over all tuples.
std::vector<std::pair<int64_t, int64_t>> CountTotals(const CountTable& table);

// Header lines start with '#':
//   #key<TAB><index><TAB><key features joined by '+'>
//   #window<TAB><start><TAB><end>
// then one record per line, sorted by key index and tuple:
//   <key index><TAB><tuple, comma joined><TAB><impressions><TAB><engagements>
// The CTR is recomputed on load.
void WriteCountTable(const CountTable& table, std::ostream& out);
CountTable ParseCountTable(std::istream& in, const FeatureSchema& schema);
void WriteCountTable(const CountTable& table, const std::string& path);
CountTable ReadCountTable(const std::string& path, const FeatureSchema& schema);

}  // namespace ctrkeys

#endif  // CTRKEYS_COUNT_STORE_H_
