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
#ifndef CTRKEYS_DATASET_H_
#define CTRKEYS_DATASET_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctrkeys/schema.h"

namespace ctrkeys {

inline constexpr int64_t kSecondsPerDay = 86400;

// One ad shown to one user. `values` is aligned with the schema.
struct Impression {
  int64_t id = 0;
  int64_t timestamp = 0;
  int64_t user_id = 0;
  int64_t ad_id = 0;
  std::vector<int32_t> values;
  int label = 0;

  bool operator==(const Impression&) const = default;
};

// Impressions ordered by (timestamp, id), validated against a schema.
class Dataset {
 public:
  Dataset() = default;
  // Validates every record, rejects duplicate ids and sorts by (timestamp, id).
  Dataset(FeatureSchema schema, std::vector<Impression> impressions);

  const FeatureSchema& schema() const { return schema_; }
  const std::vector<Impression>& impressions() const { return impressions_; }
  size_t size() const { return impressions_.size(); }
  bool empty() const { return impressions_.empty(); }
  const Impression& operator[](size_t i) const { return impressions_[i]; }

  // Impressions with start <= timestamp < end.
  Dataset Slice(int64_t start, int64_t end) const;

  bool operator==(const Dataset&) const = default;

 private:
  FeatureSchema schema_;
  std::vector<Impression> impressions_;
};

// Throws Error(kSchemaMismatch) if the record does not fit the schema.
void ValidateImpression(const FeatureSchema& schema, const Impression& imp);

// Line format: id, timestamp, user_id, ad_id, label, then one integer per
// schema feature, tab separated.
Dataset ParseDataset(std::istream& in, const FeatureSchema& schema);
Dataset ReadDataset(const std::string& path, const FeatureSchema& schema);
void WriteDataset(const Dataset& dataset, std::ostream& out);
void WriteDataset(const Dataset& dataset, const std::string& path);

}  // namespace ctrkeys

#endif  // CTRKEYS_DATASET_H_
