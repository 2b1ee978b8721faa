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
#ifndef CTRKEYS_FEATURES_H_
#define CTRKEYS_FEATURES_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ctrkeys/count_store.h"
#include "ctrkeys/counting_key.h"
#include "ctrkeys/dataset.h"
#include "ctrkeys/schema.h"

namespace ctrkeys {

enum class FeatureSet { kBase, kAcf, kRandomSparse };

std::string_view FeatureSetName(FeatureSet set);
// Accepts BASE, ACF and RANDOM-SPARSE. Throws Error(kInvalidArgument).
FeatureSet ParseFeatureSet(std::string_view name);

// Samples k distinct keys uniformly from the 3-feature subsets of the schema.
std::vector<CountingKey> SampleRandomSparseKeys(const FeatureSchema& schema,
                                                int k, uint64_t seed);

// Contextual codes and joined counts of one impression.
struct FeatureRow {
  std::vector<int32_t> contextual;
  std::vector<double> counts;
  std::vector<uint8_t> present;
};

// Builds predictor inputs. Without a count table only the contextual features
// are produced. The table is borrowed and read at call time, so a table that
// is updated in place is seen by later calls.
class FeatureBuilder {
 public:
  FeatureBuilder(const FeatureSchema& schema, const CountTable* counts);

  const FeatureSchema& schema() const { return schema_; }
  const CountTable* counts() const { return counts_; }
  size_t num_contextual() const { return schema_.size(); }
  size_t num_counting() const {
    return counts_ == nullptr ? 0 : 3 * counts_->num_keys();
  }
  // "<key>:impressions", "<key>:engagements", "<key>:ctr" per key.
  std::vector<std::string> CountingFeatureNames() const;

  FeatureRow Build(const Impression& impression) const;

  // Ordinal integer row for the tree learner: contextual codes, then counts
  // with the CTR in thousandths.
  std::vector<int32_t> TreeRow(const FeatureRow& row) const;
  std::vector<std::string> TreeFeatureNames() const;

 private:
  FeatureSchema schema_;
  const CountTable* counts_;
};

}  // namespace ctrkeys

#endif  // CTRKEYS_FEATURES_H_
