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
#include "ctrkeys/features.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ctrkeys/errors.h"
#include "ctrkeys/rng.h"

namespace ctrkeys {

namespace {

constexpr uint64_t kSparseSalt = 0x7370617273656b65ULL;

int32_t SaturatingCount(double v) {
  constexpr double kMax = std::numeric_limits<int32_t>::max();
  return static_cast<int32_t>(std::min(v, kMax));
}

}  // namespace

std::string_view FeatureSetName(FeatureSet set) {
  switch (set) {
    case FeatureSet::kBase:
      return "BASE";
    case FeatureSet::kAcf:
      return "ACF";
    case FeatureSet::kRandomSparse:
      return "RANDOM-SPARSE";
  }
  return "?";
}

FeatureSet ParseFeatureSet(std::string_view name) {
  if (name == "BASE") return FeatureSet::kBase;
  if (name == "ACF") return FeatureSet::kAcf;
  if (name == "RANDOM-SPARSE") return FeatureSet::kRandomSparse;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown feature set '" + std::string(name) + "'");
}

std::vector<CountingKey> SampleRandomSparseKeys(const FeatureSchema& schema,
                                                int k, uint64_t seed) {
  const size_t n = schema.size();
  if (n < 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "random sparse keys need at least 3 features");
  }
  std::vector<std::vector<std::string>> subsets;
  const auto names = schema.Names();
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = a + 1; b < n; ++b) {
      for (size_t c = b + 1; c < n; ++c) {
        subsets.push_back({names[a], names[b], names[c]});
      }
    }
  }
  if (k < 1 || static_cast<size_t>(k) > subsets.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "k must be in [1, " + std::to_string(subsets.size()) + "]");
  }
  // Partial Fisher-Yates.
  CounterRng rng(HashWords({seed, kSparseSalt}));
  std::vector<CountingKey> keys;
  for (size_t i = 0; i < static_cast<size_t>(k); ++i) {
    const size_t j = i + rng.Below(subsets.size() - i);
    std::swap(subsets[i], subsets[j]);
    keys.emplace_back(subsets[i]);
  }
  return keys;
}

FeatureBuilder::FeatureBuilder(const FeatureSchema& schema,
                               const CountTable* counts)
    : schema_(schema), counts_(counts) {}

std::vector<std::string> FeatureBuilder::CountingFeatureNames() const {
  std::vector<std::string> names;
  if (counts_ == nullptr) return names;
  for (const auto& key : counts_->keys()) {
    const std::string base = key.ToString();
    names.push_back(base + ":impressions");
    names.push_back(base + ":engagements");
    names.push_back(base + ":ctr");
  }
  return names;
}

FeatureRow FeatureBuilder::Build(const Impression& impression) const {
  if (impression.values.size() != schema_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "impression has " + std::to_string(impression.values.size()) +
                    " values, schema has " + std::to_string(schema_.size()));
  }
  FeatureRow row;
  row.contextual = impression.values;
  if (counts_ != nullptr) {
    JoinedCounts joined = JoinCounts(impression, *counts_);
    row.counts = std::move(joined.values);
    row.present = std::move(joined.present);
  }
  return row;
}

std::vector<int32_t> FeatureBuilder::TreeRow(const FeatureRow& row) const {
  std::vector<int32_t> out = row.contextual;
  for (size_t j = 0; j < row.counts.size(); ++j) {
    if (j % 3 == 2) {
      out.push_back(static_cast<int32_t>(std::lround(row.counts[j] * 1000.0)));
    } else {
      out.push_back(SaturatingCount(row.counts[j]));
    }
  }
  return out;
}

std::vector<std::string> FeatureBuilder::TreeFeatureNames() const {
  std::vector<std::string> names = schema_.Names();
  for (auto& n : CountingFeatureNames()) names.push_back(std::move(n));
  return names;
}

}  // namespace ctrkeys
