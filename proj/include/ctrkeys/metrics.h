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
#ifndef CTRKEYS_METRICS_H_
#define CTRKEYS_METRICS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ctrkeys {

inline constexpr double kPredictionClip = 1e-15;

// Mean cross-entropy in nats with predictions clipped to
// [kPredictionClip, 1 - kPredictionClip]. Throws Error(kEmptyInput) and
// Error(kDimensionMismatch).
double CrossEntropy(std::span<const double> preds, std::span<const int> labels);

// Entropy in nats of a constant predictor at the background CTR p.
// Throws Error(kDegenerateBaseline) unless 0 < p < 1.
double BaselineCrossEntropy(double p);

// 100 * (1 - CE / baseline CE). Higher is better.
double Rce(std::span<const double> preds, std::span<const int> labels,
           double baseline_ctr);

// Fraction of entries that are present and non-zero.
double Coverage(std::span<const double> values, std::span<const uint8_t> present);

// Pearson correlation over present pairs. Empty when either side has zero
// variance. Throws Error(kInsufficientData) with fewer than 2 present pairs.
std::optional<double> Pearson(std::span<const double> values,
                              std::span<const uint8_t> present,
                              std::span<const int> labels);

struct BucketRow {
  int64_t start = 0;
  int64_t n = 0;
  double ce = 0.0;
  // NaN when the bucket has no baseline.
  double rce = 0.0;
};

struct FeatureQuality {
  std::string name;
  double coverage = 0.0;
  int64_t n_present = 0;
  std::optional<double> pearson;
};

struct ExperimentReport {
  std::vector<BucketRow> buckets;
  // Ordered key/value echo of the run configuration.
  std::vector<std::pair<std::string, std::string>> config;
  double baseline_ctr = 0.0;
  int64_t n_train = 0;
  int64_t n_eval = 0;
  // RCE pooled over the evaluation predictions of the last day. NaN when
  // there were none.
  double final_rce = 0.0;
  double final_ce = 0.0;
  bool no_holdout = false;
  std::vector<FeatureQuality> features;

  int64_t TotalBucketCount() const;
  const std::string* ConfigValue(const std::string& key) const;
};

// Per-feature coverage and correlation over a table of joined values, one
// column per feature name.
std::vector<FeatureQuality> AnalyzeFeatures(
    const std::vector<std::string>& names,
    const std::vector<std::vector<double>>& values,
    const std::vector<std::vector<uint8_t>>& present,
    std::span<const int> labels);

// Four sections separated by blank lines, each a bracketed title followed by
// a header row and tab-separated data rows:
//   [buckets]      start  n  ce  rce
//   [summary]      key  value
//   [coverage]     feature  coverage  n_present
//   [correlation]  feature  pearson          (pearson may be "undefined")
void EmitReport(const ExperimentReport& report, std::ostream& out);
void EmitReport(const ExperimentReport& report, const std::string& path);
ExperimentReport ParseReport(std::istream& in);
ExperimentReport ReadReport(const std::string& path);

}  // namespace ctrkeys

#endif  // CTRKEYS_METRICS_H_
