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
#include "ctrkeys/metrics.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctrkeys/errors.h"

namespace ctrkeys {

namespace {

void CheckLengths(size_t a, size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                "length mismatch: " + std::to_string(a) + " vs " +
                    std::to_string(b));
  }
}

}  // namespace

double CrossEntropy(std::span<const double> preds, std::span<const int> labels) {
  CheckLengths(preds.size(), labels.size());
  if (preds.empty()) throw Error(ErrorCode::kEmptyInput, "no predictions");
  double sum = 0.0;
  for (size_t i = 0; i < preds.size(); ++i) {
    const double p = std::clamp(preds[i], kPredictionClip, 1.0 - kPredictionClip);
    sum -= labels[i] == 1 ? std::log(p) : std::log1p(-p);
  }
  return sum / static_cast<double>(preds.size());
}

double BaselineCrossEntropy(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kDegenerateBaseline,
                "baseline CTR must be strictly inside (0, 1)");
  }
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double Rce(std::span<const double> preds, std::span<const int> labels,
           double baseline_ctr) {
  const double base = BaselineCrossEntropy(baseline_ctr);
  return 100.0 * (1.0 - CrossEntropy(preds, labels) / base);
}

double Coverage(std::span<const double> values,
                std::span<const uint8_t> present) {
  CheckLengths(values.size(), present.size());
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "no values");
  size_t hits = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (present[i] && values[i] != 0.0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

std::optional<double> Pearson(std::span<const double> values,
                              std::span<const uint8_t> present,
                              std::span<const int> labels) {
  CheckLengths(values.size(), present.size());
  CheckLengths(values.size(), labels.size());
  double n = 0.0;
  double mx = 0.0;
  double my = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (!present[i]) continue;
    n += 1.0;
    mx += values[i];
    my += labels[i];
  }
  if (n < 2.0) {
    throw Error(ErrorCode::kInsufficientData,
                "pearson needs at least 2 present pairs");
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    if (!present[i]) continue;
    const double dx = values[i] - mx;
    const double dy = labels[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

int64_t ExperimentReport::TotalBucketCount() const {
  int64_t n = 0;
  for (const auto& b : buckets) n += b.n;
  return n;
}

const std::string* ExperimentReport::ConfigValue(const std::string& key) const {
  for (const auto& [k, v] : config) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::vector<FeatureQuality> AnalyzeFeatures(
    const std::vector<std::string>& names,
    const std::vector<std::vector<double>>& values,
    const std::vector<std::vector<uint8_t>>& present,
    std::span<const int> labels) {
  CheckLengths(names.size(), values.size());
  CheckLengths(names.size(), present.size());
  std::vector<FeatureQuality> out;
  for (size_t f = 0; f < names.size(); ++f) {
    FeatureQuality q;
    q.name = names[f];
    q.coverage = Coverage(values[f], present[f]);
    q.n_present = std::count(present[f].begin(), present[f].end(), 1);
    if (q.n_present >= 2) q.pearson = Pearson(values[f], present[f], labels);
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace ctrkeys
