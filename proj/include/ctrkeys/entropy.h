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
#ifndef CTRKEYS_ENTROPY_H_
#define CTRKEYS_ENTROPY_H_

#include <cstdint>
#include <span>
#include <vector>

namespace ctrkeys {

// Brute-force information measures on empirical distributions, in bits.
// These are the oracle for the claim that a tree's greedy binary splits never
// gain more information than conditioning on the full feature set.

struct LabeledRow {
  std::vector<int64_t> values;
  int label = 0;
};

// Throws Error(kEmptyData).
double Entropy(std::span<const int> labels);

// H(Y | values), grouping rows on their whole value vector.
double ConditionalEntropy(std::span<const LabeledRow> samples);

// H(Y | values restricted to `features`).
double ConditionalEntropy(std::span<const LabeledRow> samples,
                          std::span<const size_t> features);

// H(Y) - [P(x_f < t) H(Y | x_f < t) + P(x_f >= t) H(Y | x_f >= t)].
// Throws Error(kDegenerateSplit) if either side is empty.
double InfoGainBinarySplit(std::span<const LabeledRow> samples, size_t feature,
                           int64_t threshold);

struct BoundReport {
  double ig_best_path = 0.0;
  double full_gain = 0.0;
  bool holds = false;
};

// ig_best_path: gain of a greedy tree that at every node takes the best
// binary split over the features not yet used on its path (so each feature
// splits at most once per path), recursing until features run out or the
// node is pure. full_gain: H(Y) - H(Y | feature_set).
BoundReport VerifyLowerBound(std::span<const LabeledRow> samples,
                             std::span<const size_t> feature_set);

struct BoundSweepConfig {
  int n_trials = 1000;
  uint64_t seed = 1;
  int min_cardinality = 2;
  int max_cardinality = 5;
  int max_features = 2;
  int min_samples = 200;
  int max_samples = 2000;
};

struct BoundSweepReport {
  int trials = 0;
  int violations = 0;
  // Largest ig_best_path - full_gain seen (negative when the bound is slack
  // everywhere).
  double max_excess = 0.0;
  double mean_gap = 0.0;
};

// Draws n_trials random joint distributions over 1..max_features features
// and a binary label, samples them, and checks VerifyLowerBound on each.
BoundSweepReport RunBoundSweep(const BoundSweepConfig& config);

}  // namespace ctrkeys

#endif  // CTRKEYS_ENTROPY_H_
