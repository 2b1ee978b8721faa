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
#include "ctrkeys/entropy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ctrkeys/errors.h"
#include "ctrkeys/rng.h"

namespace ctrkeys {
namespace {

double BinaryEntropy(int64_t positives, int64_t total) {
  if (total == 0 || positives == 0 || positives == total) return 0.0;
  const double p = static_cast<double>(positives) / static_cast<double>(total);
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

struct Counts {
  int64_t total = 0;
  int64_t positives = 0;
};

Counts CountRows(std::span<const LabeledRow> rows) {
  Counts c;
  for (const auto& r : rows) {
    ++c.total;
    c.positives += r.label;
  }
  return c;
}

// Sum over leaves of |leaf| * H(Y | leaf) for the greedy tree rooted at
// `rows`, restricted to splits on `remaining`.
double GreedyWeightedEntropy(std::vector<const LabeledRow*> rows,
                             std::vector<size_t> remaining) {
  int64_t positives = 0;
  for (const auto* r : rows) positives += r->label;
  const auto n = static_cast<int64_t>(rows.size());
  const double here = static_cast<double>(n) * BinaryEntropy(positives, n);
  if (here == 0.0 || remaining.empty()) return here;

  double best_children = std::numeric_limits<double>::infinity();
  size_t best_feature_pos = 0;
  int64_t best_threshold = 0;
  for (size_t pos = 0; pos < remaining.size(); ++pos) {
    const size_t f = remaining[pos];
    std::map<int64_t, Counts> by_value;
    for (const auto* r : rows) {
      auto& c = by_value[r->values[f]];
      ++c.total;
      c.positives += r->label;
    }
    Counts left;
    for (auto it = by_value.begin(); it != by_value.end(); ++it) {
      if (it != by_value.begin()) {
        const double children =
            static_cast<double>(left.total) *
                BinaryEntropy(left.positives, left.total) +
            static_cast<double>(n - left.total) *
                BinaryEntropy(positives - left.positives, n - left.total);
        if (children < best_children) {
          best_children = children;
          best_feature_pos = pos;
          best_threshold = it->first;
        }
      }
      left.total += it->second.total;
      left.positives += it->second.positives;
    }
  }
  if (!std::isfinite(best_children)) return here;  // all remaining constant

  const size_t feature = remaining[best_feature_pos];
  remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_feature_pos));
  std::vector<const LabeledRow*> left_rows;
  std::vector<const LabeledRow*> right_rows;
  for (const auto* r : rows) {
    (r->values[feature] < best_threshold ? left_rows : right_rows).push_back(r);
  }
  rows.clear();
  return GreedyWeightedEntropy(std::move(left_rows), remaining) +
         GreedyWeightedEntropy(std::move(right_rows), remaining);
}

}  // namespace

double Entropy(std::span<const int> labels) {
  if (labels.empty()) throw Error(ErrorCode::kEmptyData, "entropy of nothing");
  int64_t positives = 0;
  for (const int y : labels) positives += y ? 1 : 0;
  return BinaryEntropy(positives, static_cast<int64_t>(labels.size()));
}

double ConditionalEntropy(std::span<const LabeledRow> samples) {
  if (samples.empty()) {
    throw Error(ErrorCode::kEmptyData, "conditional entropy of nothing");
  }
  std::map<std::vector<int64_t>, Counts> groups;
  for (const auto& s : samples) {
    auto& c = groups[s.values];
    ++c.total;
    c.positives += s.label;
  }
  double weighted = 0.0;
  for (const auto& [values, c] : groups) {
    weighted += static_cast<double>(c.total) * BinaryEntropy(c.positives, c.total);
  }
  return weighted / static_cast<double>(samples.size());
}

double ConditionalEntropy(std::span<const LabeledRow> samples,
                          std::span<const size_t> features) {
  std::vector<LabeledRow> projected;
  projected.reserve(samples.size());
  for (const auto& s : samples) {
    LabeledRow r;
    r.label = s.label;
    for (const size_t f : features) r.values.push_back(s.values.at(f));
    projected.push_back(std::move(r));
  }
  return ConditionalEntropy(projected);
}

double InfoGainBinarySplit(std::span<const LabeledRow> samples, size_t feature,
                           int64_t threshold) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyData, "info gain");
  const Counts all = CountRows(samples);
  Counts left;
  for (const auto& s : samples) {
    if (s.values.at(feature) < threshold) {
      ++left.total;
      left.positives += s.label;
    }
  }
  const Counts right{all.total - left.total, all.positives - left.positives};
  if (left.total == 0 || right.total == 0) {
    throw Error(ErrorCode::kDegenerateSplit,
                "threshold " + std::to_string(threshold) + " leaves a side empty");
  }
  const double n = static_cast<double>(all.total);
  return BinaryEntropy(all.positives, all.total) -
         (static_cast<double>(left.total) / n *
              BinaryEntropy(left.positives, left.total) +
          static_cast<double>(right.total) / n *
              BinaryEntropy(right.positives, right.total));
}

BoundReport VerifyLowerBound(std::span<const LabeledRow> samples,
                             std::span<const size_t> feature_set) {
  if (samples.empty() || feature_set.empty()) {
    throw Error(ErrorCode::kEmptyData, "bound check needs samples and features");
  }
  const Counts all = CountRows(samples);
  const double h_y = BinaryEntropy(all.positives, all.total);
  std::vector<const LabeledRow*> rows;
  rows.reserve(samples.size());
  for (const auto& s : samples) rows.push_back(&s);
  const double greedy =
      GreedyWeightedEntropy(std::move(rows),
                            {feature_set.begin(), feature_set.end()}) /
      static_cast<double>(all.total);
  BoundReport report;
  report.ig_best_path = h_y - greedy;
  report.full_gain = h_y - ConditionalEntropy(samples, feature_set);
  report.holds = report.ig_best_path <= report.full_gain + 1e-9;
  return report;
}

BoundSweepReport RunBoundSweep(const BoundSweepConfig& config) {
  if (config.n_trials < 1 || config.min_cardinality < 2 ||
      config.max_cardinality < config.min_cardinality ||
      config.max_features < 1 || config.min_samples < 1 ||
      config.max_samples < config.min_samples) {
    throw Error(ErrorCode::kInvalidArgument, "bad bound sweep config");
  }
  BoundSweepReport report;
  double gap_sum = 0.0;
  report.max_excess = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < config.n_trials; ++trial) {
    CounterRng rng(HashWords({config.seed, 0x424f554e44ULL,
                              static_cast<uint64_t>(trial)}));
    const int n_features = 1 + static_cast<int>(rng.Below(config.max_features));
    std::vector<int> cardinality(n_features);
    int cells = 1;
    for (auto& c : cardinality) {
      c = config.min_cardinality +
          static_cast<int>(rng.Below(config.max_cardinality -
                                     config.min_cardinality + 1));
      cells *= c;
    }
    // Random cell masses (exponential weights give a flat Dirichlet) and a
    // random click probability per cell.
    std::vector<double> cumulative(cells);
    std::vector<double> click(cells);
    double total = 0.0;
    for (int i = 0; i < cells; ++i) {
      total += -std::log(1.0 - rng.Uniform());
      cumulative[i] = total;
      click[i] = rng.Uniform();
    }
    const int n = config.min_samples +
                  static_cast<int>(rng.Below(config.max_samples -
                                             config.min_samples + 1));
    std::vector<LabeledRow> samples(n);
    for (auto& s : samples) {
      const double u = rng.Uniform() * total;
      int cell = static_cast<int>(
          std::upper_bound(cumulative.begin(), cumulative.end(), u) -
          cumulative.begin());
      cell = std::min(cell, cells - 1);
      s.label = rng.Bernoulli(click[cell]) ? 1 : 0;
      int rest = cell;
      for (const int c : cardinality) {
        s.values.push_back(rest % c);
        rest /= c;
      }
    }
    std::vector<size_t> features(n_features);
    for (int f = 0; f < n_features; ++f) features[f] = static_cast<size_t>(f);
    const BoundReport r = VerifyLowerBound(samples, features);
    ++report.trials;
    if (!r.holds) ++report.violations;
    report.max_excess = std::max(report.max_excess, r.ig_best_path - r.full_gain);
    gap_sum += r.full_gain - r.ig_best_path;
  }
  report.mean_gap = gap_sum / report.trials;
  return report;
}

}  // namespace ctrkeys
