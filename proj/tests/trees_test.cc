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
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "ctrkeys/entropy.h"
#include "ctrkeys/errors.h"
#include "ctrkeys/rng.h"
#include "ctrkeys/tree.h"
#include "gtest/gtest.h"

namespace ctrkeys {
namespace {

TrainingSet RandomSet(uint64_t seed, int n, int n_features, int card) {
  std::vector<std::string> names;
  for (int f = 0; f < n_features; ++f) names.push_back("f" + std::to_string(f));
  TrainingSet data(names);
  CounterRng rng(seed);
  std::vector<int32_t> row(n_features);
  for (int i = 0; i < n; ++i) {
    for (auto& v : row) v = static_cast<int32_t>(rng.Below(card));
    const double p = row[0] > card / 2 ? 0.7 : 0.2;
    data.Add(row, rng.Bernoulli(p));
  }
  return data;
}

// Exhaustive scan of the second-order gain over every (feature, threshold),
// evaluated at the base score.
std::pair<int, int32_t> BestRootSplit(const TrainingSet& data, double base,
                                      double l2, int min_leaf) {
  const double p = Sigmoid(base);
  double best = 0.0;
  std::pair<int, int32_t> arg{-1, 0};
  double G = 0.0;
  double Hs = 0.0;
  for (size_t i = 0; i < data.size(); ++i) {
    G += p - data.label(i);
    Hs += p * (1 - p);
  }
  for (size_t f = 0; f < data.num_features(); ++f) {
    std::set<int32_t> values;
    for (size_t i = 0; i < data.size(); ++i) values.insert(data.value(i, f));
    for (const int32_t t : values) {
      double gl = 0.0, hl = 0.0;
      int nl = 0;
      for (size_t i = 0; i < data.size(); ++i) {
        if (data.value(i, f) < t) {
          gl += p - data.label(i);
          hl += p * (1 - p);
          ++nl;
        }
      }
      const int nr = static_cast<int>(data.size()) - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      const double gr = G - gl;
      const double hr = Hs - hl;
      const double gain = gl * gl / (hl + l2) + gr * gr / (hr + l2) -
                          G * G / (Hs + l2);
      if (gain > best) {
        best = gain;
        arg = {static_cast<int>(f), t};
      }
    }
  }
  return arg;
}

TEST(TreeTest, SingleLabelGivesSplitFreeForest) {
  TrainingSet data({"f"});
  for (int i = 0; i < 10; ++i) data.Add(std::vector<int32_t>{i}, 0);
  const Forest forest = TrainForest(data, TrainParams{});
  EXPECT_EQ(forest.NumSplits(), 0);
  const double p = forest.Predict(std::vector<int32_t>{3});
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 0.1);
}

TEST(TreeTest, EmptyDataThrows) {
  TrainingSet data({"f"});
  EXPECT_THROW(TrainForest(data, TrainParams{}), Error);
}

TEST(TreeTest, SeparableDataGivesStump) {
  TrainingSet data({"f"});
  for (int i = 0; i < 40; ++i) {
    const int32_t v = i % 4;
    data.Add(std::vector<int32_t>{v}, v < 1 ? 1 : 0);
  }
  const Forest forest = TrainForest(data, TrainParams{});
  const Tree& first = forest.trees.front();
  ASSERT_EQ(first.nodes.size(), 3u);
  EXPECT_EQ(first.nodes[0].feature, 0);
  EXPECT_EQ(first.nodes[0].threshold, 1);
  for (size_t i = 0; i < data.size(); ++i) {
    const double p = forest.Predict(data.row(i));
    EXPECT_EQ(p > 0.5, data.label(i) == 1);
  }
}

TEST(TreeTest, RootSplitMatchesExhaustiveScan) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const TrainingSet data = RandomSet(seed, 300, 3, 6);
    TrainParams params;
    params.n_trees = 1;
    const Forest forest = TrainForest(data, params);
    const auto [f, t] = BestRootSplit(data, forest.base_score, params.l2,
                                      params.min_samples_leaf);
    ASSERT_FALSE(forest.trees[0].nodes[0].is_leaf());
    EXPECT_EQ(forest.trees[0].nodes[0].feature, f) << "seed " << seed;
    EXPECT_EQ(forest.trees[0].nodes[0].threshold, t) << "seed " << seed;
  }
}

// Balanced XOR has zero root gain for a greedy learner, so one cell is
// overweighted to break the tie.
TEST(TreeTest, XorLearnedAtDepthTwo) {
  TrainingSet data({"f1", "f2"});
  for (int32_t a = 0; a < 2; ++a) {
    for (int32_t b = 0; b < 2; ++b) {
      const int reps = (a == 0 && b == 0) ? 40 : 20;
      for (int rep = 0; rep < reps; ++rep) {
        data.Add(std::vector<int32_t>{a, b}, (a < 1) != (b < 1));
      }
    }
  }
  TrainParams params;
  params.max_depth = 2;
  params.n_trees = 20;
  EXPECT_LT(LogLoss(TrainForest(data, params), data), 0.2);
}

TEST(TreeTest, BoostingLossNeverIncreases) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const TrainingSet data = RandomSet(seed, 200 + 37 * seed, 4, 5);
    TrainParams params;
    params.learning_rate = 1.0;
    params.min_samples_leaf = 1;
    params.l2 = 0.0;
    std::vector<double> history;
    TrainForest(data, params, &history);
    ASSERT_EQ(history.size(), static_cast<size_t>(params.n_trees + 1));
    for (size_t t = 1; t < history.size(); ++t) {
      EXPECT_LE(history[t], history[t - 1] + 1e-12) << "seed " << seed;
    }
  }
}

TEST(TreeTest, DepthAndRangeBounds) {
  const TrainingSet data = RandomSet(4, 500, 5, 8);
  TrainParams params;
  const Forest forest = TrainForest(data, params);
  for (const Tree& tree : forest.trees) EXPECT_LE(tree.Depth(), params.max_depth);
  for (const auto& path : EnumeratePaths(forest)) {
    EXPECT_FALSE(path.empty());
    EXPECT_LE(path.size(), 3u);
    EXPECT_TRUE(std::is_sorted(path.begin(), path.end()));
  }
  EXPECT_LE(EnumeratePaths(forest).size(), 20u * 8u);
  for (size_t i = 0; i < data.size(); ++i) {
    const double p = forest.Predict(data.row(i));
    EXPECT_GT(p, 0.0);
    EXPECT_LT(p, 1.0);
  }
}

TEST(TreeTest, PredictDefinition) {
  Forest forest;
  forest.feature_names = {"f"};
  forest.learning_rate = 1.0;
  EXPECT_DOUBLE_EQ(forest.Predict(std::vector<int32_t>{0}), 0.5);
  Tree leaf;
  leaf.nodes.push_back(TreeNode{.score = 0.8});
  forest.trees.push_back(leaf);
  EXPECT_DOUBLE_EQ(forest.Predict(std::vector<int32_t>{0}), Sigmoid(0.8));
  EXPECT_THROW(forest.Predict(std::vector<int32_t>{0, 1}), Error);
}

TEST(TreeTest, EnumeratePathsStructure) {
  Forest forest;
  forest.feature_names = {"f", "g"};
  Tree stump;
  stump.nodes = {TreeNode{0, 2, 1, 2, 0}, TreeNode{}, TreeNode{}};
  forest.trees.push_back(stump);
  auto paths = EnumeratePaths(forest);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0], std::vector<std::string>{"f"});
  EXPECT_EQ(paths[1], std::vector<std::string>{"f"});

  // f at the root, g under the left child only.
  Tree deeper;
  deeper.nodes = {TreeNode{0, 2, 1, 2, 0}, TreeNode{1, 1, 3, 4, 0},
                  TreeNode{}, TreeNode{}, TreeNode{}};
  forest.trees = {deeper};
  paths = EnumeratePaths(forest);
  std::multiset<std::vector<std::string>> got(paths.begin(), paths.end());
  std::multiset<std::vector<std::string>> want{
      {"f", "g"}, {"f", "g"}, {"f"}};
  EXPECT_EQ(got, want);

  // Repeated features collapse; a pure leaf contributes nothing.
  Tree repeated;
  repeated.nodes = {TreeNode{0, 2, 1, 2, 0}, TreeNode{0, 1, 3, 4, 0},
                    TreeNode{}, TreeNode{}, TreeNode{}};
  forest.trees = {repeated, Tree{{TreeNode{}}}};
  for (const auto& p : EnumeratePaths(forest)) {
    EXPECT_EQ(p, std::vector<std::string>{"f"});
  }
  EXPECT_EQ(EnumeratePaths(forest).size(), 3u);
}

TEST(ForestIoTest, RoundTripIsExact) {
  const Forest forest = TrainForest(RandomSet(9, 400, 3, 6), TrainParams{});
  std::stringstream io;
  WriteForest(forest, io);
  const std::string text = io.str();
  EXPECT_EQ(text.rfind("forest\tv1\n", 0), 0u);
  EXPECT_EQ(ParseForest(io), forest);
}

TEST(ForestIoTest, RejectsBadChildIds) {
  std::istringstream in(
      "forest\tv1\nbase_score\t0\nlearning_rate\t1\nfeatures\t1\tf\n"
      "trees\t1\ntree\t0\t1\n0\tsplit\t0\t1\t5\t6\n");
  EXPECT_THROW(ParseForest(in), Error);
}

// Labels y = 1 iff value == 1 over three equally likely values.
std::vector<LabeledRow> ThreeValueExample() {
  std::vector<LabeledRow> rows;
  for (int rep = 0; rep < 10; ++rep) {
    for (int64_t v = 0; v < 3; ++v) rows.push_back({{v}, v == 1 ? 1 : 0});
  }
  return rows;
}

TEST(EntropyTest, HandValues) {
  EXPECT_DOUBLE_EQ(Entropy(std::vector<int>{0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(Entropy(std::vector<int>{1, 1, 1}), 0.0);
  const double h = -(1.0 / 3) * std::log2(1.0 / 3) - (2.0 / 3) * std::log2(2.0 / 3);
  EXPECT_NEAR(Entropy(std::vector<int>{1, 0, 0}), h, 1e-12);
  EXPECT_NEAR(h, 0.9183, 1e-4);
  EXPECT_THROW(Entropy(std::vector<int>{}), Error);
}

TEST(EntropyTest, ThreeValueExample) {
  const auto rows = ThreeValueExample();
  std::vector<int> labels;
  for (const auto& r : rows) labels.push_back(r.label);
  EXPECT_NEAR(Entropy(labels), 0.9183, 1e-4);
  EXPECT_NEAR(ConditionalEntropy(rows), 0.0, 1e-12);
  EXPECT_NEAR(InfoGainBinarySplit(rows, 0, 1), 0.2516, 1e-4);
  const size_t f[] = {0};
  const BoundReport r = VerifyLowerBound(rows, f);
  EXPECT_NEAR(r.ig_best_path, 0.2516, 1e-4);
  EXPECT_NEAR(r.full_gain, 0.9183, 1e-4);
  EXPECT_TRUE(r.holds);
}

TEST(EntropyTest, IndependenceAndDegenerateSplits) {
  std::vector<LabeledRow> rows;
  for (int64_t v = 0; v < 4; ++v) {
    rows.push_back({{v}, 0});
    rows.push_back({{v}, 1});
    rows.push_back({{v}, 1});
  }
  std::vector<int> labels;
  for (const auto& r : rows) labels.push_back(r.label);
  EXPECT_NEAR(ConditionalEntropy(rows), Entropy(labels), 1e-9);
  EXPECT_NEAR(InfoGainBinarySplit(rows, 0, 2), 0.0, 1e-9);
  EXPECT_THROW(InfoGainBinarySplit(rows, 0, 0), Error);
  EXPECT_THROW(InfoGainBinarySplit(rows, 0, 9), Error);
}

TEST(EntropyTest, PerfectSplitGainsAll) {
  std::vector<LabeledRow> rows = {{{0}, 0}, {{0}, 0}, {{1}, 1}, {{2}, 1}};
  EXPECT_NEAR(InfoGainBinarySplit(rows, 0, 1), 1.0, 1e-12);
}

TEST(EntropyTest, BinaryFeatureBoundIsTight) {
  CounterRng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<LabeledRow> rows;
    const double p0 = rng.Uniform();
    const double p1 = rng.Uniform();
    for (int i = 0; i < 200; ++i) {
      const int64_t v = static_cast<int64_t>(rng.Below(2));
      rows.push_back({{v}, rng.Bernoulli(v == 0 ? p0 : p1)});
    }
    const size_t f[] = {0};
    const BoundReport r = VerifyLowerBound(rows, f);
    EXPECT_NEAR(r.ig_best_path, r.full_gain, 1e-9);
    EXPECT_TRUE(r.holds);
  }
}

TEST(EntropyTest, ConditionalEntropyBounds) {
  CounterRng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LabeledRow> rows;
    std::vector<int> labels;
    for (int i = 0; i < 100; ++i) {
      LabeledRow r{{static_cast<int64_t>(rng.Below(4)),
                    static_cast<int64_t>(rng.Below(3))},
                   rng.Bernoulli(0.3)};
      labels.push_back(r.label);
      rows.push_back(std::move(r));
    }
    const double h = ConditionalEntropy(rows);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, Entropy(labels) + 1e-9);
    const size_t one[] = {0};
    EXPECT_LE(h, ConditionalEntropy(rows, one) + 1e-9);
  }
}

TEST(EntropyTest, SweepHasNoViolations) {
  BoundSweepConfig config;
  config.n_trials = 200;
  const BoundSweepReport r = RunBoundSweep(config);
  EXPECT_EQ(r.trials, 200);
  EXPECT_EQ(r.violations, 0);
  EXPECT_LE(r.max_excess, 1e-9);
  const BoundSweepReport again = RunBoundSweep(config);
  EXPECT_EQ(again.mean_gap, r.mean_gap);
}

}  // namespace
}  // namespace ctrkeys
