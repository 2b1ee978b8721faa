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
#ifndef CTRKEYS_TREE_H_
#define CTRKEYS_TREE_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ctrkeys {

// Internal nodes send x[feature] < threshold to `left` and the rest to
// `right`. Leaves have feature == -1.
struct TreeNode {
  int feature = -1;
  int32_t threshold = 0;
  int left = -1;
  int right = -1;
  double score = 0.0;

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

// Root is nodes[0].
struct Tree {
  std::vector<TreeNode> nodes;

  int LeafIndex(std::span<const int32_t> x) const;
  int NumLeaves() const;
  int Depth() const;
  bool operator==(const Tree&) const = default;
};

struct TrainParams {
  int n_trees = 20;
  int max_depth = 3;
  double learning_rate = 0.3;
  int min_samples_leaf = 5;
  // Splits with gain <= min_gain become leaves.
  double min_gain = 0.0;
  // L2 penalty on leaf scores.
  double l2 = 1.0;
};

// Throws Error(kInvalidArgument).
void ValidateTrainParams(const TrainParams& params);

// Gradient-boosted ensemble for binary labels:
//   p(x) = sigmoid(base_score + learning_rate * sum_t leaf_t(x)).
class Forest {
 public:
  std::vector<Tree> trees;
  double learning_rate = 1.0;
  double base_score = 0.0;
  std::vector<std::string> feature_names;

  size_t num_features() const { return feature_names.size(); }
  // Throws Error(kDimensionMismatch).
  double Margin(std::span<const int32_t> x) const;
  double Predict(std::span<const int32_t> x) const;
  int NumLeaves() const;
  int NumSplits() const;

  bool operator==(const Forest&) const = default;
};

// Row-major integer feature matrix with binary labels.
class TrainingSet {
 public:
  explicit TrainingSet(std::vector<std::string> feature_names);

  void Add(std::span<const int32_t> row, int label);
  size_t size() const { return labels_.size(); }
  size_t num_features() const { return feature_names_.size(); }
  std::span<const int32_t> row(size_t i) const {
    return {values_.data() + i * num_features(), num_features()};
  }
  int32_t value(size_t i, size_t feature) const {
    return values_[i * num_features() + feature];
  }
  int label(size_t i) const { return labels_[i]; }
  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }

 private:
  std::vector<std::string> feature_names_;
  std::vector<int32_t> values_;
  std::vector<int> labels_;
};

double Sigmoid(double z);
// Mean logistic loss of the forest on the set, in nats.
double LogLoss(const Forest& forest, const TrainingSet& data);

// Throws Error(kEmptyData) on an empty set. When the labels are all equal the
// result has n_trees single-leaf trees with zero score, and base_score is the
// rate (positives + 0.5) / (n + 1).
//
// If loss_history is given it receives the mean training log-loss before the
// first tree and after each tree; the sequence is nonincreasing.
Forest TrainForest(const TrainingSet& data, const TrainParams& params,
                   std::vector<double>* loss_history = nullptr);

// One entry per root-to-leaf path: the sorted, deduplicated names of the
// features split on along the path. Paths with no split are dropped.
std::vector<std::vector<std::string>> EnumeratePaths(const Forest& forest);

// Line-oriented text format, see forest_io.cc.
void WriteForest(const Forest& forest, std::ostream& out);
Forest ParseForest(std::istream& in);

}  // namespace ctrkeys

#endif  // CTRKEYS_TREE_H_
