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
#include "ctrkeys/tree.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ctrkeys/errors.h"

namespace ctrkeys {
namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double PointLoss(double margin, int label) {
  return label ? Softplus(-margin) : Softplus(margin);
}

struct SplitCandidate {
  int feature = -1;
  int32_t threshold = 0;
  double gain = 0.0;
};

// Grows one tree on first/second order gradients with exact greedy split
// search. Rows of each feature are presorted once per forest.
class TreeBuilder {
 public:
  TreeBuilder(const TrainingSet& data, const TrainParams& params,
              const std::vector<std::vector<uint32_t>>& presorted,
              const std::vector<double>& grad, const std::vector<double>& hess)
      : data_(data),
        params_(params),
        presorted_(presorted),
        grad_(grad),
        hess_(hess),
        node_of_row_(data.size(), 0) {}

  // Returns the tree and, for each row, the index of the leaf it lands in.
  Tree Build(std::vector<int>* leaf_of_row) {
    tree_ = Tree{};
    tree_.nodes.push_back(TreeNode{});
    std::fill(node_of_row_.begin(), node_of_row_.end(), 0);
    std::vector<uint32_t> all(data_.size());
    std::iota(all.begin(), all.end(), 0u);
    Grow(0, 0, all);
    *leaf_of_row = node_of_row_;
    return std::move(tree_);
  }

 private:
  double Score(double g, double h) const { return g * g / (h + params_.l2); }

  void Grow(int node, int depth, const std::vector<uint32_t>& rows) {
    double g_sum = 0.0;
    double h_sum = 0.0;
    for (const uint32_t r : rows) {
      g_sum += grad_[r];
      h_sum += hess_[r];
    }
    tree_.nodes[node].score = -g_sum / (h_sum + params_.l2);
    const auto n = static_cast<int64_t>(rows.size());
    if (depth >= params_.max_depth || n < 2 * params_.min_samples_leaf) return;

    const SplitCandidate best = FindSplit(node, n, g_sum, h_sum);
    if (best.feature < 0 || !(best.gain > params_.min_gain)) return;

    std::vector<uint32_t> left_rows;
    std::vector<uint32_t> right_rows;
    for (const uint32_t r : rows) {
      (data_.value(r, best.feature) < best.threshold ? left_rows : right_rows)
          .push_back(r);
    }
    const int left = static_cast<int>(tree_.nodes.size());
    const int right = left + 1;
    tree_.nodes.push_back(TreeNode{});
    tree_.nodes.push_back(TreeNode{});
    TreeNode& parent = tree_.nodes[node];
    parent.feature = best.feature;
    parent.threshold = best.threshold;
    parent.left = left;
    parent.right = right;
    parent.score = 0.0;
    for (const uint32_t r : left_rows) node_of_row_[r] = left;
    for (const uint32_t r : right_rows) node_of_row_[r] = right;
    Grow(left, depth + 1, left_rows);
    Grow(right, depth + 1, right_rows);
  }

  SplitCandidate FindSplit(int node, int64_t n, double g_sum,
                           double h_sum) const {
    SplitCandidate best;
    const double parent_score = Score(g_sum, h_sum);
    const int64_t min_leaf = std::max(1, params_.min_samples_leaf);
    for (size_t f = 0; f < data_.num_features(); ++f) {
      double g_left = 0.0;
      double h_left = 0.0;
      int64_t n_left = 0;
      bool have_prev = false;
      int32_t prev_value = 0;
      for (const uint32_t r : presorted_[f]) {
        if (node_of_row_[r] != node) continue;
        const int32_t v = data_.value(r, f);
        if (have_prev && v != prev_value && n_left >= min_leaf &&
            n - n_left >= min_leaf) {
          const double gain =
              0.5 * (Score(g_left, h_left) +
                     Score(g_sum - g_left, h_sum - h_left) - parent_score);
          if (gain > best.gain || best.feature < 0) {
            best = {static_cast<int>(f), v, gain};
          }
        }
        g_left += grad_[r];
        h_left += hess_[r];
        ++n_left;
        prev_value = v;
        have_prev = true;
      }
    }
    return best;
  }

  const TrainingSet& data_;
  const TrainParams& params_;
  const std::vector<std::vector<uint32_t>>& presorted_;
  const std::vector<double>& grad_;
  const std::vector<double>& hess_;
  std::vector<int> node_of_row_;
  Tree tree_;
};

}  // namespace

int Tree::LeafIndex(std::span<const int32_t> x) const {
  int node = 0;
  while (!nodes[node].is_leaf()) {
    const TreeNode& n = nodes[node];
    node = x[n.feature] < n.threshold ? n.left : n.right;
  }
  return node;
}

int Tree::NumLeaves() const {
  return static_cast<int>(std::count_if(
      nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int Tree::Depth() const {
  // Children always have larger indices than their parent.
  std::vector<int> depth(nodes.size(), 0);
  int max_depth = 0;
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) continue;
    depth[nodes[i].left] = depth[nodes[i].right] = depth[i] + 1;
    max_depth = std::max(max_depth, depth[i] + 1);
  }
  return max_depth;
}

void ValidateTrainParams(const TrainParams& p) {
  if (p.n_trees < 1 || p.max_depth < 1 || !(p.learning_rate > 0.0) ||
      p.learning_rate > 1.0 || p.min_samples_leaf < 1 || !(p.l2 >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "train params need n_trees >= 1, max_depth >= 1, "
                "learning_rate in (0, 1], min_samples_leaf >= 1, l2 >= 0");
  }
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Forest::Margin(std::span<const int32_t> x) const {
  if (x.size() != num_features()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "forest expects " + std::to_string(num_features()) +
                    " features, got " + std::to_string(x.size()));
  }
  double sum = 0.0;
  for (const Tree& t : trees) sum += t.nodes[t.LeafIndex(x)].score;
  return base_score + learning_rate * sum;
}

double Forest::Predict(std::span<const int32_t> x) const {
  // Clamp the margin so the result stays strictly inside (0, 1).
  return Sigmoid(std::clamp(Margin(x), -30.0, 30.0));
}

int Forest::NumLeaves() const {
  int n = 0;
  for (const Tree& t : trees) n += t.NumLeaves();
  return n;
}

int Forest::NumSplits() const {
  int n = 0;
  for (const Tree& t : trees) n += static_cast<int>(t.nodes.size()) - t.NumLeaves();
  return n;
}

TrainingSet::TrainingSet(std::vector<std::string> feature_names)
    : feature_names_(std::move(feature_names)) {}

void TrainingSet::Add(std::span<const int32_t> row, int label) {
  if (row.size() != num_features()) {
    throw Error(ErrorCode::kDimensionMismatch, "training row width");
  }
  values_.insert(values_.end(), row.begin(), row.end());
  labels_.push_back(label ? 1 : 0);
}

double LogLoss(const Forest& forest, const TrainingSet& data) {
  if (data.size() == 0) throw Error(ErrorCode::kEmptyData, "log loss");
  double sum = 0.0;
  for (size_t i = 0; i < data.size(); ++i) {
    sum += PointLoss(forest.Margin(data.row(i)), data.label(i));
  }
  return sum / static_cast<double>(data.size());
}

Forest TrainForest(const TrainingSet& data, const TrainParams& params,
                   std::vector<double>* loss_history) {
  ValidateTrainParams(params);
  if (data.size() == 0) {
    throw Error(ErrorCode::kEmptyData, "cannot train a forest on no rows");
  }
  const size_t n = data.size();
  int64_t positives = 0;
  for (size_t i = 0; i < n; ++i) positives += data.label(i);

  Forest forest;
  forest.learning_rate = params.learning_rate;
  forest.feature_names = data.feature_names();
  const double rate = (static_cast<double>(positives) + 0.5) /
                      (static_cast<double>(n) + 1.0);
  forest.base_score = std::log(rate / (1.0 - rate));

  std::vector<double> margin(n, forest.base_score);
  const auto mean_loss = [&] {
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) sum += PointLoss(margin[i], data.label(i));
    return sum / static_cast<double>(n);
  };
  if (loss_history) {
    loss_history->clear();
    loss_history->push_back(mean_loss());
  }

  if (positives == 0 || positives == static_cast<int64_t>(n)) {
    Tree stump_free;
    stump_free.nodes.push_back(TreeNode{});
    forest.trees.assign(params.n_trees, stump_free);
    if (loss_history) {
      loss_history->resize(params.n_trees + 1, loss_history->front());
    }
    return forest;
  }

  std::vector<std::vector<uint32_t>> presorted(data.num_features());
  for (size_t f = 0; f < data.num_features(); ++f) {
    auto& order = presorted[f];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
      return data.value(a, f) < data.value(b, f);
    });
  }

  std::vector<double> grad(n);
  std::vector<double> hess(n);
  std::vector<int> leaf_of_row;
  TreeBuilder builder(data, params, presorted, grad, hess);
  for (int t = 0; t < params.n_trees; ++t) {
    for (size_t i = 0; i < n; ++i) {
      const double p = Sigmoid(margin[i]);
      grad[i] = p - data.label(i);
      hess[i] = std::max(p * (1.0 - p), 1e-16);
    }
    Tree tree = builder.Build(&leaf_of_row);

    // A Newton step can overshoot where the loss is far from quadratic.
    // Halve any leaf whose step does not lower the loss of its own rows;
    // leaves are disjoint, so the total loss never increases.
    std::vector<std::vector<uint32_t>> rows_of_leaf(tree.nodes.size());
    for (size_t i = 0; i < n; ++i) {
      rows_of_leaf[leaf_of_row[i]].push_back(static_cast<uint32_t>(i));
    }
    for (size_t leaf = 0; leaf < tree.nodes.size(); ++leaf) {
      TreeNode& node = tree.nodes[leaf];
      if (!node.is_leaf()) continue;
      const auto& rows = rows_of_leaf[leaf];
      double before = 0.0;
      for (const uint32_t r : rows) before += PointLoss(margin[r], data.label(r));
      for (int halvings = 0;; ++halvings) {
        if (halvings == 40) {
          node.score = 0.0;
          break;
        }
        double after = 0.0;
        const double step = params.learning_rate * node.score;
        for (const uint32_t r : rows) {
          after += PointLoss(margin[r] + step, data.label(r));
        }
        if (after <= before) break;
        node.score *= 0.5;
      }
      const double step = params.learning_rate * node.score;
      for (const uint32_t r : rows) margin[r] += step;
    }
    forest.trees.push_back(std::move(tree));
    if (loss_history) loss_history->push_back(mean_loss());
  }
  return forest;
}

std::vector<std::vector<std::string>> EnumeratePaths(const Forest& forest) {
  std::vector<std::vector<std::string>> paths;
  for (const Tree& tree : forest.trees) {
    // Depth-first walk carrying the features seen so far.
    std::vector<std::pair<int, std::vector<int>>> stack = {{0, {}}};
    while (!stack.empty()) {
      auto [node, features] = std::move(stack.back());
      stack.pop_back();
      const TreeNode& n = tree.nodes[node];
      if (n.is_leaf()) {
        if (features.empty()) continue;
        std::vector<std::string> names;
        for (const int f : features) names.push_back(forest.feature_names[f]);
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
        paths.push_back(std::move(names));
        continue;
      }
      features.push_back(n.feature);
      stack.push_back({n.right, features});
      stack.push_back({n.left, std::move(features)});
    }
  }
  return paths;
}

}  // namespace ctrkeys
