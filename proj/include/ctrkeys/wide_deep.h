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
#ifndef CTRKEYS_WIDE_DEEP_H_
#define CTRKEYS_WIDE_DEEP_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ctrkeys {

struct WideDeepConfig {
  // One entry per categorical input.
  std::vector<int32_t> cardinalities;
  // Raw counting features as (impressions, engagements, ctr) triples.
  size_t num_counts = 0;
  int embed_dim = 8;
  // Widths of the rectified-linear layers. Empty disables the deep part.
  std::vector<int> hidden = {64, 32};
};

void ValidateWideDeepConfig(const WideDeepConfig& config);

struct WideDeepExample {
  std::vector<int32_t> categorical;
  std::vector<double> counts;
  int label = 0;
};

// log1p for impressions and engagements, identity for the ctr.
double TransformCount(size_t index, double value);

// sigmoid(wide(x) + deep(x)).
//
// wide(x) = b + sum_f w_cat[f][x_f] + sum_j w_count[j] * TransformCount(x_j)
// deep(x) = v . relu(W_L ... relu(W_1 [emb(x); norm(x)] + b_1) ... + b_L) + c
//
// All weights live in one flat parameter vector:
//   wide bias, wide categorical weights, wide count weights, embeddings,
//   (W_l row-major, b_l) per layer, output weights, output bias.
class WideDeep {
 public:
  // Random init from the seed. Wide weights start at zero.
  WideDeep(WideDeepConfig config, uint64_t seed);

  const WideDeepConfig& config() const { return config_; }
  bool has_deep() const { return !config_.hidden.empty(); }
  size_t num_params() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Standardizes transformed counts for the deep input. Unit scale and zero
  // mean until fitted.
  void FitNormalization(std::span<const WideDeepExample> data);
  const std::vector<double>& count_mean() const { return count_mean_; }
  const std::vector<double>& count_scale() const { return count_scale_; }

  // All throw Error(kDimensionMismatch) on misaligned inputs.
  double Logit(const WideDeepExample& x) const;
  double Predict(const WideDeepExample& x) const;
  std::vector<double> PredictBatch(std::span<const WideDeepExample> xs) const;

  // Mean log-loss over the batch. Fills grad with d(loss)/d(params) when it
  // is not null.
  double LossAndGradient(std::span<const WideDeepExample> batch,
                         std::vector<double>* grad) const;

  size_t wide_bias_offset() const { return 0; }

 private:
  struct Cache {
    std::vector<std::vector<double>> activations;
  };

  void Check(const WideDeepExample& x) const;
  double Forward(const WideDeepExample& x, Cache* cache) const;
  void Backward(const WideDeepExample& x, const Cache& cache, double dz,
                std::vector<double>& grad) const;

  WideDeepConfig config_;
  std::vector<double> params_;
  std::vector<size_t> cat_offsets_;
  size_t wide_cat_ = 0;
  size_t wide_count_ = 0;
  size_t embeddings_ = 0;
  std::vector<size_t> layer_weights_;
  std::vector<size_t> layer_biases_;
  size_t out_weights_ = 0;
  size_t out_bias_ = 0;
  std::vector<double> count_mean_;
  std::vector<double> count_scale_;

  friend void WriteWideDeep(const WideDeep& model, std::ostream& out);
  friend WideDeep ParseWideDeep(std::istream& in);
};

struct WideDeepTrainParams {
  int epochs = 5;
  int batch_size = 64;
  double step_size = 0.05;
  uint64_t seed = 1;
};

void ValidateWideDeepTrainParams(const WideDeepTrainParams& params);

// Mini-batch SGD on mean log-loss, shuffled per epoch. An epoch that raises
// the full training loss is undone and the step size halved, so epoch_loss
// never increases. Throws Error(kEmptyData) and Error(kDivergedTraining).
WideDeep TrainWideDeep(std::span<const WideDeepExample> train,
                       const WideDeepConfig& config,
                       const WideDeepTrainParams& params,
                       std::vector<double>* epoch_loss = nullptr);

// Checkpoint format, one item per line:
//   wide_deep<TAB>v1
//   cardinalities<TAB><c1><TAB>...
//   num_counts<TAB><n>
//   embed_dim<TAB><d>
//   hidden<TAB><w1><TAB>...
//   count_mean<TAB><m1><TAB>...
//   count_scale<TAB><s1><TAB>...
//   params<TAB><n>
// followed by n parameter lines.
void WriteWideDeep(const WideDeep& model, std::ostream& out);
WideDeep ParseWideDeep(std::istream& in);

}  // namespace ctrkeys

#endif  // CTRKEYS_WIDE_DEEP_H_
