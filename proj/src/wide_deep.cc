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
#include "ctrkeys/wide_deep.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <type_traits>

#include "ctrkeys/errors.h"
#include "ctrkeys/rng.h"
#include "ctrkeys/text_util.h"
#include "ctrkeys/tree.h"

namespace ctrkeys {

namespace {

constexpr uint64_t kInitSalt = 0x77646e6574696e69ULL;
constexpr uint64_t kShuffleSalt = 0x7764736875666c65ULL;
constexpr double kMaxLogit = 30.0;

// log(1 + e^z) - y z without overflow.
double LogLossFromLogit(double z, int y) {
  const double softplus = z > 0 ? z + std::log1p(std::exp(-z))
                                : std::log1p(std::exp(z));
  return softplus - (y == 1 ? z : 0.0);
}

}  // namespace

void ValidateWideDeepConfig(const WideDeepConfig& config) {
  for (const int32_t c : config.cardinalities) {
    if (c < 1) {
      throw Error(ErrorCode::kInvalidConfig, "cardinalities must be >= 1");
    }
  }
  if (config.num_counts % 3 != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "counting features come in triples");
  }
  if (!config.hidden.empty() && config.embed_dim < 1) {
    throw Error(ErrorCode::kInvalidConfig, "embed_dim must be >= 1");
  }
  for (const int w : config.hidden) {
    if (w < 1) throw Error(ErrorCode::kInvalidConfig, "widths must be >= 1");
  }
}

void ValidateWideDeepTrainParams(const WideDeepTrainParams& params) {
  if (params.epochs < 1) {
    throw Error(ErrorCode::kInvalidConfig, "epochs must be >= 1");
  }
  if (params.batch_size < 1) {
    throw Error(ErrorCode::kInvalidConfig, "batch_size must be >= 1");
  }
  if (!(params.step_size > 0.0) || !std::isfinite(params.step_size)) {
    throw Error(ErrorCode::kInvalidConfig, "step_size must be > 0");
  }
}

double TransformCount(size_t index, double value) {
  return index % 3 == 2 ? value : std::log1p(value);
}

WideDeep::WideDeep(WideDeepConfig config, uint64_t seed)
    : config_(std::move(config)) {
  ValidateWideDeepConfig(config_);
  size_t total_card = 0;
  for (const int32_t c : config_.cardinalities) {
    cat_offsets_.push_back(total_card);
    total_card += static_cast<size_t>(c);
  }
  size_t n = 1;
  wide_cat_ = n;
  n += total_card;
  wide_count_ = n;
  n += config_.num_counts;
  if (has_deep()) {
    const size_t d = static_cast<size_t>(config_.embed_dim);
    embeddings_ = n;
    n += total_card * d;
    size_t fan_in = config_.cardinalities.size() * d + config_.num_counts;
    for (const int w : config_.hidden) {
      layer_weights_.push_back(n);
      n += static_cast<size_t>(w) * fan_in;
      layer_biases_.push_back(n);
      n += static_cast<size_t>(w);
      fan_in = static_cast<size_t>(w);
    }
    out_weights_ = n;
    n += fan_in;
    out_bias_ = n;
    n += 1;
  }
  params_.assign(n, 0.0);
  count_mean_.assign(config_.num_counts, 0.0);
  count_scale_.assign(config_.num_counts, 1.0);
  if (!has_deep()) return;

  CounterRng rng(HashWords({seed, kInitSalt}));
  for (size_t i = embeddings_; i < layer_weights_[0]; ++i) {
    params_[i] = 0.1 * rng.Normal();
  }
  size_t fan_in =
      config_.cardinalities.size() * static_cast<size_t>(config_.embed_dim) +
      config_.num_counts;
  for (size_t l = 0; l < config_.hidden.size(); ++l) {
    const double sd = fan_in > 0 ? std::sqrt(2.0 / static_cast<double>(fan_in))
                                 : 0.0;
    for (size_t i = layer_weights_[l]; i < layer_biases_[l]; ++i) {
      params_[i] = sd * rng.Normal();
    }
    fan_in = static_cast<size_t>(config_.hidden[l]);
  }
  const double sd = std::sqrt(1.0 / static_cast<double>(fan_in));
  for (size_t i = out_weights_; i < out_bias_; ++i) {
    params_[i] = 0.1 * sd * rng.Normal();
  }
}

void WideDeep::FitNormalization(std::span<const WideDeepExample> data) {
  const size_t m = config_.num_counts;
  count_mean_.assign(m, 0.0);
  count_scale_.assign(m, 1.0);
  if (data.empty()) return;
  std::vector<double> sum(m, 0.0);
  std::vector<double> sum_sq(m, 0.0);
  for (const auto& x : data) {
    Check(x);
    for (size_t j = 0; j < m; ++j) {
      const double v = TransformCount(j, x.counts[j]);
      sum[j] += v;
      sum_sq[j] += v * v;
    }
  }
  const double n = static_cast<double>(data.size());
  for (size_t j = 0; j < m; ++j) {
    count_mean_[j] = sum[j] / n;
    const double var = std::max(0.0, sum_sq[j] / n - count_mean_[j] * count_mean_[j]);
    count_scale_[j] = var > 1e-12 ? std::sqrt(var) : 1.0;
  }
}

void WideDeep::Check(const WideDeepExample& x) const {
  if (x.categorical.size() != config_.cardinalities.size() ||
      x.counts.size() != config_.num_counts) {
    throw Error(ErrorCode::kDimensionMismatch,
                "example shape does not match the model");
  }
  for (size_t f = 0; f < x.categorical.size(); ++f) {
    if (x.categorical[f] < 0 || x.categorical[f] >= config_.cardinalities[f]) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "categorical code out of range for input " +
                      std::to_string(f));
    }
  }
}

double WideDeep::Forward(const WideDeepExample& x, Cache* cache) const {
  double z = params_[0];
  for (size_t f = 0; f < x.categorical.size(); ++f) {
    z += params_[wide_cat_ + cat_offsets_[f] +
                 static_cast<size_t>(x.categorical[f])];
  }
  for (size_t j = 0; j < x.counts.size(); ++j) {
    z += params_[wide_count_ + j] * TransformCount(j, x.counts[j]);
  }
  if (!has_deep()) return z;

  const size_t d = static_cast<size_t>(config_.embed_dim);
  std::vector<std::vector<double>> local;
  auto& acts = cache != nullptr ? cache->activations : local;
  acts.assign(config_.hidden.size() + 1, {});
  auto& a0 = acts[0];
  a0.reserve(x.categorical.size() * d + x.counts.size());
  for (size_t f = 0; f < x.categorical.size(); ++f) {
    const size_t row =
        embeddings_ +
        (cat_offsets_[f] + static_cast<size_t>(x.categorical[f])) * d;
    for (size_t e = 0; e < d; ++e) a0.push_back(params_[row + e]);
  }
  for (size_t j = 0; j < x.counts.size(); ++j) {
    a0.push_back((TransformCount(j, x.counts[j]) - count_mean_[j]) /
                 count_scale_[j]);
  }
  for (size_t l = 0; l < config_.hidden.size(); ++l) {
    const auto& in = acts[l];
    auto& out = acts[l + 1];
    const size_t width = static_cast<size_t>(config_.hidden[l]);
    out.assign(width, 0.0);
    const double* w = params_.data() + layer_weights_[l];
    const double* b = params_.data() + layer_biases_[l];
    for (size_t i = 0; i < width; ++i) {
      double s = b[i];
      const double* wi = w + i * in.size();
      for (size_t j = 0; j < in.size(); ++j) s += wi[j] * in[j];
      out[i] = s > 0.0 ? s : 0.0;
    }
  }
  const auto& last = acts.back();
  double deep = params_[out_bias_];
  for (size_t i = 0; i < last.size(); ++i) {
    deep += params_[out_weights_ + i] * last[i];
  }
  return z + deep;
}

void WideDeep::Backward(const WideDeepExample& x, const Cache& cache,
                        double dz, std::vector<double>& grad) const {
  grad[0] += dz;
  for (size_t f = 0; f < x.categorical.size(); ++f) {
    grad[wide_cat_ + cat_offsets_[f] + static_cast<size_t>(x.categorical[f])] +=
        dz;
  }
  for (size_t j = 0; j < x.counts.size(); ++j) {
    grad[wide_count_ + j] += dz * TransformCount(j, x.counts[j]);
  }
  if (!has_deep()) return;

  const auto& acts = cache.activations;
  const auto& last = acts.back();
  grad[out_bias_] += dz;
  std::vector<double> delta(last.size());
  for (size_t i = 0; i < last.size(); ++i) {
    grad[out_weights_ + i] += dz * last[i];
    delta[i] = last[i] > 0.0 ? dz * params_[out_weights_ + i] : 0.0;
  }
  for (size_t l = config_.hidden.size(); l-- > 0;) {
    const auto& in = acts[l];
    const double* w = params_.data() + layer_weights_[l];
    double* gw = grad.data() + layer_weights_[l];
    double* gb = grad.data() + layer_biases_[l];
    std::vector<double> prev(in.size(), 0.0);
    for (size_t i = 0; i < delta.size(); ++i) {
      if (delta[i] == 0.0) continue;
      gb[i] += delta[i];
      const double* wi = w + i * in.size();
      double* gwi = gw + i * in.size();
      for (size_t j = 0; j < in.size(); ++j) {
        gwi[j] += delta[i] * in[j];
        prev[j] += wi[j] * delta[i];
      }
    }
    if (l > 0) {
      for (size_t j = 0; j < in.size(); ++j) {
        if (in[j] <= 0.0) prev[j] = 0.0;
      }
    }
    delta = std::move(prev);
  }
  const size_t d = static_cast<size_t>(config_.embed_dim);
  for (size_t f = 0; f < x.categorical.size(); ++f) {
    const size_t row =
        embeddings_ +
        (cat_offsets_[f] + static_cast<size_t>(x.categorical[f])) * d;
    for (size_t e = 0; e < d; ++e) grad[row + e] += delta[f * d + e];
  }
}

double WideDeep::Logit(const WideDeepExample& x) const {
  Check(x);
  return Forward(x, nullptr);
}

double WideDeep::Predict(const WideDeepExample& x) const {
  return Sigmoid(std::clamp(Logit(x), -kMaxLogit, kMaxLogit));
}

std::vector<double> WideDeep::PredictBatch(
    std::span<const WideDeepExample> xs) const {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(Predict(x));
  return out;
}

double WideDeep::LossAndGradient(std::span<const WideDeepExample> batch,
                                 std::vector<double>* grad) const {
  if (batch.empty()) throw Error(ErrorCode::kEmptyData, "empty batch");
  if (grad != nullptr) grad->assign(params_.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  Cache cache;
  for (const auto& x : batch) {
    Check(x);
    const double z = Forward(x, grad != nullptr ? &cache : nullptr);
    loss += LogLossFromLogit(z, x.label);
    if (grad != nullptr) {
      Backward(x, cache, (Sigmoid(z) - static_cast<double>(x.label)) * inv_n,
               *grad);
    }
  }
  return loss * inv_n;
}

WideDeep TrainWideDeep(std::span<const WideDeepExample> train,
                       const WideDeepConfig& config,
                       const WideDeepTrainParams& params,
                       std::vector<double>* epoch_loss) {
  ValidateWideDeepTrainParams(params);
  if (train.empty()) {
    throw Error(ErrorCode::kEmptyData, "no training examples");
  }
  WideDeep model(config, params.seed);
  model.FitNormalization(train);
  double positives = 0.0;
  for (const auto& x : train) positives += x.label;
  const double rate =
      (positives + 0.5) / (static_cast<double>(train.size()) + 1.0);
  model.params()[model.wide_bias_offset()] = std::log(rate / (1.0 - rate));

  if (epoch_loss != nullptr) epoch_loss->clear();
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), size_t{0});
  CounterRng rng(HashWords({params.seed, kShuffleSalt}));
  std::vector<WideDeepExample> batch;
  std::vector<double> grad;
  double step = params.step_size;
  double previous = model.LossAndGradient(train, nullptr);
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const std::vector<double> snapshot = model.params();
    for (size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.Below(i)]);
    }
    for (size_t start = 0; start < order.size();
         start += static_cast<size_t>(params.batch_size)) {
      const size_t end =
          std::min(order.size(), start + static_cast<size_t>(params.batch_size));
      batch.clear();
      for (size_t i = start; i < end; ++i) batch.push_back(train[order[i]]);
      const double loss = model.LossAndGradient(batch, &grad);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kDivergedTraining,
                    "loss became non-finite in epoch " + std::to_string(epoch));
      }
      auto& p = model.params();
      for (size_t k = 0; k < p.size(); ++k) p[k] -= step * grad[k];
    }
    double loss = model.LossAndGradient(train, nullptr);
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kDivergedTraining,
                  "loss became non-finite in epoch " + std::to_string(epoch));
    }
    if (loss > previous) {
      model.params() = snapshot;
      loss = previous;
      step *= 0.5;
    }
    previous = loss;
    if (epoch_loss != nullptr) epoch_loss->push_back(loss);
  }
  return model;
}

namespace {

template <typename T>
void WriteRow(std::ostream& out, const char* name, const std::vector<T>& v) {
  out << name;
  for (const auto& x : v) {
    out << '\t';
    if constexpr (std::is_floating_point_v<T>) {
      out << FormatDouble(x);
    } else {
      out << x;
    }
  }
  out << '\n';
}

}  // namespace

void WriteWideDeep(const WideDeep& model, std::ostream& out) {
  const auto& c = model.config_;
  out << "wide_deep\tv1\n";
  WriteRow(out, "cardinalities", c.cardinalities);
  out << "num_counts\t" << c.num_counts << '\n';
  out << "embed_dim\t" << c.embed_dim << '\n';
  WriteRow(out, "hidden", c.hidden);
  WriteRow(out, "count_mean", model.count_mean_);
  WriteRow(out, "count_scale", model.count_scale_);
  out << "params\t" << model.params_.size() << '\n';
  for (const double p : model.params_) out << FormatDouble(p) << '\n';
}

WideDeep ParseWideDeep(std::istream& in) {
  std::string line;
  int line_no = 0;
  const auto malformed = [&](const std::string& why) {
    return Error(ErrorCode::kMalformedRecord,
                 "wide_deep line " + std::to_string(line_no) + ": " + why);
  };
  const auto next = [&](std::string_view name) {
    if (!std::getline(in, line)) throw malformed("unexpected end of input");
    ++line_no;
    auto fields = Split(line, '\t');
    if (fields.empty() || fields[0] != name) {
      throw malformed("expected '" + std::string(name) + "'");
    }
    fields.erase(fields.begin());
    return fields;
  };
  const auto ints = [&](const auto& fields) {
    std::vector<int64_t> v;
    for (const auto& f : fields) {
      const auto x = ParseInt64(f);
      if (!x) throw malformed("bad integer");
      v.push_back(*x);
    }
    return v;
  };
  const auto doubles = [&](const auto& fields) {
    std::vector<double> v;
    for (const auto& f : fields) {
      const auto x = ParseDouble(f);
      if (!x) throw malformed("bad number");
      v.push_back(*x);
    }
    return v;
  };
  const auto header = next("wide_deep");
  if (header.size() != 1 || header[0] != "v1") throw malformed("bad version");
  WideDeepConfig config;
  for (const auto c : ints(next("cardinalities"))) {
    config.cardinalities.push_back(static_cast<int32_t>(c));
  }
  const auto num_counts = ints(next("num_counts"));
  const auto embed_dim = ints(next("embed_dim"));
  if (num_counts.size() != 1 || embed_dim.size() != 1 || num_counts[0] < 0) {
    throw malformed("bad shape");
  }
  config.num_counts = static_cast<size_t>(num_counts[0]);
  config.embed_dim = static_cast<int>(embed_dim[0]);
  config.hidden.clear();
  for (const auto w : ints(next("hidden"))) {
    config.hidden.push_back(static_cast<int>(w));
  }
  WideDeep model(config, 0);
  model.count_mean_ = doubles(next("count_mean"));
  model.count_scale_ = doubles(next("count_scale"));
  const auto n = ints(next("params"));
  if (model.count_mean_.size() != config.num_counts ||
      model.count_scale_.size() != config.num_counts || n.size() != 1 ||
      n[0] != static_cast<int64_t>(model.params_.size())) {
    throw malformed("parameter count does not match the configuration");
  }
  for (double& p : model.params_) {
    if (!std::getline(in, line)) throw malformed("missing parameters");
    ++line_no;
    const auto v = ParseDouble(line);
    if (!v) throw malformed("bad parameter");
    p = *v;
  }
  return model;
}

}  // namespace ctrkeys
