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
#include "ctrkeys/experiment.h"

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "ctrkeys/errors.h"
#include "ctrkeys/leaf_encoder.h"
#include "ctrkeys/rng.h"
#include "ctrkeys/text_util.h"

namespace ctrkeys {

namespace {

constexpr uint64_t kHoldoutSalt = 0x686f6c646f7574ULL;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Empirical CTR, pulled off the boundary when it is 0 or 1.
double BackgroundCtr(int64_t clicks, int64_t n) {
  if (n > 0 && clicks > 0 && clicks < n) {
    return static_cast<double>(clicks) / static_cast<double>(n);
  }
  return (static_cast<double>(clicks) + 0.5) / (static_cast<double>(n) + 1.0);
}

int64_t DayStart(int64_t ts) { return BucketStart(ts, kSecondsPerDay); }

// Fills buckets and the last-day summary from timestamped predictions.
void Summarize(const std::vector<int64_t>& timestamps,
               const std::vector<double>& preds, const std::vector<int>& labels,
               int64_t last_day_start, int64_t bucket_seconds,
               ExperimentReport& report) {
  std::map<int64_t, std::pair<std::vector<double>, std::vector<int>>> buckets;
  std::vector<double> final_preds;
  std::vector<int> final_labels;
  for (size_t i = 0; i < preds.size(); ++i) {
    auto& b = buckets[BucketStart(timestamps[i], bucket_seconds)];
    b.first.push_back(preds[i]);
    b.second.push_back(labels[i]);
    if (timestamps[i] >= last_day_start) {
      final_preds.push_back(preds[i]);
      final_labels.push_back(labels[i]);
    }
  }
  for (const auto& [start, b] : buckets) {
    BucketRow row;
    row.start = start;
    row.n = static_cast<int64_t>(b.first.size());
    row.ce = CrossEntropy(b.first, b.second);
    row.rce = Rce(b.first, b.second, report.baseline_ctr);
    report.buckets.push_back(row);
  }
  if (final_preds.empty()) {
    report.final_ce = kNaN;
    report.final_rce = kNaN;
  } else {
    report.final_ce = CrossEntropy(final_preds, final_labels);
    report.final_rce = Rce(final_preds, final_labels, report.baseline_ctr);
  }
}

}  // namespace

bool IsHoldout(int64_t impression_id, uint64_t seed, double rate) {
  if (rate <= 0.0) return false;
  if (rate >= 1.0) return true;
  return ToUnitInterval(HashWords(
             {seed, kHoldoutSalt, static_cast<uint64_t>(impression_id)})) <
         rate;
}

int64_t BucketStart(int64_t ts, int64_t bucket_seconds) {
  int64_t q = ts / bucket_seconds;
  if (ts % bucket_seconds != 0 && ts < 0) --q;
  return q * bucket_seconds;
}

void ValidateOnlineExperimentConfig(const OnlineExperimentConfig& config) {
  if (!(config.holdout_rate >= 0.0 && config.holdout_rate <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "holdout_rate must be in [0, 1]");
  }
  if (config.bucket_seconds < 1) {
    throw Error(ErrorCode::kInvalidConfig, "bucket_seconds must be >= 1");
  }
  if (config.encoder_warmup_seconds < 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "encoder_warmup_seconds must be >= 0");
  }
  ValidateTrainParams(config.encoder_params);
  ValidateOnlineLRParams(config.lr);
}

ExperimentReport RunOnlineExperiment(const Dataset& stream,
                                     const FeatureBuilder& features,
                                     const OnlineExperimentConfig& config) {
  return RunOnlineExperiment(stream, features, config, nullptr);
}

ExperimentReport RunOnlineExperiment(const Dataset& stream,
                                     const FeatureBuilder& features,
                                     const OnlineExperimentConfig& config,
                                     HoldoutLog* log) {
  ValidateOnlineExperimentConfig(config);
  const auto& imps = stream.impressions();
  if (imps.empty()) throw Error(ErrorCode::kEmptyStream, "empty stream");

  std::vector<std::vector<int32_t>> rows;
  std::vector<uint8_t> holdout;
  rows.reserve(imps.size());
  holdout.reserve(imps.size());
  for (const auto& imp : imps) {
    rows.push_back(features.TreeRow(features.Build(imp)));
    holdout.push_back(IsHoldout(imp.id, config.seed, config.holdout_rate));
  }

  const int64_t warmup_end = imps.front().timestamp + config.encoder_warmup_seconds;
  TrainingSet warmup(features.TreeFeatureNames());
  int64_t train_n = 0;
  int64_t train_clicks = 0;
  for (size_t i = 0; i < imps.size(); ++i) {
    if (holdout[i]) continue;
    ++train_n;
    train_clicks += imps[i].label;
    if (imps[i].timestamp < warmup_end) warmup.Add(rows[i], imps[i].label);
  }
  Forest empty;
  empty.feature_names = features.TreeFeatureNames();
  const LeafEncoder encoder = warmup.size() > 0
                                  ? TrainEncoder(warmup, config.encoder_params)
                                  : LeafEncoder(std::move(empty));

  OnlineLR model(encoder.width(), config.lr);
  HoldoutLog local;
  HoldoutLog& out = log != nullptr ? *log : local;
  out = HoldoutLog{};
  for (size_t i = 0; i < imps.size(); ++i) {
    const auto active = encoder.Encode(rows[i]);
    if (holdout[i]) {
      out.ids.push_back(imps[i].id);
      out.timestamps.push_back(imps[i].timestamp);
      out.preds.push_back(model.Predict(active));
      out.labels.push_back(imps[i].label);
    } else {
      model.Step(active, imps[i].label);
    }
  }

  ExperimentReport report;
  report.config = {
      {"mode", "online"},
      {"seed", std::to_string(config.seed)},
      {"holdout_rate", FormatDouble(config.holdout_rate)},
      {"bucket_seconds", std::to_string(config.bucket_seconds)},
      {"encoder_warmup_seconds", std::to_string(config.encoder_warmup_seconds)},
      {"encoder_trees", std::to_string(encoder.num_trees())},
      {"encoder_width", std::to_string(encoder.width())},
      {"encoder_splits", std::to_string(encoder.forest().NumSplits())},
      {"eta0", FormatDouble(config.lr.eta0)},
      {"decay_steps", FormatDouble(config.lr.decay_steps)},
  };
  report.baseline_ctr = BackgroundCtr(train_clicks, train_n);
  report.n_train = train_n;
  report.n_eval = static_cast<int64_t>(out.preds.size());
  report.no_holdout = out.preds.empty();
  Summarize(out.timestamps, out.preds, out.labels,
            DayStart(imps.back().timestamp), config.bucket_seconds, report);
  report.features = CountingFeatureQuality(stream, features);
  return report;
}

void ValidateBatchExperimentConfig(const BatchExperimentConfig& config) {
  if (config.train_seconds < 1) {
    throw Error(ErrorCode::kInvalidConfig, "train_seconds must be >= 1");
  }
  if (config.bucket_seconds < 1) {
    throw Error(ErrorCode::kInvalidConfig, "bucket_seconds must be >= 1");
  }
  ValidateWideDeepTrainParams(config.train);
}

WideDeepExample MakeWideDeepExample(const FeatureBuilder& features,
                                    const Impression& impression) {
  FeatureRow row = features.Build(impression);
  WideDeepExample x;
  x.categorical = std::move(row.contextual);
  x.counts = std::move(row.counts);
  x.label = impression.label;
  return x;
}

WideDeepConfig MakeWideDeepConfig(const FeatureBuilder& features,
                                  int embed_dim, std::vector<int> hidden) {
  WideDeepConfig config;
  for (const auto& f : features.schema().features()) {
    config.cardinalities.push_back(f.cardinality);
  }
  config.num_counts = features.num_counting();
  config.embed_dim = embed_dim;
  config.hidden = std::move(hidden);
  return config;
}

ExperimentReport RunBatchExperiment(const Dataset& stream,
                                    const FeatureBuilder& features,
                                    const BatchExperimentConfig& config) {
  ValidateBatchExperimentConfig(config);
  const auto& imps = stream.impressions();
  if (imps.empty()) throw Error(ErrorCode::kEmptyStream, "empty stream");
  const int64_t split = DayStart(imps.front().timestamp) + config.train_seconds;

  std::vector<WideDeepExample> train;
  std::vector<WideDeepExample> test;
  std::vector<int64_t> test_ts;
  int64_t clicks = 0;
  for (const auto& imp : imps) {
    if (imp.timestamp < split) {
      train.push_back(MakeWideDeepExample(features, imp));
      clicks += imp.label;
    } else {
      test.push_back(MakeWideDeepExample(features, imp));
      test_ts.push_back(imp.timestamp);
    }
  }
  if (train.empty() || test.empty()) {
    throw Error(ErrorCode::kEmptyData,
                "batch split leaves an empty train or test set");
  }
  const WideDeepConfig arch =
      MakeWideDeepConfig(features, config.embed_dim, config.hidden);
  std::vector<double> epoch_loss;
  const WideDeep model = TrainWideDeep(train, arch, config.train, &epoch_loss);
  const std::vector<double> preds = model.PredictBatch(test);
  std::vector<int> labels;
  labels.reserve(test.size());
  for (const auto& x : test) labels.push_back(x.label);

  ExperimentReport report;
  std::vector<std::string> widths;
  for (const int w : config.hidden) widths.push_back(std::to_string(w));
  report.config = {
      {"mode", "batch"},
      {"seed", std::to_string(config.train.seed)},
      {"train_seconds", std::to_string(config.train_seconds)},
      {"bucket_seconds", std::to_string(config.bucket_seconds)},
      {"embed_dim", std::to_string(config.embed_dim)},
      {"hidden", Join(widths, ",")},
      {"epochs", std::to_string(config.train.epochs)},
      {"batch_size", std::to_string(config.train.batch_size)},
      {"step_size", FormatDouble(config.train.step_size)},
      {"first_epoch_loss", FormatDouble(epoch_loss.front())},
      {"final_epoch_loss", FormatDouble(epoch_loss.back())},
  };
  report.baseline_ctr =
      BackgroundCtr(clicks, static_cast<int64_t>(train.size()));
  report.n_train = static_cast<int64_t>(train.size());
  report.n_eval = static_cast<int64_t>(test.size());
  Summarize(test_ts, preds, labels, DayStart(imps.back().timestamp),
            config.bucket_seconds, report);
  report.features = CountingFeatureQuality(stream, features);
  return report;
}

std::vector<FeatureQuality> CountingFeatureQuality(
    const Dataset& stream, const FeatureBuilder& features) {
  const size_t m = features.num_counting();
  if (m == 0 || stream.impressions().empty()) return {};
  std::vector<std::vector<double>> values(m);
  std::vector<std::vector<uint8_t>> present(m);
  std::vector<int> labels;
  for (const auto& imp : stream.impressions()) {
    const FeatureRow row = features.Build(imp);
    for (size_t j = 0; j < m; ++j) {
      values[j].push_back(row.counts[j]);
      present[j].push_back(row.present[j]);
    }
    labels.push_back(imp.label);
  }
  return AnalyzeFeatures(features.CountingFeatureNames(), values, present,
                         labels);
}

}  // namespace ctrkeys
