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
#ifndef CTRKEYS_EXPERIMENT_H_
#define CTRKEYS_EXPERIMENT_H_

#include <cstdint>
#include <vector>

#include "ctrkeys/dataset.h"
#include "ctrkeys/features.h"
#include "ctrkeys/metrics.h"
#include "ctrkeys/online_lr.h"
#include "ctrkeys/tree.h"
#include "ctrkeys/wide_deep.h"

namespace ctrkeys {

// Seeded hash routing of an impression id. The same (id, seed, rate) always
// gives the same answer, whatever the feature set.
bool IsHoldout(int64_t impression_id, uint64_t seed, double rate);

// Start of the bucket containing ts, rounding toward negative infinity.
int64_t BucketStart(int64_t ts, int64_t bucket_seconds);

struct OnlineExperimentConfig {
  double holdout_rate = 0.01;
  int64_t bucket_seconds = 7200;
  uint64_t seed = 1;
  // The encoder forest is fitted on the training impressions of the first
  // encoder_warmup_seconds of the stream, then frozen.
  int64_t encoder_warmup_seconds = kSecondsPerDay;
  TrainParams encoder_params;
  OnlineLRParams lr;
};

void ValidateOnlineExperimentConfig(const OnlineExperimentConfig& config);

// Replays the stream in order. Holdout impressions are predicted and recorded;
// the rest are predicted and then used for one update. Throws
// Error(kEmptyStream).
ExperimentReport RunOnlineExperiment(const Dataset& stream,
                                     const FeatureBuilder& features,
                                     const OnlineExperimentConfig& config);

// Predictions recorded for the holdout, in stream order. Exposed for replay
// checks.
struct HoldoutLog {
  std::vector<int64_t> ids;
  std::vector<int64_t> timestamps;
  std::vector<double> preds;
  std::vector<int> labels;
};

ExperimentReport RunOnlineExperiment(const Dataset& stream,
                                     const FeatureBuilder& features,
                                     const OnlineExperimentConfig& config,
                                     HoldoutLog* log);

struct BatchExperimentConfig {
  // Impressions before stream day start + train_seconds train the model, the
  // rest test it.
  int64_t train_seconds = 2 * kSecondsPerDay;
  int64_t bucket_seconds = 7200;
  int embed_dim = 8;
  std::vector<int> hidden = {64, 32};
  WideDeepTrainParams train;
};

void ValidateBatchExperimentConfig(const BatchExperimentConfig& config);

// Throws Error(kEmptyStream) and Error(kEmptyData) when either split is empty.
ExperimentReport RunBatchExperiment(const Dataset& stream,
                                    const FeatureBuilder& features,
                                    const BatchExperimentConfig& config);

// Wide & deep inputs for one impression.
WideDeepExample MakeWideDeepExample(const FeatureBuilder& features,
                                    const Impression& impression);
WideDeepConfig MakeWideDeepConfig(const FeatureBuilder& features,
                                  int embed_dim, std::vector<int> hidden);

// Coverage and correlation of every counting feature over the stream.
std::vector<FeatureQuality> CountingFeatureQuality(
    const Dataset& stream, const FeatureBuilder& features);

}  // namespace ctrkeys

#endif  // CTRKEYS_EXPERIMENT_H_
