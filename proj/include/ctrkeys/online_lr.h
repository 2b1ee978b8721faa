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
#ifndef CTRKEYS_ONLINE_LR_H_
#define CTRKEYS_ONLINE_LR_H_

#include <cstdint>
#include <span>
#include <vector>

namespace ctrkeys {

struct OnlineLRParams {
  double eta0 = 0.1;
  // eta_t = eta0 / (1 + t / decay_steps).
  double decay_steps = 1e4;
};

void ValidateOnlineLRParams(const OnlineLRParams& params);

// Logistic regression over sparse binary inputs given as active indices.
class OnlineLR {
 public:
  OnlineLR(size_t width, OnlineLRParams params);

  double Predict(std::span<const uint32_t> active) const;

  // Predicts, then takes one SGD step on (active, label). Returns the
  // prediction made before the update.
  double Step(std::span<const uint32_t> active, int label);

  double StepSize() const;
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  int64_t steps() const { return steps_; }

 private:
  OnlineLRParams params_;
  std::vector<double> weights_;
  double bias_ = 0.0;
  int64_t steps_ = 0;
};

}  // namespace ctrkeys

#endif  // CTRKEYS_ONLINE_LR_H_
