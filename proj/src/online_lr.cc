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
#include "ctrkeys/online_lr.h"

#include <cmath>
#include <string>

#include "ctrkeys/errors.h"
#include "ctrkeys/tree.h"

namespace ctrkeys {

void ValidateOnlineLRParams(const OnlineLRParams& params) {
  if (!(params.eta0 >= 0.0) || !std::isfinite(params.eta0)) {
    throw Error(ErrorCode::kInvalidConfig, "eta0 must be finite and >= 0");
  }
  if (!(params.decay_steps > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "decay_steps must be > 0");
  }
}

OnlineLR::OnlineLR(size_t width, OnlineLRParams params)
    : params_(params), weights_(width, 0.0) {
  ValidateOnlineLRParams(params_);
}

double OnlineLR::Predict(std::span<const uint32_t> active) const {
  double z = bias_;
  for (const uint32_t i : active) {
    if (i >= weights_.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "active index " + std::to_string(i) + " out of range");
    }
    z += weights_[i];
  }
  return Sigmoid(z);
}

double OnlineLR::StepSize() const {
  return params_.eta0 /
         (1.0 + static_cast<double>(steps_) / params_.decay_steps);
}

double OnlineLR::Step(std::span<const uint32_t> active, int label) {
  const double p = Predict(active);
  const double g = StepSize() * (p - static_cast<double>(label));
  for (const uint32_t i : active) weights_[i] -= g;
  bias_ -= g;
  ++steps_;
  return p;
}

}  // namespace ctrkeys
