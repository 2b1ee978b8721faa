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
#include "ctrkeys/leaf_encoder.h"

#include <string>

#include "ctrkeys/errors.h"

namespace ctrkeys {

LeafEncoder::LeafEncoder(Forest forest) : forest_(std::move(forest)) {
  leaf_ids_.reserve(forest_.trees.size());
  for (const Tree& tree : forest_.trees) {
    std::vector<int32_t> ids(tree.nodes.size(), -1);
    for (size_t n = 0; n < tree.nodes.size(); ++n) {
      if (tree.nodes[n].is_leaf()) ids[n] = static_cast<int32_t>(width_++);
    }
    leaf_ids_.push_back(std::move(ids));
  }
}

std::vector<uint32_t> LeafEncoder::Encode(std::span<const int32_t> x) const {
  if (x.size() != forest_.num_features()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "encoder expects " + std::to_string(forest_.num_features()) +
                    " features, got " + std::to_string(x.size()));
  }
  std::vector<uint32_t> active;
  active.reserve(forest_.trees.size());
  for (size_t t = 0; t < forest_.trees.size(); ++t) {
    active.push_back(
        static_cast<uint32_t>(leaf_ids_[t][forest_.trees[t].LeafIndex(x)]));
  }
  return active;
}

LeafEncoder TrainEncoder(const TrainingSet& data, const TrainParams& params) {
  return LeafEncoder(TrainForest(data, params));
}

}  // namespace ctrkeys
