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
#ifndef CTRKEYS_LEAF_ENCODER_H_
#define CTRKEYS_LEAF_ENCODER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "ctrkeys/tree.h"

namespace ctrkeys {

// Maps an input to the leaf it reaches in every tree of a forest. Leaves are
// numbered consecutively across trees, so the encoding is a sparse binary
// vector of width() with exactly one active index per tree.
class LeafEncoder {
 public:
  explicit LeafEncoder(Forest forest);

  const Forest& forest() const { return forest_; }
  size_t num_trees() const { return forest_.trees.size(); }
  size_t width() const { return width_; }

  // Active indices in tree order. Throws Error(kDimensionMismatch).
  std::vector<uint32_t> Encode(std::span<const int32_t> x) const;

 private:
  Forest forest_;
  // Per tree: node index -> global leaf ordinal, -1 for split nodes.
  std::vector<std::vector<int32_t>> leaf_ids_;
  size_t width_ = 0;
};

// Trains the shared forest. Throws Error(kEmptyData) for an empty set.
LeafEncoder TrainEncoder(const TrainingSet& data, const TrainParams& params);

}  // namespace ctrkeys

#endif  // CTRKEYS_LEAF_ENCODER_H_
