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
#ifndef CTRKEYS_SYNTH_H_
#define CTRKEYS_SYNTH_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctrkeys/counting_key.h"
#include "ctrkeys/dataset.h"
#include "ctrkeys/schema.h"
#include "ctrkeys/text_util.h"

namespace ctrkeys {

// A ground-truth interaction. For every user, a hot_fraction share of the
// value tuples over `features` is marked hot (independently per user), and
// impressions falling on a hot tuple have their CTR multiplied by `lift`.
struct PlantedKey {
  std::vector<std::string> features;
  double hot_fraction = 0.2;
  double lift = 5.0;
};

struct SynthConfig {
  uint64_t seed = 1;
  int n_users = 100;
  int n_ads = 500;
  int n_days = 18;
  // Daily volume of user u (0-based) is max * (u + 1)^-volume_exponent,
  // clamped to [min, max].
  // The steep default skew leaves only the heaviest users with enough clicks
  // for their interactions to be visible, as with real sparse engagement.
  double min_impressions_per_user_per_day = 5;
  double max_impressions_per_user_per_day = 1500;
  double volume_exponent = 1.2;
  double base_ctr = 0.05;
  FeatureSchema schema;
  std::vector<PlantedKey> planted;
};

// 8 categorical features, cardinalities 3..24.
FeatureSchema DefaultSchema();

// The defaults used by the CLI and the acceptance suite.
SynthConfig DefaultSynthConfig();

// Throws Error(kInvalidConfig).
void ValidateSynthConfig(const SynthConfig& config);

// Deterministic in config.seed.
Dataset Generate(const SynthConfig& config);

// True when the impression falls on a hot tuple of planted[planted_index].
bool IsHot(const SynthConfig& config, size_t planted_index,
           const Impression& impression);

std::vector<CountingKey> GroundTruthKeys(const SynthConfig& config);

// Flat "key = value" lines; each "[planted]" line opens a planted-key stanza
// whose own key = value lines follow. '#' starts a comment. Keys not given
// keep their DefaultSynthConfig() values, except that a file containing any
// [planted] stanza replaces the default planted list.
SynthConfig ParseSynthConfig(std::istream& in);
// Applies one top-level setting; returns false when the key is not a synth
// setting. Throws Error(kInvalidConfig) on an unparsable value.
bool ApplySynthSetting(SynthConfig& config, const ConfigEntry& entry);
PlantedKey ParsePlantedStanza(const std::vector<ConfigEntry>& entries);
SynthConfig ReadSynthConfig(const std::string& path);
void WriteSynthConfig(const SynthConfig& config, std::ostream& out);

}  // namespace ctrkeys

#endif  // CTRKEYS_SYNTH_H_
