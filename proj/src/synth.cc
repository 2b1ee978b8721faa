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
#include "ctrkeys/synth.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "ctrkeys/errors.h"
#include "ctrkeys/rng.h"

namespace ctrkeys {
namespace {

constexpr uint64_t kHotSalt = 0x484f545455504c45ULL;
constexpr uint64_t kStreamSalt = 0x53545245414d3031ULL;

struct ResolvedPlant {
  std::vector<size_t> columns;
  double hot_fraction;
  double lift;
};

std::vector<ResolvedPlant> Resolve(const SynthConfig& config) {
  std::vector<ResolvedPlant> out;
  for (const auto& p : config.planted) {
    ResolvedPlant r{{}, p.hot_fraction, p.lift};
    for (const auto& name : p.features) {
      r.columns.push_back(config.schema.RequireIndex(name));
    }
    out.push_back(std::move(r));
  }
  return out;
}

bool IsHotResolved(uint64_t seed, size_t index, const ResolvedPlant& plant,
                   const Impression& imp) {
  uint64_t h = HashWords({seed, kHotSalt, index,
                          static_cast<uint64_t>(imp.user_id)});
  for (const size_t c : plant.columns) {
    h = Mix64(h + kGoldenGamma + static_cast<uint64_t>(imp.values[c]));
  }
  return ToUnitInterval(h) < plant.hot_fraction;
}

double ParseNumber(const ConfigEntry& e) {
  const auto v = ParseDouble(e.value);
  if (!v) {
    throw Error(ErrorCode::kInvalidConfig, "line " + std::to_string(e.line) +
                                               ": bad number for " + e.key);
  }
  return *v;
}

int64_t ParseInteger(const ConfigEntry& e) {
  const auto v = ParseInt64(e.value);
  if (!v) {
    throw Error(ErrorCode::kInvalidConfig, "line " + std::to_string(e.line) +
                                               ": bad integer for " + e.key);
  }
  return *v;
}

}  // namespace

FeatureSchema DefaultSchema() {
  using K = FeatureKind;
  return FeatureSchema({
      {"hour_of_day", K::kCategorical, 24},
      {"item_objective", K::kCategorical, 5},
      {"engagement_option", K::kCategorical, 4},
      {"device_type", K::kCategorical, 3},
      {"day_of_week", K::kCategorical, 7},
      {"advertiser_category", K::kCategorical, 12},
      {"placement", K::kCategorical, 6},
      {"age_bucket", K::kCategorical, 8},
  });
}

SynthConfig DefaultSynthConfig() {
  SynthConfig config;
  config.schema = DefaultSchema();
  config.planted = {
      {{"hour_of_day"}, 0.2, 5.0},
      {{"item_objective", "engagement_option"}, 0.2, 5.0},
  };
  return config;
}

void ValidateSynthConfig(const SynthConfig& c) {
  const auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidConfig, why);
  };
  if (!(c.base_ctr > 0.0 && c.base_ctr < 1.0)) {
    fail("base_ctr must be in (0, 1), got " + FormatDouble(c.base_ctr));
  }
  if (c.n_users < 1 || c.n_ads < 1 || c.n_days < 1) {
    fail("n_users, n_ads and n_days must be >= 1");
  }
  if (!(c.min_impressions_per_user_per_day >= 0.0) ||
      !(c.max_impressions_per_user_per_day >=
        c.min_impressions_per_user_per_day) ||
      !(c.max_impressions_per_user_per_day > 0.0)) {
    fail("impressions_per_user_per_day range must satisfy 0 <= min <= max, "
         "max > 0");
  }
  if (!(c.volume_exponent >= 0.0)) fail("volume_exponent must be >= 0");
  if (c.schema.empty()) fail("schema has no features");
  for (const auto& p : c.planted) {
    if (p.features.empty() || p.features.size() > 2) {
      fail("a planted key needs 1 or 2 features");
    }
    for (const auto& name : p.features) {
      if (!c.schema.IndexOf(name)) fail("planted feature not in schema: " + name);
    }
    if (std::set<std::string>(p.features.begin(), p.features.end()).size() !=
        p.features.size()) {
      fail("planted key repeats a feature");
    }
    if (!(p.hot_fraction > 0.0 && p.hot_fraction < 1.0)) {
      fail("hot_fraction must be in (0, 1)");
    }
    if (!(p.lift >= 1.0) || !std::isfinite(p.lift)) fail("lift must be >= 1");
  }
}

bool IsHot(const SynthConfig& config, size_t planted_index,
           const Impression& impression) {
  const auto plants = Resolve(config);
  return IsHotResolved(config.seed, planted_index, plants.at(planted_index),
                       impression);
}

Dataset Generate(const SynthConfig& config) {
  ValidateSynthConfig(config);
  const auto plants = Resolve(config);
  const FeatureSchema& schema = config.schema;

  struct Draft {
    Impression imp;
    int64_t sequence;
  };
  std::vector<Draft> drafts;
  for (int u = 0; u < config.n_users; ++u) {
    const double rate = std::clamp(
        config.max_impressions_per_user_per_day *
            std::pow(static_cast<double>(u + 1), -config.volume_exponent),
        config.min_impressions_per_user_per_day,
        config.max_impressions_per_user_per_day);
    const int64_t user_id = u + 1;
    for (int day = 0; day < config.n_days; ++day) {
      CounterRng rng(HashWords({config.seed, kStreamSalt,
                                static_cast<uint64_t>(u),
                                static_cast<uint64_t>(day)}));
      // Volume jitters uniformly in [0.5, 1.5) x rate.
      const auto count =
          static_cast<int64_t>(std::floor(rate * (0.5 + rng.Uniform())));
      for (int64_t n = 0; n < count; ++n) {
        Draft d;
        d.sequence = static_cast<int64_t>(drafts.size());
        d.imp.user_id = user_id;
        d.imp.timestamp = day * kSecondsPerDay +
                          static_cast<int64_t>(rng.Below(kSecondsPerDay));
        d.imp.ad_id = static_cast<int64_t>(rng.Below(config.n_ads)) + 1;
        d.imp.values.resize(schema.size());
        for (size_t j = 0; j < schema.size(); ++j) {
          d.imp.values[j] =
              static_cast<int32_t>(rng.Below(schema.feature(j).cardinality));
        }
        double p = config.base_ctr;
        for (size_t k = 0; k < plants.size(); ++k) {
          if (IsHotResolved(config.seed, k, plants[k], d.imp)) {
            p *= plants[k].lift;
          }
        }
        p = std::clamp(p, 0.0, 1.0);
        d.imp.label = rng.Uniform() < p ? 1 : 0;
        drafts.push_back(std::move(d));
      }
    }
  }
  std::sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    return a.imp.timestamp != b.imp.timestamp ? a.imp.timestamp < b.imp.timestamp
                                              : a.sequence < b.sequence;
  });
  std::vector<Impression> impressions;
  impressions.reserve(drafts.size());
  for (size_t i = 0; i < drafts.size(); ++i) {
    drafts[i].imp.id = static_cast<int64_t>(i) + 1;
    impressions.push_back(std::move(drafts[i].imp));
  }
  return Dataset(schema, std::move(impressions));
}

std::vector<CountingKey> GroundTruthKeys(const SynthConfig& config) {
  std::vector<CountingKey> keys;
  for (const auto& p : config.planted) {
    CountingKey key(p.features);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      keys.push_back(std::move(key));
    }
  }
  return keys;
}

bool ApplySynthSetting(SynthConfig& c, const ConfigEntry& e) {
  if (e.key == "seed") {
    c.seed = static_cast<uint64_t>(ParseInteger(e));
  } else if (e.key == "n_users") {
    c.n_users = static_cast<int>(ParseInteger(e));
  } else if (e.key == "n_ads") {
    c.n_ads = static_cast<int>(ParseInteger(e));
  } else if (e.key == "n_days") {
    c.n_days = static_cast<int>(ParseInteger(e));
  } else if (e.key == "impressions_per_user_per_day") {
    const auto parts = Split(e.value, ',');
    const auto lo = parts.size() == 2 ? ParseDouble(Trim(parts[0])) : std::nullopt;
    const auto hi = parts.size() == 2 ? ParseDouble(Trim(parts[1])) : std::nullopt;
    if (!lo || !hi) {
      throw Error(ErrorCode::kInvalidConfig,
                  "line " + std::to_string(e.line) +
                      ": impressions_per_user_per_day expects min,max");
    }
    c.min_impressions_per_user_per_day = *lo;
    c.max_impressions_per_user_per_day = *hi;
  } else if (e.key == "volume_exponent") {
    c.volume_exponent = ParseNumber(e);
  } else if (e.key == "base_ctr") {
    c.base_ctr = ParseNumber(e);
  } else if (e.key == "schema_file") {
    c.schema = ReadSchema(e.value);
  } else {
    return false;
  }
  return true;
}

PlantedKey ParsePlantedStanza(const std::vector<ConfigEntry>& entries) {
  PlantedKey p;
  for (const auto& e : entries) {
    if (e.key == "features") {
      p.features.clear();
      for (const auto part : Split(e.value, '+')) {
        p.features.emplace_back(Trim(part));
      }
    } else if (e.key == "hot_fraction") {
      p.hot_fraction = ParseNumber(e);
    } else if (e.key == "lift") {
      p.lift = ParseNumber(e);
    } else {
      throw Error(ErrorCode::kInvalidConfig, "line " + std::to_string(e.line) +
                                                 ": unknown planted key " +
                                                 e.key);
    }
  }
  return p;
}

SynthConfig ParseSynthConfig(std::istream& in) {
  const ConfigDocument doc = ParseConfigDocument(in);
  SynthConfig config = DefaultSynthConfig();
  for (const auto& e : doc.entries) {
    if (!ApplySynthSetting(config, e)) {
      throw Error(ErrorCode::kInvalidConfig, "line " + std::to_string(e.line) +
                                                 ": unknown setting " + e.key);
    }
  }
  bool replaced = false;
  for (const auto& stanza : doc.stanzas) {
    if (stanza.name != "planted") {
      throw Error(ErrorCode::kInvalidConfig, "unknown stanza [" + stanza.name + "]");
    }
    if (!replaced) config.planted.clear();
    replaced = true;
    config.planted.push_back(ParsePlantedStanza(stanza.entries));
  }
  ValidateSynthConfig(config);
  return config;
}

SynthConfig ReadSynthConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  return ParseSynthConfig(in);
}

void WriteSynthConfig(const SynthConfig& c, std::ostream& out) {
  out << "seed = " << c.seed << '\n'
      << "n_users = " << c.n_users << '\n'
      << "n_ads = " << c.n_ads << '\n'
      << "n_days = " << c.n_days << '\n'
      << "impressions_per_user_per_day = "
      << FormatDouble(c.min_impressions_per_user_per_day) << ","
      << FormatDouble(c.max_impressions_per_user_per_day) << '\n'
      << "volume_exponent = " << FormatDouble(c.volume_exponent) << '\n'
      << "base_ctr = " << FormatDouble(c.base_ctr) << '\n';
  for (const auto& p : c.planted) {
    out << "\n[planted]\n"
        << "features = " << Join(p.features, "+") << '\n'
        << "hot_fraction = " << FormatDouble(p.hot_fraction) << '\n'
        << "lift = " << FormatDouble(p.lift) << '\n';
  }
}

}  // namespace ctrkeys
