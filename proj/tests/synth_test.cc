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
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ctrkeys/errors.h"
#include "ctrkeys/synth.h"
#include "gtest/gtest.h"

namespace ctrkeys {
namespace {

SynthConfig SmallConfig(uint64_t seed) {
  SynthConfig c = DefaultSynthConfig();
  c.seed = seed;
  c.n_users = 20;
  c.n_days = 4;
  return c;
}

TEST(SynthTest, DeterministicPerSeed) {
  EXPECT_EQ(Generate(SmallConfig(7)), Generate(SmallConfig(7)));
  EXPECT_NE(Generate(SmallConfig(7)), Generate(SmallConfig(8)));
}

TEST(SynthTest, DefaultsGiveAboutOneHundredThousandImpressions) {
  const Dataset d = Generate(DefaultSynthConfig());
  EXPECT_GT(d.size(), 80000u);
  EXPECT_LT(d.size(), 120000u);
  std::set<int64_t> users;
  for (const auto& imp : d.impressions()) users.insert(imp.user_id);
  EXPECT_EQ(users.size(), 100u);
}

TEST(SynthTest, RecordsAreWellFormed) {
  const SynthConfig c = SmallConfig(3);
  const Dataset d = Generate(c);
  ASSERT_FALSE(d.empty());
  std::vector<int64_t> ids;
  for (const auto& imp : d.impressions()) {
    EXPECT_GE(imp.timestamp, 0);
    EXPECT_LT(imp.timestamp, c.n_days * kSecondsPerDay);
    EXPECT_GE(imp.ad_id, 1);
    EXPECT_LE(imp.ad_id, c.n_ads);
    EXPECT_GE(imp.user_id, 1);
    EXPECT_LE(imp.user_id, c.n_users);
    ids.push_back(imp.id);
  }
  std::sort(ids.begin(), ids.end());
  for (size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(ids[i], int64_t(i + 1));
}

TEST(SynthTest, VolumeFollowsSkew) {
  const Dataset d = Generate(SmallConfig(1));
  std::map<int64_t, int> per_user;
  for (const auto& imp : d.impressions()) ++per_user[imp.user_id];
  EXPECT_GT(per_user[1], per_user[20]);
  // Four daily draws of rate * (0.5 + U): mean 6000, sd 1500 * sqrt(4 / 12).
  EXPECT_NEAR(per_user[1], 6000, 4 * 1500 * std::sqrt(4.0 / 12.0));
}

// Labels are Bernoulli(clamp(base * prod lifts)); the mean label in each
// hotness class must match the planted rate.
TEST(SynthTest, LabelRatesMatchPlantedLift) {
  const SynthConfig c = DefaultSynthConfig();
  const Dataset d = Generate(c);
  std::map<int, std::pair<double, double>> by_class;
  for (const auto& imp : d.impressions()) {
    int cls = 0;
    double p = c.base_ctr;
    for (size_t k = 0; k < c.planted.size(); ++k) {
      if (IsHot(c, k, imp)) {
        cls |= 1 << k;
        p *= c.planted[k].lift;
      }
    }
    p = std::min(1.0, p);
    auto& [n, clicks] = by_class[cls];
    n += 1;
    clicks += imp.label;
    EXPECT_NEAR(p, cls == 0 ? 0.05 : cls == 3 ? 1.0 : 0.25, 1e-12);
  }
  const double expected[] = {0.05, 0.25, 0.25, 1.0};
  for (const auto& [cls, stats] : by_class) {
    const double rate = stats.second / stats.first;
    const double p = expected[cls];
    const double sd = std::sqrt(std::max(p * (1 - p), 1e-12) / stats.first);
    EXPECT_NEAR(rate, p, 4 * sd + 1e-12) << "class " << cls;
  }
}

TEST(SynthTest, HotFractionPerUser) {
  const SynthConfig c = DefaultSynthConfig();
  // Over every (user, hour) tuple the hot share should be near 0.2.
  Impression imp;
  imp.values.assign(c.schema.size(), 0);
  int hot = 0;
  int total = 0;
  for (int64_t user = 1; user <= 100; ++user) {
    imp.user_id = user;
    for (int32_t h = 0; h < 24; ++h) {
      imp.values[0] = h;
      hot += IsHot(c, 0, imp);
      ++total;
    }
  }
  EXPECT_NEAR(static_cast<double>(hot) / total, 0.2, 0.03);
}

TEST(SynthTest, GroundTruthKeys) {
  const auto keys = GroundTruthKeys(DefaultSynthConfig());
  ASSERT_EQ(keys.size(), 2u);
  EXPECT_EQ(keys[0].ToString(), "hour_of_day");
  EXPECT_EQ(keys[1].ToString(), "engagement_option+item_objective");
}

TEST(SynthConfigTest, RejectsInvalidBaseCtr) {
  std::istringstream in("base_ctr = 1.5\n");
  try {
    ParseSynthConfig(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidConfig);
    EXPECT_NE(std::string(e.what()).find("base_ctr"), std::string::npos);
  }
}

TEST(SynthConfigTest, RejectsUnknownKeys) {
  std::istringstream in("n_user = 3\n");
  EXPECT_THROW(ParseSynthConfig(in), Error);
}

TEST(SynthConfigTest, PlantedStanzasReplaceDefaults) {
  std::istringstream in(
      "seed = 9\nimpressions_per_user_per_day = 2,40\n"
      "[planted]\nfeatures = device_type\nlift = 3\n");
  const SynthConfig c = ParseSynthConfig(in);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.min_impressions_per_user_per_day, 2);
  EXPECT_EQ(c.max_impressions_per_user_per_day, 40);
  ASSERT_EQ(c.planted.size(), 1u);
  EXPECT_EQ(c.planted[0].features, std::vector<std::string>{"device_type"});
  EXPECT_EQ(c.planted[0].lift, 3.0);
  EXPECT_EQ(c.planted[0].hot_fraction, 0.2);
}

TEST(SynthConfigTest, WriteParseRoundTrip) {
  SynthConfig c = DefaultSynthConfig();
  c.seed = 123;
  c.base_ctr = 0.07;
  std::stringstream io;
  WriteSynthConfig(c, io);
  const SynthConfig back = ParseSynthConfig(io);
  EXPECT_EQ(Generate([&] {
              SynthConfig s = back;
              s.n_days = 2;
              return s;
            }()),
            Generate([&] {
              SynthConfig s = c;
              s.n_days = 2;
              return s;
            }()));
}

}  // namespace
}  // namespace ctrkeys
