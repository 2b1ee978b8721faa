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
#include <random>
#include <sstream>

#include "ctrkeys/errors.h"
#include "ctrkeys/keyselect.h"
#include "ctrkeys/synth.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "tfidf_oracle.h"

namespace ctrkeys {
namespace {

using ::ctrkeys::testing::CompareWithOracle;
using ::ctrkeys::testing::ForEachStumpModelSet;
using ::ctrkeys::testing::MakeImpression;
using ::ctrkeys::testing::SmallSchema;
using ::ctrkeys::testing::StumpForest;
using ::ctrkeys::testing::StumpModel;

CandidateStats Stats(std::vector<std::string> key,
                     std::map<int64_t, int> occurrences) {
  CandidateStats s;
  s.key = CountingKey(std::move(key));
  s.per_model_occurrences = std::move(occurrences);
  s.model_count = static_cast<int>(s.per_model_occurrences.size());
  return s;
}

TEST(TfIdfTest, HandCases) {
  auto scored = ScoreTfIdf({Stats({"f"}, {{1, 1}, {2, 2}, {3, 1}, {4, 2}})}, 10);
  EXPECT_NEAR(scored[0].tf, 1.5, 1e-12);
  EXPECT_NEAR(scored[0].idf, std::log(2.0), 1e-12);
  EXPECT_NEAR(scored[0].tfidf, 1.0397, 1e-4);

  std::map<int64_t, int> everywhere;
  for (int m = 0; m < 10; ++m) everywhere[m] = 1;
  scored = ScoreTfIdf({Stats({"f"}, everywhere)}, 10);
  EXPECT_NEAR(scored[0].tf, 1.0, 1e-12);
  EXPECT_NEAR(scored[0].tfidf, std::log(10.0 / 11.0), 1e-12);
  EXPECT_NEAR(scored[0].tfidf, -0.0953, 1e-4);

  scored = ScoreTfIdf({Stats({"f"}, {{0, 3}})}, 2);
  EXPECT_NEAR(scored[0].tf, 3.0, 1e-12);
  EXPECT_EQ(scored[0].idf, 0.0);
  EXPECT_EQ(scored[0].tfidf, 0.0);
}

TEST(TfIdfTest, RejectsModelCountAboveTotal) {
  EXPECT_THROW(ScoreTfIdf({Stats({"f"}, {{0, 1}, {1, 1}})}, 1), Error);
}

TEST(TfIdfTest, MatchesBruteForceOnSmallModelSets) {
  const std::vector<std::string> names = {"a", "b"};
  int checked = 0;
  ForEachStumpModelSet(names, 3, 2, [&](const std::vector<StumpModel>& set) {
    ASSERT_LE(CompareWithOracle(set, names), 1e-9);
    ++checked;
  });
  EXPECT_GT(checked, 300);
}

TEST(ExtractTest, StumpGivesTwoOccurrences) {
  const std::vector<std::string> names = {"f", "g"};
  std::vector<UserModel> models = {{7, StumpForest({"f"}, names)}};
  const auto c = ExtractCandidates(models);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].key.ToString(), "f");
  EXPECT_EQ(c[0].per_model_occurrences.at(7), 2);
  EXPECT_EQ(c[0].total_occurrences(), 2);

  models.push_back({8, StumpForest({"f", "g"}, names)});
  const auto c2 = ExtractCandidates(models);
  ASSERT_EQ(c2.size(), 2u);
  EXPECT_EQ(c2[0].model_count, 2);

  Forest leaves;
  leaves.feature_names = names;
  leaves.trees.push_back(Tree{{TreeNode{}}});
  std::vector<UserModel> empty = {{1, leaves}};
  EXPECT_TRUE(ExtractCandidates(empty).empty());
}

TEST(RankTest, TieBreaks) {
  auto a = Stats({"a"}, {});
  auto b = Stats({"b"}, {});
  auto c = Stats({"c"}, {});
  a.tfidf = b.tfidf = c.tfidf = 1.0;
  a.model_count = 3;
  b.model_count = 7;
  c.model_count = 3;
  const auto keys = SelectTopK({a, b, c}, 5);
  ASSERT_EQ(keys.size(), 3u);
  EXPECT_EQ(keys[0].ToString(), "b");
  EXPECT_EQ(keys[1].ToString(), "a");
  EXPECT_EQ(keys[2].ToString(), "c");
  EXPECT_EQ(SelectTopK({a, b, c}, 1).size(), 1u);
  EXPECT_THROW(SelectTopK({a}, 0), Error);
}

TEST(RankTest, PermutationAndValueInvariance) {
  const std::vector<std::string> names = {"f", "g", "h"};
  std::vector<UserModel> models = {
      {1, StumpForest({"f", "g", "f"}, names)},
      {2, StumpForest({"g"}, names)},
      {3, StumpForest({"h", "f"}, names)},
  };
  const auto base = RankCandidates(ScoreTfIdf(ExtractCandidates(models), 3));

  std::vector<UserModel> permuted = {models[2], models[0], models[1]};
  std::reverse(permuted[1].forest.trees.begin(), permuted[1].forest.trees.end());
  for (auto& m : permuted) {
    for (auto& t : m.forest.trees) t.nodes[0].threshold += 5;
  }
  const auto other = RankCandidates(ScoreTfIdf(ExtractCandidates(permuted), 3));
  ASSERT_EQ(base.size(), other.size());
  for (size_t i = 0; i < base.size(); ++i) {
    EXPECT_EQ(base[i].key, other[i].key);
    EXPECT_DOUBLE_EQ(base[i].tfidf, other[i].tfidf);
  }
}

TEST(RankTest, IdfMonotoneInModelCount) {
  double previous = INFINITY;
  for (int count = 1; count <= 10; ++count) {
    std::map<int64_t, int> occ;
    for (int m = 0; m < count; ++m) occ[m] = 1;
    const double idf = ScoreTfIdf({Stats({"f"}, occ)}, 10)[0].idf;
    EXPECT_LE(idf, previous);
    previous = idf;
  }
}

TEST(TopUsersTest, OrdersByVolumeThenId) {
  std::vector<Impression> imps;
  int64_t id = 1;
  for (int64_t user : {5, 5, 3, 3, 9}) {
    imps.push_back(MakeImpression(id, id, user, {0, 0}, 0));
    ++id;
  }
  const Dataset d(SmallSchema(), imps);
  EXPECT_EQ(TopUsers(d, 10), (std::vector<int64_t>{3, 5, 9}));
  EXPECT_EQ(TopUsers(d, 1), (std::vector<int64_t>{3}));
}

TEST(SelectionTest, SingleUserTrainsOneModel) {
  std::vector<Impression> imps;
  for (int i = 0; i < 200; ++i) {
    const int32_t h = i % 24;
    imps.push_back(MakeImpression(i + 1, i, 4, {h, i % 3}, h < 6 ? 1 : 0));
  }
  const SelectionResult r =
      RunSelection(Dataset(SmallSchema(), imps), TrainParams{}, 100, 5);
  EXPECT_EQ(r.users, std::vector<int64_t>{4});
  ASSERT_FALSE(r.keys.empty());
  EXPECT_EQ(r.keys[0].ToString(), "hour_of_day");
}

TEST(SelectionTest, DefaultSynthTrainsHundredModelsDeterministically) {
  SynthConfig c = DefaultSynthConfig();
  const Dataset d = Generate(c).Slice(0, 5 * kSecondsPerDay);
  TrainParams params;
  params.min_gain = 5.0;
  const SelectionResult a = RunSelection(d, params, 100, 5);
  const SelectionResult b = RunSelection(d, params, 100, 5);
  EXPECT_EQ(a.users.size(), 100u);
  EXPECT_EQ(a.keys, b.keys);
  for (const auto& truth : GroundTruthKeys(c)) {
    EXPECT_NE(std::find(a.keys.begin(), a.keys.end(), truth), a.keys.end())
        << truth.ToString();
  }
}

TEST(CandidateReportTest, RoundTripSortedByScore) {
  const std::vector<std::string> names = {"f", "g"};
  std::vector<UserModel> models = {{1, StumpForest({"f", "f"}, names)},
                                   {2, StumpForest({"g"}, names)},
                                   {3, StumpForest({}, names)}};
  const auto ranked = RankCandidates(ScoreTfIdf(ExtractCandidates(models), 3));
  std::stringstream io;
  WriteCandidateReport(ranked, io);
  const auto rows = ParseCandidateReport(io);
  ASSERT_EQ(rows.size(), ranked.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].key, ranked[i].key);
    EXPECT_EQ(rows[i].tfidf, ranked[i].tfidf);
    if (i > 0) EXPECT_GE(rows[i - 1].tfidf, rows[i].tfidf);
  }
}

}  // namespace
}  // namespace ctrkeys
