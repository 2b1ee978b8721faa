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
#include "ctrkeys/keyselect.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <thread>
#include <unordered_map>

#include "ctrkeys/errors.h"
#include "ctrkeys/text_util.h"

namespace ctrkeys {

int64_t CandidateStats::total_occurrences() const {
  int64_t total = 0;
  for (const auto& [model, count] : per_model_occurrences) total += count;
  return total;
}

std::vector<CandidateStats> ExtractCandidates(std::span<const UserModel> models) {
  std::map<CountingKey, CandidateStats> by_key;
  for (const UserModel& m : models) {
    for (auto& path : EnumeratePaths(m.forest)) {
      CountingKey key(std::move(path));
      auto [it, inserted] = by_key.try_emplace(key);
      if (inserted) it->second.key = key;
      ++it->second.per_model_occurrences[m.model_id];
    }
  }
  std::vector<CandidateStats> out;
  out.reserve(by_key.size());
  for (auto& [key, stats] : by_key) {
    stats.model_count = static_cast<int>(stats.per_model_occurrences.size());
    out.push_back(std::move(stats));
  }
  return out;
}

std::vector<CandidateStats> ScoreTfIdf(std::vector<CandidateStats> stats,
                                       int n_models) {
  for (auto& s : stats) {
    if (s.model_count < 1 || s.model_count > n_models) {
      throw Error(ErrorCode::kInvalidArgument,
                  "candidate " + s.key.ToString() + " is in " +
                      std::to_string(s.model_count) + " of " +
                      std::to_string(n_models) + " models");
    }
    s.tf = static_cast<double>(s.total_occurrences()) / s.model_count;
    s.idf = std::log(static_cast<double>(n_models) / (1.0 + s.model_count));
    s.tfidf = s.tf * s.idf;
  }
  return stats;
}

std::vector<CandidateStats> RankCandidates(std::vector<CandidateStats> scored) {
  std::sort(scored.begin(), scored.end(),
            [](const CandidateStats& a, const CandidateStats& b) {
              if (a.tfidf != b.tfidf) return a.tfidf > b.tfidf;
              if (a.model_count != b.model_count) {
                return a.model_count > b.model_count;
              }
              return a.key < b.key;
            });
  return scored;
}

std::vector<CountingKey> SelectTopK(const std::vector<CandidateStats>& scored,
                                    int k) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const auto ranked = RankCandidates(scored);
  std::vector<CountingKey> keys;
  for (size_t i = 0; i < ranked.size() && static_cast<int>(i) < k; ++i) {
    keys.push_back(ranked[i].key);
  }
  return keys;
}

std::vector<int64_t> TopUsers(const Dataset& dataset, int n) {
  std::unordered_map<int64_t, int64_t> counts;
  for (const auto& imp : dataset.impressions()) ++counts[imp.user_id];
  std::vector<std::pair<int64_t, int64_t>> users(counts.begin(), counts.end());
  std::sort(users.begin(), users.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<int64_t> out;
  for (size_t i = 0; i < users.size() && static_cast<int>(i) < n; ++i) {
    out.push_back(users[i].first);
  }
  return out;
}

SelectionResult RunSelection(const Dataset& dataset, const TrainParams& params,
                             int n_top_users, int k) {
  if (dataset.empty()) {
    throw Error(ErrorCode::kEmptyData, "selection window has no impressions");
  }
  if (n_top_users < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_top_users must be >= 1");
  }
  ValidateTrainParams(params);
  SelectionResult result;
  result.users = TopUsers(dataset, n_top_users);

  std::unordered_map<int64_t, size_t> slot;
  for (size_t i = 0; i < result.users.size(); ++i) slot[result.users[i]] = i;
  std::vector<TrainingSet> sets(result.users.size(),
                                TrainingSet(dataset.schema().Names()));
  for (const auto& imp : dataset.impressions()) {
    const auto it = slot.find(imp.user_id);
    if (it != slot.end()) sets[it->second].Add(imp.values, imp.label);
  }

  // Users train independently; results land in rank order regardless of
  // which thread finished first.
  std::vector<UserModel> models(result.users.size());
  const size_t workers = std::clamp<size_t>(
      std::thread::hardware_concurrency(), 1, std::max<size_t>(1, models.size()));
  const auto train_range = [&](size_t worker) {
    for (size_t i = worker; i < models.size(); i += workers) {
      models[i] = {result.users[i], TrainForest(sets[i], params)};
    }
  };
  if (workers == 1) {
    train_range(0);
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(train_range, w);
  }

  result.candidates = RankCandidates(ScoreTfIdf(
      ExtractCandidates(models), static_cast<int>(models.size())));
  result.keys = SelectTopK(result.candidates, k);
  return result;
}

void WriteCandidateReport(const std::vector<CandidateStats>& ranked,
                          std::ostream& out) {
  out << "features\tmodel_count\ttotal_occurrences\ttf\tidf\ttfidf\n";
  for (const auto& s : ranked) {
    out << s.key.ToString() << '\t' << s.model_count << '\t'
        << s.total_occurrences() << '\t' << FormatDouble(s.tf) << '\t'
        << FormatDouble(s.idf) << '\t' << FormatDouble(s.tfidf) << '\n';
  }
}

std::vector<CandidateReportRow> ParseCandidateReport(std::istream& in) {
  std::vector<CandidateReportRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) continue;
    if (line.empty()) continue;
    const auto f = Split(line, '\t');
    const auto mc = f.size() == 6 ? ParseInt64(f[1]) : std::nullopt;
    const auto total = f.size() == 6 ? ParseInt64(f[2]) : std::nullopt;
    const auto tf = f.size() == 6 ? ParseDouble(f[3]) : std::nullopt;
    const auto idf = f.size() == 6 ? ParseDouble(f[4]) : std::nullopt;
    const auto tfidf = f.size() == 6 ? ParseDouble(f[5]) : std::nullopt;
    if (!mc || !total || !tf || !idf || !tfidf) {
      throw Error(ErrorCode::kMalformedRecord,
                  "candidate report line " + std::to_string(line_no));
    }
    rows.push_back({CountingKey::Parse(std::string(f[0])),
                    static_cast<int>(*mc), *total, *tf, *idf, *tfidf});
  }
  return rows;
}

}  // namespace ctrkeys
