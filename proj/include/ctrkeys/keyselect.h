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
#ifndef CTRKEYS_KEYSELECT_H_
#define CTRKEYS_KEYSELECT_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ctrkeys/counting_key.h"
#include "ctrkeys/dataset.h"
#include "ctrkeys/tree.h"

namespace ctrkeys {

// One user's forest; users play the role of documents and path feature sets
// the role of words.
struct UserModel {
  int64_t model_id = 0;
  Forest forest;
};

struct CandidateStats {
  CountingKey key;
  int model_count = 0;
  // model id -> number of root-to-leaf paths of that model whose feature set
  // equals the key.
  std::map<int64_t, int> per_model_occurrences;
  double tf = 0.0;
  double idf = 0.0;
  double tfidf = 0.0;

  int64_t total_occurrences() const;
};

// Candidates ordered by key. Scores are left at zero.
std::vector<CandidateStats> ExtractCandidates(std::span<const UserModel> models);

// tf = mean occurrences over the models containing the key,
// idf = ln(n_models / (1 + model_count)), tfidf = tf * idf.
// Throws Error(kInvalidArgument) if some model_count exceeds n_models.
std::vector<CandidateStats> ScoreTfIdf(std::vector<CandidateStats> stats,
                                       int n_models);

// Sorted best first: tfidf descending, then model_count descending, then key.
std::vector<CandidateStats> RankCandidates(std::vector<CandidateStats> scored);

// The first k keys of RankCandidates (fewer if the pool is smaller).
std::vector<CountingKey> SelectTopK(const std::vector<CandidateStats>& scored,
                                    int k);

// The n users with the most impressions, ties to the smaller user id. Result
// is in that rank order.
std::vector<int64_t> TopUsers(const Dataset& dataset, int n);

struct SelectionResult {
  std::vector<CountingKey> keys;
  // Ranked, see RankCandidates.
  std::vector<CandidateStats> candidates;
  std::vector<int64_t> users;
};

// Trains one forest per top user on that user's contextual features, then
// extracts, scores and ranks the path candidates.
SelectionResult RunSelection(const Dataset& dataset, const TrainParams& params,
                             int n_top_users, int k);

// Tab-separated with a header row:
//   features  model_count  total_occurrences  tf  idf  tfidf
// rows in the order given (RankCandidates order for a report).
void WriteCandidateReport(const std::vector<CandidateStats>& ranked,
                          std::ostream& out);

struct CandidateReportRow {
  CountingKey key;
  int model_count = 0;
  int64_t total_occurrences = 0;
  double tf = 0.0;
  double idf = 0.0;
  double tfidf = 0.0;
};
std::vector<CandidateReportRow> ParseCandidateReport(std::istream& in);

}  // namespace ctrkeys

#endif  // CTRKEYS_KEYSELECT_H_
