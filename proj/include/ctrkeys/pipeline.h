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
#ifndef CTRKEYS_PIPELINE_H_
#define CTRKEYS_PIPELINE_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ctrkeys/entropy.h"
#include "ctrkeys/experiment.h"
#include "ctrkeys/features.h"
#include "ctrkeys/synth.h"
#include "ctrkeys/tree.h"

namespace ctrkeys {

enum class EvalMode { kOnline, kBatch };

std::string_view EvalModeName(EvalMode mode);
// Accepts "online" and "batch". Throws Error(kInvalidArgument).
EvalMode ParseEvalMode(std::string_view name);

// Per-user forests for key selection: 20 trees of depth 3 that only keep
// splits with gain above 5.
TrainParams DefaultSelectionParams();

struct PipelineConfig {
  SynthConfig synth = DefaultSynthConfig();
  uint64_t seed = 1;

  // File names are resolved against workdir.
  std::string workdir = ".";
  std::string dataset = "dataset.tsv";
  std::string schema = "schema.tsv";
  std::string ground_truth = "ground_truth_keys.txt";
  std::string keys = "keys.txt";
  std::string candidates = "candidates.tsv";
  std::string counts = "counts_acf.tsv";
  std::string random_keys = "keys_random_sparse.txt";
  std::string random_counts = "counts_random_sparse.tsv";

  // Day windows from the start of the data: selection [0, selection_days),
  // count build [0, count_days), evaluation [count_days,
  // count_days + eval_days).
  int selection_days = 5;
  int count_days = 15;
  int eval_days = 3;

  TrainParams selection_params = DefaultSelectionParams();
  int n_top_users = 100;
  int k = 5;

  OnlineExperimentConfig online;
  BatchExperimentConfig batch;

  std::string Path(const std::string& name) const;
  // The report written by cmd_eval for a mode and feature set.
  std::string ReportPath(EvalMode mode, FeatureSet features) const;
};

// Sets the seed of every seeded stage.
void ApplySeed(PipelineConfig& config, uint64_t seed);

// Throws Error(kInvalidConfig).
void ValidatePipelineConfig(const PipelineConfig& config);

// Accepts every synth setting plus the pipeline keys written by
// WritePipelineConfig, and [planted] stanzas. Unknown keys throw
// Error(kInvalidConfig).
PipelineConfig ParsePipelineConfig(std::istream& in);
PipelineConfig ReadPipelineConfig(const std::string& path);
void WritePipelineConfig(const PipelineConfig& config, std::ostream& out);

// 64-bit content hash of a file, as 16 hex digits.
std::string FileChecksum(const std::string& path);

// Each command writes its artifacts under workdir and a human-readable
// summary to out.
void CmdSynth(const PipelineConfig& config, std::ostream& out);
void CmdSelect(const PipelineConfig& config, std::ostream& out);
// features must be ACF or RANDOM-SPARSE.
void CmdCounts(const PipelineConfig& config, FeatureSet features,
               std::ostream& out);
// Returns the report path; out_path overrides the default when not empty.
std::string CmdEval(const PipelineConfig& config, EvalMode mode,
                    FeatureSet features, const std::string& out_path,
                    std::ostream& out);
// Returns true when no violations were found.
bool CmdVerifyBound(const BoundSweepConfig& config, std::ostream& out);

// synth, select, counts for ACF and RANDOM-SPARSE, then eval for every mode
// and feature set.
void CmdRun(const PipelineConfig& config, std::ostream& out);

// Progress messages go to stderr when the verbosity is at least level.
// Verbosity comes from CTRKEYS_LOG_LEVEL: 0 silent, 1 progress (default),
// 2 debug.
int LogVerbosity();
void Log(int level, std::string_view message);

// Loads and slices the evaluation window of the dataset on disk.
Dataset LoadWindow(const PipelineConfig& config, int start_day, int end_day);

}  // namespace ctrkeys

#endif  // CTRKEYS_PIPELINE_H_
