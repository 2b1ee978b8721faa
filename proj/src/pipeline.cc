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
#include "ctrkeys/pipeline.h"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ctrkeys/count_store.h"
#include "ctrkeys/errors.h"
#include "ctrkeys/keyselect.h"
#include "ctrkeys/rng.h"
#include "ctrkeys/text_util.h"

namespace ctrkeys {

namespace {

int64_t ParseIntValue(const ConfigEntry& e) {
  const auto v = ParseInt64(e.value);
  if (!v) {
    throw Error(ErrorCode::kInvalidConfig,
                "line " + std::to_string(e.line) + ": " + e.key +
                    " expects an integer, got '" + e.value + "'");
  }
  return *v;
}

double ParseDoubleValue(const ConfigEntry& e) {
  const auto v = ParseDouble(e.value);
  if (!v) {
    throw Error(ErrorCode::kInvalidConfig,
                "line " + std::to_string(e.line) + ": " + e.key +
                    " expects a number, got '" + e.value + "'");
  }
  return *v;
}

std::vector<int> ParseWidths(const ConfigEntry& e) {
  std::vector<int> widths;
  if (Trim(e.value).empty()) return widths;
  for (const auto part : Split(e.value, ',')) {
    const auto v = ParseInt64(Trim(part));
    if (!v) {
      throw Error(ErrorCode::kInvalidConfig,
                  "line " + std::to_string(e.line) +
                      ": widths are comma-separated integers");
    }
    widths.push_back(static_cast<int>(*v));
  }
  return widths;
}

bool ApplyTrainSetting(TrainParams& p, std::string_view name,
                       const ConfigEntry& e) {
  if (name == "n_trees") {
    p.n_trees = static_cast<int>(ParseIntValue(e));
  } else if (name == "max_depth") {
    p.max_depth = static_cast<int>(ParseIntValue(e));
  } else if (name == "learning_rate") {
    p.learning_rate = ParseDoubleValue(e);
  } else if (name == "min_samples_leaf") {
    p.min_samples_leaf = static_cast<int>(ParseIntValue(e));
  } else if (name == "min_gain") {
    p.min_gain = ParseDoubleValue(e);
  } else if (name == "l2") {
    p.l2 = ParseDoubleValue(e);
  } else {
    return false;
  }
  return true;
}

void WriteTrainParams(const TrainParams& p, const std::string& prefix,
                      std::ostream& out) {
  out << prefix << "n_trees = " << p.n_trees << '\n'
      << prefix << "max_depth = " << p.max_depth << '\n'
      << prefix << "learning_rate = " << FormatDouble(p.learning_rate) << '\n'
      << prefix << "min_samples_leaf = " << p.min_samples_leaf << '\n'
      << prefix << "min_gain = " << FormatDouble(p.min_gain) << '\n'
      << prefix << "l2 = " << FormatDouble(p.l2) << '\n';
}

bool ApplyPipelineSetting(PipelineConfig& c, const ConfigEntry& e) {
  const std::string& k = e.key;
  if (k == "seed") {
    ApplySeed(c, static_cast<uint64_t>(ParseIntValue(e)));
  } else if (k == "workdir") {
    c.workdir = e.value;
  } else if (k == "dataset") {
    c.dataset = e.value;
  } else if (k == "schema") {
    c.schema = e.value;
  } else if (k == "ground_truth") {
    c.ground_truth = e.value;
  } else if (k == "keys") {
    c.keys = e.value;
  } else if (k == "candidates") {
    c.candidates = e.value;
  } else if (k == "counts") {
    c.counts = e.value;
  } else if (k == "random_keys") {
    c.random_keys = e.value;
  } else if (k == "random_counts") {
    c.random_counts = e.value;
  } else if (k == "selection_days") {
    c.selection_days = static_cast<int>(ParseIntValue(e));
  } else if (k == "count_days") {
    c.count_days = static_cast<int>(ParseIntValue(e));
  } else if (k == "eval_days") {
    c.eval_days = static_cast<int>(ParseIntValue(e));
  } else if (k == "n_top_users") {
    c.n_top_users = static_cast<int>(ParseIntValue(e));
  } else if (k == "k") {
    c.k = static_cast<int>(ParseIntValue(e));
  } else if (k.starts_with("selection.")) {
    if (!ApplyTrainSetting(c.selection_params, k.substr(10), e)) return false;
  } else if (k.starts_with("encoder.")) {
    if (!ApplyTrainSetting(c.online.encoder_params, k.substr(8), e)) {
      return false;
    }
  } else if (k == "holdout_rate") {
    c.online.holdout_rate = ParseDoubleValue(e);
  } else if (k == "bucket_seconds") {
    c.online.bucket_seconds = ParseIntValue(e);
    c.batch.bucket_seconds = c.online.bucket_seconds;
  } else if (k == "encoder_warmup_seconds") {
    c.online.encoder_warmup_seconds = ParseIntValue(e);
  } else if (k == "eta0") {
    c.online.lr.eta0 = ParseDoubleValue(e);
  } else if (k == "decay_steps") {
    c.online.lr.decay_steps = ParseDoubleValue(e);
  } else if (k == "batch.train_seconds") {
    c.batch.train_seconds = ParseIntValue(e);
  } else if (k == "batch.embed_dim") {
    c.batch.embed_dim = static_cast<int>(ParseIntValue(e));
  } else if (k == "batch.hidden") {
    c.batch.hidden = ParseWidths(e);
  } else if (k == "batch.epochs") {
    c.batch.train.epochs = static_cast<int>(ParseIntValue(e));
  } else if (k == "batch.batch_size") {
    c.batch.train.batch_size = static_cast<int>(ParseIntValue(e));
  } else if (k == "batch.step_size") {
    c.batch.train.step_size = ParseDoubleValue(e);
  } else {
    return false;
  }
  return true;
}

FeatureSchema LoadSchema(const PipelineConfig& config) {
  return ReadSchema(config.Path(config.schema));
}

}  // namespace

std::string_view EvalModeName(EvalMode mode) {
  return mode == EvalMode::kOnline ? "online" : "batch";
}

EvalMode ParseEvalMode(std::string_view name) {
  if (name == "online") return EvalMode::kOnline;
  if (name == "batch") return EvalMode::kBatch;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown mode '" + std::string(name) + "'");
}

TrainParams DefaultSelectionParams() {
  TrainParams p;
  p.n_trees = 20;
  p.max_depth = 3;
  p.min_gain = 5.0;
  return p;
}

std::string PipelineConfig::Path(const std::string& name) const {
  return (std::filesystem::path(workdir) / name).string();
}

std::string PipelineConfig::ReportPath(EvalMode mode,
                                       FeatureSet features) const {
  std::string set(FeatureSetName(features));
  for (char& ch : set) {
    ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (ch == '-') ch = '_';
  }
  return Path("report_" + std::string(EvalModeName(mode)) + "_" + set + ".tsv");
}

void ApplySeed(PipelineConfig& config, uint64_t seed) {
  config.seed = seed;
  config.synth.seed = seed;
  config.online.seed = seed;
  config.batch.train.seed = seed;
}

void ValidatePipelineConfig(const PipelineConfig& c) {
  ValidateSynthConfig(c.synth);
  const auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidConfig, why);
  };
  if (c.selection_days < 1 || c.count_days < 1 || c.eval_days < 1) {
    fail("window lengths must be >= 1 day");
  }
  if (c.selection_days > c.synth.n_days ||
      c.count_days + c.eval_days > c.synth.n_days) {
    fail("windows must lie within the " + std::to_string(c.synth.n_days) +
         " days of data");
  }
  if (c.n_top_users < 1) fail("n_top_users must be >= 1");
  if (c.k < 1) fail("k must be >= 1");
  ValidateTrainParams(c.selection_params);
  ValidateOnlineExperimentConfig(c.online);
  ValidateBatchExperimentConfig(c.batch);
}

PipelineConfig ParsePipelineConfig(std::istream& in) {
  const ConfigDocument doc = ParseConfigDocument(in);
  PipelineConfig config;
  for (const auto& e : doc.entries) {
    if (ApplyPipelineSetting(config, e)) continue;
    if (ApplySynthSetting(config.synth, e)) continue;
    throw Error(ErrorCode::kInvalidConfig,
                "line " + std::to_string(e.line) + ": unknown key '" + e.key +
                    "'");
  }
  bool planted_seen = false;
  for (const auto& stanza : doc.stanzas) {
    if (stanza.name != "planted") {
      throw Error(ErrorCode::kInvalidConfig,
                  "unknown section [" + stanza.name + "]");
    }
    if (!planted_seen) config.synth.planted.clear();
    planted_seen = true;
    config.synth.planted.push_back(ParsePlantedStanza(stanza.entries));
  }
  ValidatePipelineConfig(config);
  return config;
}

PipelineConfig ReadPipelineConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  return ParsePipelineConfig(in);
}

void WritePipelineConfig(const PipelineConfig& c, std::ostream& out) {
  std::ostringstream synth;
  WriteSynthConfig(c.synth, synth);
  const std::string text = synth.str();
  // Top-level synth keys first, planted stanzas last.
  const size_t stanzas = text.find("\n[");
  out << text.substr(0, stanzas);
  out << "workdir = " << c.workdir << '\n'
      << "dataset = " << c.dataset << '\n'
      << "schema = " << c.schema << '\n'
      << "ground_truth = " << c.ground_truth << '\n'
      << "keys = " << c.keys << '\n'
      << "candidates = " << c.candidates << '\n'
      << "counts = " << c.counts << '\n'
      << "random_keys = " << c.random_keys << '\n'
      << "random_counts = " << c.random_counts << '\n'
      << "selection_days = " << c.selection_days << '\n'
      << "count_days = " << c.count_days << '\n'
      << "eval_days = " << c.eval_days << '\n'
      << "n_top_users = " << c.n_top_users << '\n'
      << "k = " << c.k << '\n';
  WriteTrainParams(c.selection_params, "selection.", out);
  WriteTrainParams(c.online.encoder_params, "encoder.", out);
  std::vector<std::string> widths;
  for (const int w : c.batch.hidden) widths.push_back(std::to_string(w));
  out << "holdout_rate = " << FormatDouble(c.online.holdout_rate) << '\n'
      << "bucket_seconds = " << c.online.bucket_seconds << '\n'
      << "encoder_warmup_seconds = " << c.online.encoder_warmup_seconds << '\n'
      << "eta0 = " << FormatDouble(c.online.lr.eta0) << '\n'
      << "decay_steps = " << FormatDouble(c.online.lr.decay_steps) << '\n'
      << "batch.train_seconds = " << c.batch.train_seconds << '\n'
      << "batch.embed_dim = " << c.batch.embed_dim << '\n'
      << "batch.hidden = " << Join(widths, ",") << '\n'
      << "batch.epochs = " << c.batch.train.epochs << '\n'
      << "batch.batch_size = " << c.batch.train.batch_size << '\n'
      << "batch.step_size = " << FormatDouble(c.batch.train.step_size) << '\n';
  if (stanzas != std::string::npos) out << text.substr(stanzas);
}

std::string FileChecksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  uint64_t h = kGoldenGamma;
  uint64_t length = 0;
  char buffer[8];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    uint64_t word = 0;
    const auto n = static_cast<size_t>(in.gcount());
    for (size_t i = 0; i < n; ++i) {
      word |= static_cast<uint64_t>(static_cast<unsigned char>(buffer[i]))
              << (8 * i);
    }
    h = Mix64(h ^ word) + kGoldenGamma;
    length += n;
  }
  h = Mix64(h ^ length);
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

int LogVerbosity() {
  static const int level = [] {
    const char* env = std::getenv("CTRKEYS_LOG_LEVEL");
    if (env == nullptr) return 1;
    const auto v = ParseInt64(env);
    return v ? static_cast<int>(*v) : 1;
  }();
  return level;
}

void Log(int level, std::string_view message) {
  if (LogVerbosity() >= level) std::cerr << "[ctrkeys] " << message << '\n';
}

Dataset LoadWindow(const PipelineConfig& config, int start_day, int end_day) {
  const FeatureSchema schema = LoadSchema(config);
  const Dataset all = ReadDataset(config.Path(config.dataset), schema);
  return all.Slice(start_day * kSecondsPerDay, end_day * kSecondsPerDay);
}

void CmdSynth(const PipelineConfig& config, std::ostream& out) {
  ValidateSynthConfig(config.synth);
  std::filesystem::create_directories(config.workdir);
  Log(1, "generating synthetic impressions");
  const Dataset data = Generate(config.synth);
  const std::string dataset_path = config.Path(config.dataset);
  WriteSchema(data.schema(), config.Path(config.schema));
  WriteDataset(data, dataset_path);
  WriteKeys(GroundTruthKeys(config.synth), config.Path(config.ground_truth));
  int64_t clicks = 0;
  for (const auto& imp : data.impressions()) clicks += imp.label;
  out << "impressions\t" << data.size() << '\n'
      << "clicks\t" << clicks << '\n'
      << "dataset\t" << dataset_path << '\n'
      << "checksum\t" << FileChecksum(dataset_path) << '\n';
}

void CmdSelect(const PipelineConfig& config, std::ostream& out) {
  const Dataset window = LoadWindow(config, 0, config.selection_days);
  Log(1, "training per-user forests on " + std::to_string(window.size()) +
             " impressions");
  const SelectionResult result = RunSelection(
      window, config.selection_params, config.n_top_users, config.k);
  WriteKeys(result.keys, config.Path(config.keys));
  std::ofstream report(config.Path(config.candidates));
  if (!report) {
    throw Error(ErrorCode::kIoFailure,
                "cannot write " + config.Path(config.candidates));
  }
  WriteCandidateReport(result.candidates, report);
  out << "users\t" << result.users.size() << '\n'
      << "candidates\t" << result.candidates.size() << '\n';
  for (size_t i = 0; i < result.keys.size(); ++i) {
    out << "key\t" << result.keys[i].ToString() << '\t'
        << FormatDouble(result.candidates[i].tfidf) << '\n';
  }
}

void CmdCounts(const PipelineConfig& config, FeatureSet features,
               std::ostream& out) {
  if (features == FeatureSet::kBase) {
    throw Error(ErrorCode::kInvalidArgument, "BASE uses no count table");
  }
  const FeatureSchema schema = LoadSchema(config);
  std::vector<CountingKey> keys;
  std::string table_path;
  if (features == FeatureSet::kAcf) {
    keys = ReadKeys(config.Path(config.keys));
    table_path = config.Path(config.counts);
  } else {
    keys = SampleRandomSparseKeys(schema, config.k, config.seed);
    WriteKeys(keys, config.Path(config.random_keys));
    table_path = config.Path(config.random_counts);
  }
  const Dataset window = LoadWindow(config, 0, config.count_days);
  const CountTable table = BuildCounts(window, keys);
  WriteCountTable(table, table_path);

  int64_t clicks = 0;
  for (const auto& imp : window.impressions()) clicks += imp.label;
  const auto totals = CountTotals(table);
  bool conserved = true;
  for (size_t k = 0; k < keys.size(); ++k) {
    const bool ok = totals[k].first == static_cast<int64_t>(window.size()) &&
                    totals[k].second == clicks;
    conserved = conserved && ok;
    out << "key\t" << keys[k].ToString() << "\ttuples\t"
        << table.records(k).size() << "\timpressions\t" << totals[k].first
        << "\tengagements\t" << totals[k].second << '\n';
  }
  const bool reloaded = ReadCountTable(table_path, schema) == table;
  out << "history\t" << window.size() << "\t" << clicks << '\n'
      << "conservation\t" << (conserved ? "ok" : "FAILED") << '\n'
      << "reload\t" << (reloaded ? "ok" : "FAILED") << '\n';
  if (!conserved || !reloaded) {
    throw Error(ErrorCode::kIoFailure, "count table checks failed");
  }
}

std::string CmdEval(const PipelineConfig& config, EvalMode mode,
                    FeatureSet features, const std::string& out_path,
                    std::ostream& out) {
  const FeatureSchema schema = LoadSchema(config);
  std::optional<CountTable> table;
  if (features == FeatureSet::kAcf) {
    table.emplace(ReadCountTable(config.Path(config.counts), schema));
  } else if (features == FeatureSet::kRandomSparse) {
    table.emplace(ReadCountTable(config.Path(config.random_counts), schema));
  }
  const FeatureBuilder builder(schema, table ? &*table : nullptr);
  const Dataset window = LoadWindow(config, config.count_days,
                                    config.count_days + config.eval_days);
  Log(1, "evaluating " + std::string(EvalModeName(mode)) + " " +
             std::string(FeatureSetName(features)) + " on " +
             std::to_string(window.size()) + " impressions");
  ExperimentReport report =
      mode == EvalMode::kOnline
          ? RunOnlineExperiment(window, builder, config.online)
          : RunBatchExperiment(window, builder, config.batch);
  report.config.insert(report.config.begin(),
                       {"features", std::string(FeatureSetName(features))});
  report.config.push_back({"count_features",
                           std::to_string(builder.num_counting())});
  const std::string path =
      out_path.empty() ? config.ReportPath(mode, features) : out_path;
  EmitReport(report, path);
  out << "report\t" << path << '\n'
      << "n_eval\t" << report.n_eval << '\n'
      << "final_rce\t" << FormatDouble(report.final_rce) << '\n';
  return path;
}

bool CmdVerifyBound(const BoundSweepConfig& config, std::ostream& out) {
  const BoundSweepReport r = RunBoundSweep(config);
  out << "trials\t" << r.trials << '\n'
      << "violations\t" << r.violations << '\n'
      << "max_excess\t" << FormatDouble(r.max_excess) << '\n'
      << "mean_gap\t" << FormatDouble(r.mean_gap) << '\n';
  return r.violations == 0;
}

void CmdRun(const PipelineConfig& config, std::ostream& out) {
  CmdSynth(config, out);
  CmdSelect(config, out);
  CmdCounts(config, FeatureSet::kAcf, out);
  CmdCounts(config, FeatureSet::kRandomSparse, out);
  for (const EvalMode mode : {EvalMode::kOnline, EvalMode::kBatch}) {
    for (const FeatureSet set :
         {FeatureSet::kBase, FeatureSet::kAcf, FeatureSet::kRandomSparse}) {
      CmdEval(config, mode, set, "", out);
    }
  }
}

}  // namespace ctrkeys
