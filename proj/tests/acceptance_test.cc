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
// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ctrkeys/count_store.h"
#include "ctrkeys/entropy.h"
#include "ctrkeys/features.h"
#include "ctrkeys/keyselect.h"
#include "ctrkeys/metrics.h"
#include "ctrkeys/pipeline.h"
#include "ctrkeys/rng.h"
#include "ctrkeys/synth.h"
#include "gradcheck.h"
#include "test_util.h"
#include "tfidf_oracle.h"

namespace ctrkeys {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0, double c = 0,
                double d = 0) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), format, a, b, c, d);
  return buffer;
}

// 1. Zero lower-bound violations over 1000 random distributions in < 10 s.
Outcome LowerBound() {
  BoundSweepConfig config;
  config.n_trials = 1000;
  config.seed = 1;
  config.min_cardinality = 2;
  config.max_cardinality = 5;
  config.min_samples = 200;
  config.max_samples = 2000;
  const auto start = Clock::now();
  const BoundSweepReport r = RunBoundSweep(config);
  const double secs = SecondsSince(start);
  return {r.trials == 1000 && r.violations == 0 && secs < 10.0,
          Fmt("trials=%.0f violations=%.0f max_excess=%.3g time=%.2fs",
              r.trials, r.violations, r.max_excess, secs)};
}

// 2. Three equiprobable values, y = 1 iff value == a1.
Outcome ThreeValueOracle() {
  std::vector<LabeledRow> rows;
  std::vector<int> labels;
  for (int rep = 0; rep < 100; ++rep) {
    for (int64_t v = 0; v < 3; ++v) {
      rows.push_back({{v}, v == 1 ? 1 : 0});
      labels.push_back(v == 1 ? 1 : 0);
    }
  }
  const double h = Entropy(labels);
  const double ig = InfoGainBinarySplit(rows, 0, 1);
  const double cond = ConditionalEntropy(rows);
  const bool pass = std::abs(h - 0.9183) <= 1e-4 &&
                    std::abs(ig - 0.2516) <= 1e-4 && std::abs(cond) <= 1e-4;
  return {pass, Fmt("H(Y)=%.6f IG=%.6f H(Y|x)=%.6f", h, ig, cond)};
}

// 3. Hand cases and brute-force equivalence on every small stump model set.
Outcome TfIdf() {
  CandidateStats a;
  a.key = CountingKey({"f"});
  a.per_model_occurrences = {{1, 1}, {2, 2}, {3, 1}, {4, 2}};
  a.model_count = 4;
  CandidateStats b;
  b.key = CountingKey({"g"});
  for (int m = 0; m < 10; ++m) b.per_model_occurrences[m] = 1;
  b.model_count = 10;
  const auto scored = ScoreTfIdf({a, b}, 10);
  const double hand_err = std::max(
      {std::abs(scored[0].tf - 1.5), std::abs(scored[0].idf - std::log(2.0)),
       std::abs(scored[0].tfidf - 1.5 * std::log(2.0)),
       std::abs(scored[1].tfidf - std::log(10.0 / 11.0))});

  const std::vector<std::string> names = {"a", "b", "c"};
  double worst = 0.0;
  int sets = 0;
  testing::ForEachStumpModelSet(
      names, 4, 3, [&](const std::vector<testing::StumpModel>& models) {
        worst = std::max(worst, testing::CompareWithOracle(models, names));
        ++sets;
      });
  return {hand_err <= 1e-6 && worst <= 1e-6,
          Fmt("tfidf=%.6f ubiquitous=%.6f hand_err=%.2g", scored[0].tfidf,
              scored[1].tfidf, hand_err) +
              Fmt(" oracle_sets=%.0f max_err=%.2g", sets, worst)};
}

// 4. Planted keys in the top 5 for >= 8 of 10 seeds.
Outcome PlantedRecovery() {
  int recovered = 0;
  double slowest = 0.0;
  std::string misses;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    SynthConfig synth = DefaultSynthConfig();
    synth.seed = seed;
    const Dataset window = Generate(synth).Slice(0, 5 * kSecondsPerDay);
    const auto start = Clock::now();
    const SelectionResult r =
        RunSelection(window, DefaultSelectionParams(), 100, 5);
    slowest = std::max(slowest, SecondsSince(start));
    bool all = true;
    for (const auto& key : GroundTruthKeys(synth)) {
      all = all && std::find(r.keys.begin(), r.keys.end(), key) != r.keys.end();
    }
    recovered += all;
    if (!all) misses += " " + std::to_string(seed);
  }
  return {recovered >= 8 && slowest < 60.0,
          Fmt("recovered=%.0f/10 slowest_selection=%.2fs", recovered, slowest) +
              (misses.empty() ? "" : " missed_seeds:" + misses)};
}

// 5. Streaming replay equals the batch build on 1000-impression datasets.
Outcome CountEquivalence() {
  int equal = 0;
  int conserved = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    SynthConfig synth = DefaultSynthConfig();
    synth.seed = seed;
    synth.n_days = 1;
    const Dataset full = Generate(synth);
    std::vector<Impression> first(full.impressions().begin(),
                                  full.impressions().begin() + 1000);
    const Dataset history(synth.schema, first);
    std::vector<CountingKey> keys = GroundTruthKeys(synth);
    for (auto& k : SampleRandomSparseKeys(synth.schema, 3, seed)) keys.push_back(k);
    const CountTable batch = BuildCounts(history, keys);
    CountTable stream(synth.schema, keys);
    for (const auto& imp : history.impressions()) StreamUpdate(stream, imp);
    equal += stream == batch;
    int64_t clicks = 0;
    for (const auto& imp : history.impressions()) clicks += imp.label;
    bool ok = true;
    for (const auto& [imps, engs] : CountTotals(batch)) {
      ok = ok && imps == 1000 && engs == clicks;
    }
    conserved += ok;
  }
  return {equal == 20 && conserved == 20,
          Fmt("identical=%.0f/20 conserved=%.0f/20", equal, conserved)};
}

// Per-seed results of the full pipeline.
struct SeedRun {
  ExperimentReport online_base;
  ExperimentReport online_acf;
  ExperimentReport batch_base;
  ExperimentReport batch_acf;
  ExperimentReport batch_sparse;
  std::vector<std::string> report_paths;
  double seconds = 0.0;
};

SeedRun RunPipeline(uint64_t seed, const std::string& dir) {
  PipelineConfig config;
  ApplySeed(config, seed);
  config.workdir = dir;
  std::ostringstream sink;
  const auto start = Clock::now();
  CmdRun(config, sink);
  SeedRun run;
  run.seconds = SecondsSince(start);
  for (const EvalMode mode : {EvalMode::kOnline, EvalMode::kBatch}) {
    for (const FeatureSet set :
         {FeatureSet::kBase, FeatureSet::kAcf, FeatureSet::kRandomSparse}) {
      run.report_paths.push_back(config.ReportPath(mode, set));
    }
  }
  run.online_base = ReadReport(config.ReportPath(EvalMode::kOnline, FeatureSet::kBase));
  run.online_acf = ReadReport(config.ReportPath(EvalMode::kOnline, FeatureSet::kAcf));
  run.batch_base = ReadReport(config.ReportPath(EvalMode::kBatch, FeatureSet::kBase));
  run.batch_acf = ReadReport(config.ReportPath(EvalMode::kBatch, FeatureSet::kAcf));
  run.batch_sparse =
      ReadReport(config.ReportPath(EvalMode::kBatch, FeatureSet::kRandomSparse));
  return run;
}

// 6. ACF beats BASE in >= 4 of 5 seeds, online and batch.
Outcome RceLift(const std::vector<SeedRun>& runs) {
  int online = 0;
  int batch = 0;
  double slowest = 0.0;
  std::string values;
  for (const auto& r : runs) {
    online += r.online_acf.final_rce > r.online_base.final_rce;
    batch += r.batch_acf.final_rce > r.batch_base.final_rce;
    slowest = std::max(slowest, r.seconds);
    values += Fmt(" [%.2f>%.2f | %.2f>%.2f]", r.online_acf.final_rce,
                  r.online_base.final_rce, r.batch_acf.final_rce,
                  r.batch_base.final_rce);
  }
  return {online >= 4 && batch >= 4 && slowest < 300.0,
          Fmt("online=%.0f/5 batch=%.0f/5 slowest_run=%.1fs", online, batch,
              slowest) +
              " acf>base online|batch:" + values};
}

double MeanCoverage(const ExperimentReport& r) {
  double sum = 0.0;
  for (const auto& f : r.features) sum += f.coverage;
  return r.features.empty() ? 0.0 : sum / r.features.size();
}

double MeanAbsPearson(const ExperimentReport& r) {
  double sum = 0.0;
  int n = 0;
  for (const auto& f : r.features) {
    if (!f.pearson) continue;
    sum += std::abs(*f.pearson);
    ++n;
  }
  return n == 0 ? 0.0 : sum / n;
}

// 7. ACF features are denser and more correlated than random sparse ones.
Outcome SparseContrast(const std::vector<SeedRun>& runs) {
  int coverage = 0;
  int pearson = 0;
  std::string values;
  for (const auto& r : runs) {
    const double ca = MeanCoverage(r.batch_acf);
    const double cs = MeanCoverage(r.batch_sparse);
    const double pa = MeanAbsPearson(r.batch_acf);
    const double ps = MeanAbsPearson(r.batch_sparse);
    coverage += ca > cs;
    pearson += pa > ps;
    values += Fmt(" [cov %.3f/%.3f |r| %.4f/%.4f]", ca, cs, pa, ps);
  }
  return {coverage >= 4 && pearson >= 4,
          Fmt("coverage=%.0f/5 pearson=%.0f/5", coverage, pearson) +
              " acf/sparse:" + values};
}

// 8. Uniform CE, constant-baseline RCE and the Pearson hand case.
Outcome MetricTruths() {
  const double ce = CrossEntropy(std::vector<double>{0.5, 0.5},
                                 std::vector<int>{0, 1});
  CounterRng rng(8);
  std::vector<int> labels;
  for (int i = 0; i < 10000; ++i) labels.push_back(rng.Bernoulli(0.1));
  const double p =
      std::count(labels.begin(), labels.end(), 1) / double(labels.size());
  const double rce = Rce(std::vector<double>(labels.size(), p), labels, p);
  const std::vector<uint8_t> present(4, 1);
  const double r = *Pearson(std::vector<double>{1, 2, 3, 4}, present,
                            std::vector<int>{0, 0, 1, 1});
  const bool pass = std::abs(ce - std::log(2.0)) <= 1e-9 && rce > -0.5 &&
                    rce < 0.5 && std::abs(r - 0.8944) <= 1e-4;
  return {pass, Fmt("ce=%.12f baseline_rce=%.4f pearson=%.6f", ce, rce, r)};
}

// 9. Analytic gradients against central differences on 20 instances.
Outcome GradientCheck() {
  double worst = 0.0;
  size_t params = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = testing::CheckGradients(seed);
    worst = std::max(worst, r.max_relative_error);
    params += r.num_params;
  }
  return {worst < 1e-4, Fmt("instances=20 mean_params=%.1f max_rel_err=%.3g",
                            params / 20.0, worst)};
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// 10. A second full run with the same seed gives byte-identical reports.
Outcome Determinism(const SeedRun& first, const std::string& dir) {
  const SeedRun second = RunPipeline(1, dir);
  int identical = 0;
  for (size_t i = 0; i < first.report_paths.size(); ++i) {
    const std::string a = Slurp(first.report_paths[i]);
    identical += !a.empty() && a == Slurp(second.report_paths[i]);
  }
  const int n = static_cast<int>(first.report_paths.size());
  return {identical == n, Fmt("identical_reports=%.0f/%.0f", identical, n)};
}

int Main() {
  setenv("CTRKEYS_LOG_LEVEL", "0", 1);
  const std::string root = testing::ScratchDir("acceptance");
  std::vector<std::pair<std::string, std::function<Outcome()>>> checks;
  std::vector<SeedRun> runs;
  const auto ensure_runs = [&] {
    if (!runs.empty()) return;
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      runs.push_back(RunPipeline(seed, root + "/seed" + std::to_string(seed)));
    }
  };
  checks.emplace_back("lower bound sweep", LowerBound);
  checks.emplace_back("three-value entropy oracle", ThreeValueOracle);
  checks.emplace_back("tf-idf correctness", TfIdf);
  checks.emplace_back("planted-key recovery", PlantedRecovery);
  checks.emplace_back("count-store equivalence", CountEquivalence);
  checks.emplace_back("directional RCE lift", [&] {
    ensure_runs();
    return RceLift(runs);
  });
  checks.emplace_back("sparse-baseline contrast", [&] {
    ensure_runs();
    return SparseContrast(runs);
  });
  checks.emplace_back("metrics unit truths", MetricTruths);
  checks.emplace_back("gradient check", GradientCheck);
  checks.emplace_back("determinism", [&] {
    ensure_runs();
    return Determinism(runs.front(), root + "/repeat");
  });

  int failures = 0;
  for (size_t i = 0; i < checks.size(); ++i) {
    Outcome o;
    try {
      o = checks[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %zu: %s  %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                checks[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(checks.size()) - failures, checks.size());
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace ctrkeys

int main() { return ctrkeys::Main(); }
