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
// Command-line driver for the counting-key pipeline.
//
//   ctrkeys synth        [--config F] [--seed N] [--workdir D]
//   ctrkeys select       [--config F] [--seed N] [--workdir D]
//   ctrkeys counts       [--features ACF|RANDOM-SPARSE]
//   ctrkeys eval         --mode online|batch --features BASE|ACF|RANDOM-SPARSE
//                        [--out PATH]
//   ctrkeys verify-bound [--trials N] [--seed N]
//   ctrkeys run          all of the above with default reports
//   ctrkeys config       prints the effective configuration
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 check failed.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ctrkeys/errors.h"
#include "ctrkeys/pipeline.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCheckFailed = 3;

int ExitCodeFor(ctrkeys::ErrorCode code) {
  switch (code) {
    case ctrkeys::ErrorCode::kInvalidArgument:
    case ctrkeys::ErrorCode::kInvalidConfig:
      return kExitUsage;
    default:
      return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting-key selection and CTR evaluation pipeline"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<uint64_t> seed;
  std::string workdir;
  app.add_option("--config", config_path, "Pipeline config file");
  app.add_option("--seed", seed, "Seed, overrides the config");
  app.add_option("--workdir", workdir, "Artifact directory, overrides the config");

  auto* synth = app.add_subcommand("synth", "Generate the synthetic dataset");
  auto* select = app.add_subcommand("select", "Select counting keys");
  auto* counts = app.add_subcommand("counts", "Build a count table");
  auto* eval = app.add_subcommand("eval", "Run a CTR experiment");
  auto* bound = app.add_subcommand("verify-bound",
                                   "Check the information-gain lower bound");
  auto* run = app.add_subcommand("run", "Run every stage");
  auto* show = app.add_subcommand("config", "Print the effective config");

  std::string features = "ACF";
  counts->add_option("--features", features, "ACF or RANDOM-SPARSE")
      ->check(CLI::IsMember({"ACF", "RANDOM-SPARSE"}));
  std::string mode;
  std::string eval_features;
  std::string out_path;
  eval->add_option("--mode", mode, "online or batch")
      ->required()
      ->check(CLI::IsMember({"online", "batch"}));
  eval->add_option("--features", eval_features, "BASE, ACF or RANDOM-SPARSE")
      ->required()
      ->check(CLI::IsMember({"BASE", "ACF", "RANDOM-SPARSE"}));
  eval->add_option("--out", out_path, "Report path");
  int trials = 1000;
  bound->add_option("--trials", trials, "Number of random distributions")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*bound) {
      ctrkeys::BoundSweepConfig sweep;
      sweep.n_trials = trials;
      sweep.seed = seed.value_or(1);
      return ctrkeys::CmdVerifyBound(sweep, std::cout) ? kExitOk
                                                       : kExitCheckFailed;
    }
    ctrkeys::PipelineConfig config =
        config_path.empty() ? ctrkeys::PipelineConfig{}
                            : ctrkeys::ReadPipelineConfig(config_path);
    if (seed) ctrkeys::ApplySeed(config, *seed);
    if (!workdir.empty()) config.workdir = workdir;
    ctrkeys::ValidatePipelineConfig(config);

    if (*synth) {
      ctrkeys::CmdSynth(config, std::cout);
    } else if (*select) {
      ctrkeys::CmdSelect(config, std::cout);
    } else if (*counts) {
      ctrkeys::CmdCounts(config, ctrkeys::ParseFeatureSet(features), std::cout);
    } else if (*eval) {
      ctrkeys::CmdEval(config, ctrkeys::ParseEvalMode(mode),
                       ctrkeys::ParseFeatureSet(eval_features), out_path,
                       std::cout);
    } else if (*run) {
      ctrkeys::CmdRun(config, std::cout);
    } else if (*show) {
      ctrkeys::WritePipelineConfig(config, std::cout);
    }
  } catch (const ctrkeys::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
