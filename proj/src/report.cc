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
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "ctrkeys/errors.h"
#include "ctrkeys/metrics.h"
#include "ctrkeys/text_util.h"

namespace ctrkeys {

namespace {

constexpr char kConfigPrefix[] = "config.";

}  // namespace

void EmitReport(const ExperimentReport& report, std::ostream& out) {
  out << "[buckets]\nstart\tn\tce\trce\n";
  for (const auto& b : report.buckets) {
    out << b.start << '\t' << b.n << '\t' << FormatDouble(b.ce) << '\t'
        << FormatDouble(b.rce) << '\n';
  }
  out << "\n[summary]\nkey\tvalue\n";
  out << "baseline_ctr\t" << FormatDouble(report.baseline_ctr) << '\n';
  out << "n_train\t" << report.n_train << '\n';
  out << "n_eval\t" << report.n_eval << '\n';
  out << "final_ce\t" << FormatDouble(report.final_ce) << '\n';
  out << "final_rce\t" << FormatDouble(report.final_rce) << '\n';
  out << "no_holdout\t" << (report.no_holdout ? 1 : 0) << '\n';
  for (const auto& [k, v] : report.config) {
    out << kConfigPrefix << k << '\t' << v << '\n';
  }
  out << "\n[coverage]\nfeature\tcoverage\tn_present\n";
  for (const auto& f : report.features) {
    out << f.name << '\t' << FormatDouble(f.coverage) << '\t' << f.n_present
        << '\n';
  }
  out << "\n[correlation]\nfeature\tpearson\n";
  for (const auto& f : report.features) {
    out << f.name << '\t'
        << (f.pearson ? FormatDouble(*f.pearson) : std::string("undefined"))
        << '\n';
  }
}

void EmitReport(const ExperimentReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path);
  EmitReport(report, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path);
}

ExperimentReport ParseReport(std::istream& in) {
  ExperimentReport report;
  std::string line;
  std::string section;
  bool expect_header = false;
  int line_no = 0;
  std::map<std::string, std::optional<double>> correlations;
  const auto malformed = [&](const std::string& why) {
    return Error(ErrorCode::kMalformedRecord,
                 "report line " + std::to_string(line_no) + ": " + why);
  };
  const auto number = [&](std::string_view s) {
    const auto v = ParseDouble(s);
    if (!v) throw malformed("bad number '" + std::string(s) + "'");
    return *v;
  };
  const auto integer = [&](std::string_view s) {
    const auto v = ParseInt64(s);
    if (!v) throw malformed("bad integer '" + std::string(s) + "'");
    return *v;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      expect_header = true;
      continue;
    }
    if (expect_header) {
      expect_header = false;
      continue;
    }
    const auto f = Split(line, '\t');
    if (section == "buckets") {
      if (f.size() != 4) throw malformed("bucket rows have 4 fields");
      report.buckets.push_back(
          {integer(f[0]), integer(f[1]), number(f[2]), number(f[3])});
    } else if (section == "summary") {
      if (f.size() != 2) throw malformed("summary rows have 2 fields");
      const std::string key(f[0]);
      if (key == "baseline_ctr") {
        report.baseline_ctr = number(f[1]);
      } else if (key == "n_train") {
        report.n_train = integer(f[1]);
      } else if (key == "n_eval") {
        report.n_eval = integer(f[1]);
      } else if (key == "final_ce") {
        report.final_ce = number(f[1]);
      } else if (key == "final_rce") {
        report.final_rce = number(f[1]);
      } else if (key == "no_holdout") {
        report.no_holdout = integer(f[1]) != 0;
      } else if (key.starts_with(kConfigPrefix)) {
        report.config.emplace_back(key.substr(sizeof(kConfigPrefix) - 1),
                                   std::string(f[1]));
      } else {
        throw malformed("unknown summary key '" + key + "'");
      }
    } else if (section == "coverage") {
      if (f.size() != 3) throw malformed("coverage rows have 3 fields");
      FeatureQuality q;
      q.name = std::string(f[0]);
      q.coverage = number(f[1]);
      q.n_present = integer(f[2]);
      report.features.push_back(std::move(q));
    } else if (section == "correlation") {
      if (f.size() != 2) throw malformed("correlation rows have 2 fields");
      correlations[std::string(f[0])] =
          f[1] == "undefined" ? std::nullopt
                              : std::optional<double>(number(f[1]));
    } else {
      throw malformed("row outside a known section");
    }
  }
  for (auto& q : report.features) {
    const auto it = correlations.find(q.name);
    if (it != correlations.end()) q.pearson = it->second;
  }
  return report;
}

ExperimentReport ReadReport(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  return ParseReport(in);
}

}  // namespace ctrkeys
