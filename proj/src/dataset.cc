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
#include "ctrkeys/dataset.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "ctrkeys/errors.h"
#include "ctrkeys/text_util.h"

namespace ctrkeys {

void ValidateImpression(const FeatureSchema& schema, const Impression& imp) {
  if (imp.values.size() != schema.size()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "impression " + std::to_string(imp.id) + " has " +
                    std::to_string(imp.values.size()) + " values, schema has " +
                    std::to_string(schema.size()));
  }
  for (size_t j = 0; j < schema.size(); ++j) {
    const int32_t v = imp.values[j];
    if (v < 0 || v >= schema.feature(j).cardinality) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "impression " + std::to_string(imp.id) + ": value " +
                      std::to_string(v) + " out of range for " +
                      schema.feature(j).name);
    }
  }
  if (imp.label != 0 && imp.label != 1) {
    throw Error(ErrorCode::kSchemaMismatch,
                "impression " + std::to_string(imp.id) + ": label must be 0/1");
  }
}

Dataset::Dataset(FeatureSchema schema, std::vector<Impression> impressions)
    : schema_(std::move(schema)), impressions_(std::move(impressions)) {
  std::unordered_set<int64_t> ids;
  ids.reserve(impressions_.size());
  for (const auto& imp : impressions_) {
    ValidateImpression(schema_, imp);
    if (!ids.insert(imp.id).second) {
      throw Error(ErrorCode::kDuplicateId, std::to_string(imp.id));
    }
  }
  const auto order = [](const Impression& a, const Impression& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.id < b.id;
  };
  if (!std::is_sorted(impressions_.begin(), impressions_.end(), order)) {
    std::sort(impressions_.begin(), impressions_.end(), order);
  }
}

Dataset Dataset::Slice(int64_t start, int64_t end) const {
  const auto lo = std::lower_bound(
      impressions_.begin(), impressions_.end(), start,
      [](const Impression& imp, int64_t ts) { return imp.timestamp < ts; });
  const auto hi = std::lower_bound(
      lo, impressions_.end(), end,
      [](const Impression& imp, int64_t ts) { return imp.timestamp < ts; });
  Dataset out;
  out.schema_ = schema_;
  out.impressions_.assign(lo, hi);
  return out;
}

Dataset ParseDataset(std::istream& in, const FeatureSchema& schema) {
  std::vector<Impression> impressions;
  std::string line;
  int64_t line_no = 0;
  const size_t expected = 5 + schema.size();
  while (std::getline(in, line)) {
    ++line_no;
    const auto malformed = [&](const std::string& why) {
      return Error(ErrorCode::kMalformedRecord,
                   "line " + std::to_string(line_no) + ": " + why);
    };
    const auto fields = Split(line, '\t');
    if (fields.size() != expected) {
      throw malformed("expected " + std::to_string(expected) +
                      " fields, got " + std::to_string(fields.size()));
    }
    std::vector<int64_t> parsed(fields.size());
    for (size_t i = 0; i < fields.size(); ++i) {
      const auto v = ParseInt64(fields[i]);
      if (!v) throw malformed("not an integer: '" + std::string(fields[i]) + "'");
      parsed[i] = *v;
    }
    Impression imp;
    imp.id = parsed[0];
    imp.timestamp = parsed[1];
    imp.user_id = parsed[2];
    imp.ad_id = parsed[3];
    if (parsed[4] != 0 && parsed[4] != 1) throw malformed("label must be 0/1");
    imp.label = static_cast<int>(parsed[4]);
    imp.values.reserve(schema.size());
    for (size_t j = 0; j < schema.size(); ++j) {
      const int64_t v = parsed[5 + j];
      if (v < 0 || v >= schema.feature(j).cardinality) {
        throw Error(ErrorCode::kSchemaMismatch,
                    "line " + std::to_string(line_no) + ": value " +
                        std::to_string(v) + " out of range for " +
                        schema.feature(j).name);
      }
      imp.values.push_back(static_cast<int32_t>(v));
    }
    impressions.push_back(std::move(imp));
  }
  return Dataset(schema, std::move(impressions));
}

Dataset ReadDataset(const std::string& path, const FeatureSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  return ParseDataset(in, schema);
}

void WriteDataset(const Dataset& dataset, std::ostream& out) {
  for (const auto& imp : dataset.impressions()) {
    out << imp.id << '\t' << imp.timestamp << '\t' << imp.user_id << '\t'
        << imp.ad_id << '\t' << imp.label;
    for (const int32_t v : imp.values) out << '\t' << v;
    out << '\n';
  }
}

void WriteDataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path);
  WriteDataset(dataset, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path);
}

}  // namespace ctrkeys
