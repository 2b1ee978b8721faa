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
#include "ctrkeys/schema.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "ctrkeys/errors.h"
#include "ctrkeys/text_util.h"

namespace ctrkeys {

std::string_view FeatureKindName(FeatureKind kind) {
  return kind == FeatureKind::kCategorical ? "categorical" : "ordinal";
}

bool IsReservedName(std::string_view name) {
  for (const auto reserved : kReservedNames) {
    if (name == reserved) return true;
  }
  return false;
}

FeatureSchema::FeatureSchema(std::vector<FeatureDescriptor> features)
    : features_(std::move(features)) {
  std::set<std::string_view> seen;
  for (const auto& f : features_) {
    if (f.name.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "empty feature name");
    }
    if (f.name.find_first_of("\t\n+,= ") != std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig,
                  "feature name contains a reserved character: " + f.name);
    }
    if (IsReservedName(f.name)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "reserved name used as contextual feature: " + f.name);
    }
    if (!seen.insert(f.name).second) {
      throw Error(ErrorCode::kInvalidConfig, "duplicate feature: " + f.name);
    }
    if (f.cardinality < 1 ||
        (f.kind == FeatureKind::kCategorical && f.cardinality < 2)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "bad cardinality for feature " + f.name);
    }
  }
}

std::optional<size_t> FeatureSchema::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

size_t FeatureSchema::RequireIndex(std::string_view name) const {
  const auto index = IndexOf(name);
  if (!index) {
    throw Error(ErrorCode::kUnknownFeature, std::string(name));
  }
  return *index;
}

std::vector<std::string> FeatureSchema::Names() const {
  std::vector<std::string> names;
  names.reserve(features_.size());
  for (const auto& f : features_) names.push_back(f.name);
  return names;
}

FeatureSchema ParseSchema(std::istream& in) {
  std::vector<FeatureDescriptor> features;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = Split(line, '\t');
    const auto cardinality =
        fields.size() == 3 ? ParseInt64(fields[2]) : std::nullopt;
    if (!cardinality || (fields[1] != "categorical" && fields[1] != "ordinal")) {
      throw Error(ErrorCode::kMalformedRecord,
                  "schema line " + std::to_string(line_no));
    }
    features.push_back({std::string(fields[0]),
                        fields[1] == "categorical" ? FeatureKind::kCategorical
                                                   : FeatureKind::kOrdinal,
                        static_cast<int>(*cardinality)});
  }
  return FeatureSchema(std::move(features));
}

FeatureSchema ReadSchema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  return ParseSchema(in);
}

void WriteSchema(const FeatureSchema& schema, std::ostream& out) {
  for (const auto& f : schema.features()) {
    out << f.name << '\t' << FeatureKindName(f.kind) << '\t' << f.cardinality
        << '\n';
  }
}

void WriteSchema(const FeatureSchema& schema, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path);
  WriteSchema(schema, out);
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path);
}

}  // namespace ctrkeys
