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
#ifndef CTRKEYS_SCHEMA_H_
#define CTRKEYS_SCHEMA_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctrkeys {

enum class FeatureKind { kCategorical, kOrdinal };

std::string_view FeatureKindName(FeatureKind kind);

struct FeatureDescriptor {
  std::string name;
  FeatureKind kind = FeatureKind::kCategorical;
  int cardinality = 2;

  bool operator==(const FeatureDescriptor&) const = default;
};

// Names that belong to the impression record itself and can never be used as
// contextual features.
inline constexpr std::string_view kReservedNames[] = {"user_id", "ad_id",
                                                      "timestamp", "label"};

bool IsReservedName(std::string_view name);

// Ordered list of contextual features. Every value of feature j is an integer
// code in [0, cardinality_j); the order of declaration fixes the column order
// of impression records.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  // Throws Error(kInvalidConfig) when an invariant is violated.
  explicit FeatureSchema(std::vector<FeatureDescriptor> features);

  size_t size() const { return features_.size(); }
  bool empty() const { return features_.empty(); }
  const FeatureDescriptor& feature(size_t index) const {
    return features_[index];
  }
  const std::vector<FeatureDescriptor>& features() const { return features_; }

  std::optional<size_t> IndexOf(std::string_view name) const;
  // Throws Error(kUnknownFeature).
  size_t RequireIndex(std::string_view name) const;

  std::vector<std::string> Names() const;

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<FeatureDescriptor> features_;
};

// Schema file: one feature per line, "name<TAB>kind<TAB>cardinality" with kind
// one of "categorical" or "ordinal".
FeatureSchema ParseSchema(std::istream& in);
FeatureSchema ReadSchema(const std::string& path);
void WriteSchema(const FeatureSchema& schema, std::ostream& out);
void WriteSchema(const FeatureSchema& schema, const std::string& path);

}  // namespace ctrkeys

#endif  // CTRKEYS_SCHEMA_H_
