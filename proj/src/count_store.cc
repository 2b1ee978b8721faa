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
#include "ctrkeys/count_store.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "ctrkeys/errors.h"
#include "ctrkeys/text_util.h"

namespace ctrkeys {

CountTable::CountTable(const FeatureSchema& schema, std::vector<CountingKey> keys)
    : keys_(std::move(keys)) {
  if (keys_.empty()) {
    throw Error(ErrorCode::kMissingKeys, "a count table needs at least one key");
  }
  for (const auto& key : keys_) projectors_.emplace_back(schema, key);
  tables_.resize(keys_.size());
}

size_t CountTable::num_entries() const {
  size_t n = 0;
  for (const auto& t : tables_) n += t.size();
  return n;
}

const CountRecord* CountTable::Find(size_t key_index,
                                    const ValueTuple& tuple) const {
  const auto& t = tables_[key_index];
  const auto it = t.find(tuple);
  return it == t.end() ? nullptr : &it->second;
}

void CountTable::Absorb(const Impression& impression) {
  if (window_end_ != kNoTimestamp && impression.timestamp < window_end_) {
    throw Error(ErrorCode::kOutOfOrderUpdate,
                "impression at " + std::to_string(impression.timestamp) +
                    " precedes window end " + std::to_string(window_end_));
  }
  for (size_t k = 0; k < keys_.size(); ++k) {
    CountRecord& r = tables_[k][projectors_[k](impression)];
    ++r.impressions;
    r.engagements += impression.label;
  }
  if (window_start_ == kNoTimestamp) window_start_ = impression.timestamp;
  window_end_ = impression.timestamp;
}

void CountTable::Set(size_t key_index, ValueTuple tuple, CountRecord record) {
  if (key_index >= keys_.size() || tuple.size() != projectors_[key_index].arity()) {
    throw Error(ErrorCode::kMalformedRecord, "tuple does not fit key");
  }
  if (record.impressions < 0 || record.engagements < 0 ||
      record.engagements > record.impressions) {
    throw Error(ErrorCode::kMalformedRecord,
                "counts need 0 <= engagements <= impressions");
  }
  tables_[key_index][std::move(tuple)] = record;
}

void CountTable::SetWindow(int64_t start, int64_t end) {
  window_start_ = start;
  window_end_ = end;
}

bool CountTable::operator==(const CountTable& other) const {
  return keys_ == other.keys_ && tables_ == other.tables_ &&
         window_start_ == other.window_start_ &&
         window_end_ == other.window_end_;
}

CountTable BuildCounts(const Dataset& history,
                       const std::vector<CountingKey>& keys) {
  CountTable table(history.schema(), keys);
  for (const auto& imp : history.impressions()) table.Absorb(imp);
  return table;
}

void StreamUpdate(CountTable& table, const Impression& impression) {
  table.Absorb(impression);
}

JoinedCounts JoinCounts(const Impression& impression, const CountTable& table) {
  JoinedCounts out;
  out.values.assign(3 * table.num_keys(), 0.0);
  out.present.assign(3 * table.num_keys(), 0);
  for (size_t k = 0; k < table.num_keys(); ++k) {
    const CountRecord* r = table.Find(k, table.Project(k, impression));
    if (r == nullptr || !r->present()) continue;
    out.values[3 * k] = static_cast<double>(r->impressions);
    out.values[3 * k + 1] = static_cast<double>(r->engagements);
    out.values[3 * k + 2] = r->ctr();
    out.present[3 * k] = out.present[3 * k + 1] = out.present[3 * k + 2] = 1;
  }
  return out;
}

std::vector<std::pair<int64_t, int64_t>> CountTotals(const CountTable& table) {
  std::vector<std::pair<int64_t, int64_t>> totals(table.num_keys());
  for (size_t k = 0; k < table.num_keys(); ++k) {
    for (const auto& [tuple, r] : table.records(k)) {
      totals[k].first += r.impressions;
      totals[k].second += r.engagements;
    }
  }
  return totals;
}

void WriteCountTable(const CountTable& table, std::ostream& out) {
  for (size_t k = 0; k < table.num_keys(); ++k) {
    out << "#key\t" << k << '\t' << table.keys()[k].ToString() << '\n';
  }
  out << "#window\t" << table.window_start() << '\t' << table.window_end()
      << '\n';
  for (size_t k = 0; k < table.num_keys(); ++k) {
    std::vector<const CountTable::Records::value_type*> rows;
    rows.reserve(table.records(k).size());
    for (const auto& entry : table.records(k)) rows.push_back(&entry);
    std::sort(rows.begin(), rows.end(),
              [](const auto* a, const auto* b) { return a->first < b->first; });
    for (const auto* entry : rows) {
      out << k << '\t';
      for (size_t i = 0; i < entry->first.size(); ++i) {
        if (i > 0) out << ',';
        out << entry->first[i];
      }
      out << '\t' << entry->second.impressions << '\t'
          << entry->second.engagements << '\n';
    }
  }
}

CountTable ParseCountTable(std::istream& in, const FeatureSchema& schema) {
  std::vector<CountingKey> keys;
  std::vector<std::string> pending;
  std::string line;
  int line_no = 0;
  int64_t start = CountTable::kNoTimestamp;
  int64_t end = CountTable::kNoTimestamp;
  std::optional<CountTable> table;
  const auto malformed = [&](const std::string& why) {
    return Error(ErrorCode::kMalformedRecord,
                 "count table line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = Split(line, '\t');
    if (line[0] == '#') {
      if (table) throw malformed("header after records");
      if (f[0] == "#key" && f.size() == 3) {
        const auto index = ParseInt64(f[1]);
        if (!index || *index != static_cast<int64_t>(keys.size())) {
          throw malformed("key indices must be 0, 1, ...");
        }
        keys.push_back(CountingKey::Parse(std::string(f[2])));
      } else if (f[0] == "#window" && f.size() == 3) {
        const auto s = ParseInt64(f[1]);
        const auto e = ParseInt64(f[2]);
        if (!s || !e) throw malformed("bad window");
        start = *s;
        end = *e;
      } else {
        throw malformed("unknown header");
      }
      continue;
    }
    if (!table) table.emplace(schema, keys);
    if (f.size() != 4) throw malformed("expected 4 fields");
    const auto k = ParseInt64(f[0]);
    const auto imps = ParseInt64(f[2]);
    const auto engs = ParseInt64(f[3]);
    if (!k || !imps || !engs || *k < 0 ||
        *k >= static_cast<int64_t>(keys.size())) {
      throw malformed("bad record");
    }
    ValueTuple tuple;
    for (const auto part : Split(f[1], ',')) {
      const auto v = ParseInt64(part);
      if (!v) throw malformed("bad tuple");
      tuple.push_back(*v);
    }
    try {
      table->Set(static_cast<size_t>(*k), std::move(tuple), {*imps, *engs});
    } catch (const Error& e) {
      throw malformed(e.what());
    }
  }
  if (!table) table.emplace(schema, keys);
  table->SetWindow(start, end);
  return std::move(*table);
}

void WriteCountTable(const CountTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path);
  WriteCountTable(table, out);
  out.flush();
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path);
}

CountTable ReadCountTable(const std::string& path, const FeatureSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  return ParseCountTable(in, schema);
}

}  // namespace ctrkeys
