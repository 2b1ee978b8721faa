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
// Forest text format. Fields are tab separated:
//
//   forest	v1
//   base_score	<real>
//   learning_rate	<real>
//   features	<n>	<name_1>	...	<name_n>
//   trees	<T>
//   tree	<t>	<node count>          (T blocks, t = 0..T-1)
//   <id>	split	<feature>	<threshold>	<left id>	<right id>
//   <id>	leaf	-	<score>	-	-
//
// Node ids are local to their tree and listed in increasing order; node 0 is
// the root. Reals use the shortest round-trip decimal form.

#include <istream>
#include <ostream>
#include <string>

#include "ctrkeys/errors.h"
#include "ctrkeys/text_util.h"
#include "ctrkeys/tree.h"

namespace ctrkeys {
namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::vector<std::string> Next(size_t expected_fields, const char* tag) {
    if (!std::getline(in_, line_)) Fail(std::string("missing ") + tag);
    ++line_no_;
    std::vector<std::string> out;
    for (const auto f : Split(line_, '\t')) out.emplace_back(f);
    if ((expected_fields && out.size() != expected_fields) ||
        (tag[0] != '#' && out[0] != tag)) {
      Fail(std::string("expected ") + tag);
    }
    return out;
  }

  [[noreturn]] void Fail(const std::string& why) const {
    throw Error(ErrorCode::kMalformedRecord,
                "forest line " + std::to_string(line_no_) + ": " + why);
  }

  int64_t Int(const std::string& s) const {
    const auto v = ParseInt64(s);
    if (!v) Fail("bad integer '" + s + "'");
    return *v;
  }

  double Real(const std::string& s) const {
    const auto v = ParseDouble(s);
    if (!v) Fail("bad number '" + s + "'");
    return *v;
  }

 private:
  std::istream& in_;
  std::string line_;
  int line_no_ = 0;
};

}  // namespace

void WriteForest(const Forest& forest, std::ostream& out) {
  out << "forest\tv1\n";
  out << "base_score\t" << FormatDouble(forest.base_score) << '\n';
  out << "learning_rate\t" << FormatDouble(forest.learning_rate) << '\n';
  out << "features\t" << forest.feature_names.size();
  for (const auto& name : forest.feature_names) out << '\t' << name;
  out << '\n';
  out << "trees\t" << forest.trees.size() << '\n';
  for (size_t t = 0; t < forest.trees.size(); ++t) {
    const Tree& tree = forest.trees[t];
    out << "tree\t" << t << '\t' << tree.nodes.size() << '\n';
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
      const TreeNode& n = tree.nodes[i];
      if (n.is_leaf()) {
        out << i << "\tleaf\t-\t" << FormatDouble(n.score) << "\t-\t-\n";
      } else {
        out << i << "\tsplit\t" << n.feature << '\t' << n.threshold << '\t'
            << n.left << '\t' << n.right << '\n';
      }
    }
  }
}

Forest ParseForest(std::istream& in) {
  LineReader reader(in);
  Forest forest;
  if (reader.Next(2, "forest")[1] != "v1") reader.Fail("unsupported version");
  forest.base_score = reader.Real(reader.Next(2, "base_score")[1]);
  forest.learning_rate = reader.Real(reader.Next(2, "learning_rate")[1]);
  const auto features = reader.Next(0, "features");
  if (features.size() < 2 ||
      reader.Int(features[1]) != static_cast<int64_t>(features.size() - 2)) {
    reader.Fail("feature count does not match names");
  }
  forest.feature_names.assign(features.begin() + 2, features.end());
  const int64_t n_trees = reader.Int(reader.Next(2, "trees")[1]);
  const auto n_features = static_cast<int64_t>(forest.feature_names.size());
  for (int64_t t = 0; t < n_trees; ++t) {
    const auto header = reader.Next(3, "tree");
    if (reader.Int(header[1]) != t) reader.Fail("trees out of order");
    const int64_t n_nodes = reader.Int(header[2]);
    if (n_nodes < 1) reader.Fail("empty tree");
    Tree tree;
    tree.nodes.resize(n_nodes);
    for (int64_t i = 0; i < n_nodes; ++i) {
      const auto f = reader.Next(6, "#node");
      if (reader.Int(f[0]) != i) reader.Fail("node ids out of order");
      TreeNode& node = tree.nodes[i];
      if (f[1] == "leaf") {
        node.score = reader.Real(f[3]);
      } else if (f[1] == "split") {
        node.feature = static_cast<int>(reader.Int(f[2]));
        node.threshold = static_cast<int32_t>(reader.Int(f[3]));
        node.left = static_cast<int>(reader.Int(f[4]));
        node.right = static_cast<int>(reader.Int(f[5]));
        if (node.feature < 0 || node.feature >= n_features ||
            node.left <= i || node.right <= i || node.left >= n_nodes ||
            node.right >= n_nodes) {
          reader.Fail("bad split node");
        }
      } else {
        reader.Fail("unknown node kind '" + f[1] + "'");
      }
    }
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

}  // namespace ctrkeys
