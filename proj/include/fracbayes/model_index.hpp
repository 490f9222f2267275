/*
 * Copyright 2026 The fracbayes authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FRACBAYES_MODEL_INDEX_HPP_
#define FRACBAYES_MODEL_INDEX_HPP_

#include <string>
#include <vector>

namespace fracbayes {

// A model index: a canonical (sorted, duplicate-free) subset of covariate
// indices in {1..p}. Canonical order fixes tie-breaking and hashing.
class ModelIndex {
 public:
  ModelIndex() = default;
  explicit ModelIndex(std::vector<int> indices, int p);

  static ModelIndex empty(int p) { return ModelIndex({}, p); }

  const std::vector<int>& indices() const { return indices_; }
  int p() const { return p_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool contains(int covariate) const;
  bool is_superset_of(const ModelIndex& other) const;

  ModelIndex with(int covariate) const;
  ModelIndex without(int covariate) const;
  ModelIndex swapped(int out, int in) const;

  // Lexicographic order on the canonical index sequence; the empty set is
  // the smallest element.
  bool operator<(const ModelIndex& other) const { return indices_ < other.indices_; }
  bool operator==(const ModelIndex& other) const { return indices_ == other.indices_; }

  // e.g. "1+4+6"; the empty subset prints as "none".
  std::string to_string() const;

 private:
  std::vector<int> indices_;
  int p_ = 0;
};

// All subsets of {1..p} with size at most d0, in lexicographic-by-size order.
std::vector<ModelIndex> enumerate_subsets(int p, int d0);

}  // namespace fracbayes

#endif  // FRACBAYES_MODEL_INDEX_HPP_
