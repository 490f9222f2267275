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

#include "fracbayes/model_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace fracbayes {

ModelIndex::ModelIndex(std::vector<int> indices, int p) : indices_(std::move(indices)), p_(p) {
  if (p_ < 0) throw std::invalid_argument("ModelIndex: p must be nonnegative");
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  for (int idx : indices_) {
    if (idx < 1 || idx > p_) {
      throw std::invalid_argument("ModelIndex: covariate " + std::to_string(idx) +
                                  " outside {1.." + std::to_string(p_) + "}");
    }
  }
}

bool ModelIndex::contains(int covariate) const {
  return std::binary_search(indices_.begin(), indices_.end(), covariate);
}

bool ModelIndex::is_superset_of(const ModelIndex& other) const {
  return std::includes(indices_.begin(), indices_.end(), other.indices_.begin(),
                       other.indices_.end());
}

ModelIndex ModelIndex::with(int covariate) const {
  std::vector<int> v = indices_;
  v.push_back(covariate);
  return ModelIndex(std::move(v), p_);
}

ModelIndex ModelIndex::without(int covariate) const {
  std::vector<int> v;
  v.reserve(indices_.size());
  for (int idx : indices_)
    if (idx != covariate) v.push_back(idx);
  return ModelIndex(std::move(v), p_);
}

ModelIndex ModelIndex::swapped(int out, int in) const { return without(out).with(in); }

std::string ModelIndex::to_string() const {
  if (indices_.empty()) return "none";
  std::string s;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) s += '+';
    s += std::to_string(indices_[i]);
  }
  return s;
}

std::vector<ModelIndex> enumerate_subsets(int p, int d0) {
  if (p < 1) throw std::invalid_argument("enumerate_subsets: p must be positive");
  if (d0 < 0) throw std::invalid_argument("enumerate_subsets: d0 must be nonnegative");
  std::vector<ModelIndex> out;
  out.push_back(ModelIndex::empty(p));
  // subsets of each size k in lexicographic order
  for (int k = 1; k <= std::min(p, d0); ++k) {
    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i + 1;
    for (;;) {
      out.emplace_back(comb, p);
      int i = k - 1;
      while (i >= 0 && comb[i] == p - (k - 1 - i)) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace fracbayes
