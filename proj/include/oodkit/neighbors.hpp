// Copyright 2026 The oodkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OODKIT__NEIGHBORS_HPP_
#define OODKIT__NEIGHBORS_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oodkit/error.hpp"
#include "oodkit/linalg.hpp"

namespace oodkit
{

/// k nearest training rows of one query, nearest first.
struct NeighborList
{
  std::vector<std::size_t> indices;
  std::vector<double> sq_distances;

  std::size_t size() const { return indices.size(); }
};

/// Exact brute-force k-nearest-neighbor search.
///
/// Ties in distance are broken by the lower training index. When
/// `exclude_index` is set the query is a training row: that row is skipped
/// if it sits at distance exactly 0, and k may be at most rows - 1.
inline NeighborList knn_query(
  const Matrix & train, std::span<const double> query, std::size_t k,
  std::optional<std::size_t> exclude_index = std::nullopt)
{
  if (query.size() != train.cols()) {
    throw DimensionError(
      "knn_query: query has " + std::to_string(query.size()) + " features, training set has " +
      std::to_string(train.cols()));
  }
  const std::size_t limit = exclude_index ? train.rows() - 1 : train.rows();
  if (k < 1 || k > limit) {
    throw ParameterError(
      "k=" + std::to_string(k) + " must lie in [1, " + std::to_string(limit) + "]");
  }

  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(train.rows());
  for (std::size_t i = 0; i < train.rows(); ++i) {
    const double d = sq_distance(query, train.row(i));
    if (exclude_index && i == *exclude_index && d == 0.0) {
      continue;
    }
    cand.emplace_back(d, i);
  }
  const std::size_t take = std::min(k, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(take), cand.end());

  NeighborList out;
  out.indices.reserve(take);
  out.sq_distances.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.sq_distances.push_back(cand[i].first);
    out.indices.push_back(cand[i].second);
  }
  return out;
}

/// Neighbor lists of every training row against its own set, self excluded.
inline std::vector<NeighborList> knn_self(const Matrix & train, std::size_t k)
{
  std::vector<NeighborList> out;
  out.reserve(train.rows());
  for (std::size_t i = 0; i < train.rows(); ++i) {
    out.push_back(knn_query(train, train.row(i), k, i));
  }
  return out;
}

}  // namespace oodkit

#endif  // OODKIT__NEIGHBORS_HPP_
