// Copyright 2026 The dpbounds Authors
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

#ifndef DPBOUNDS_EMST_HPP_
#define DPBOUNDS_EMST_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "dpbounds/dataset.hpp"
#include "dpbounds/error.hpp"

namespace dpbounds {

struct MstEdge {
  std::size_t i = 0;  // i < j
  std::size_t j = 0;
  double length = 0.0;

  friend bool operator==(const MstEdge&, const MstEdge&) = default;
};

struct MstResult {
  std::vector<MstEdge> edges;  // n_points - 1 edges sorted by (i, j)
  std::size_t n_points = 0;
};

namespace detail {

inline double squared_distance(const double* a, const double* b, Eigen::Index d) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

inline std::pair<std::size_t, std::size_t> canonical(std::size_t a, std::size_t b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace detail

// Exact Euclidean minimum spanning tree by dense Prim, O(N^2 d) time and
// O(N) extra memory. Candidate edges are ordered by (squared length, i, j),
// a strict total order, so the tree is unique even when lengths tie and
// coincides with Kruskal under the same order.
inline MstResult build_mst(const PointMatrix& points) {
  const auto n = static_cast<std::size_t>(points.rows());
  const auto d = points.cols();
  if (n < 2) throw InvalidArgument("build_mst: need at least 2 points");
  if (d < 1) throw InvalidArgument("build_mst: points have zero dimension");
  if (!detail::all_finite(points)) throw InvalidArgument("build_mst: non-finite coordinate");

  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<double> key(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, kNone);
  // Vertices not yet in the tree; order is irrelevant under the total order.
  std::vector<std::size_t> outside(n - 1);
  for (std::size_t v = 1; v < n; ++v) outside[v - 1] = v;

  // Does edge (u, v) of squared length d2 precede v's current best edge?
  auto precedes = [&](double d2, std::size_t u, std::size_t v) {
    if (d2 != key[v]) return d2 < key[v];
    return parent[v] == kNone || detail::canonical(u, v) < detail::canonical(parent[v], v);
  };

  MstResult result;
  result.n_points = n;
  result.edges.reserve(n - 1);
  const double* base = points.data();
  std::size_t current = 0;
  while (!outside.empty()) {
    const double* cur_row = base + static_cast<Eigen::Index>(current) * d;
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos < outside.size(); ++pos) {
      const std::size_t v = outside[pos];
      const double d2 = detail::squared_distance(cur_row, base + static_cast<Eigen::Index>(v) * d, d);
      if (precedes(d2, current, v)) {
        key[v] = d2;
        parent[v] = current;
      }
      if (pos > 0) {
        const std::size_t b = outside[best_pos];
        if (key[v] < key[b] ||
            (key[v] == key[b] &&
             detail::canonical(parent[v], v) < detail::canonical(parent[b], b))) {
          best_pos = pos;
        }
      }
    }
    const std::size_t next = outside[best_pos];
    outside[best_pos] = outside.back();
    outside.pop_back();
    const auto [i, j] = detail::canonical(parent[next], next);
    result.edges.push_back({i, j, std::sqrt(key[next])});
    current = next;
  }
  std::sort(result.edges.begin(), result.edges.end(), [](const MstEdge& a, const MstEdge& b) {
    return std::pair{a.i, a.j} < std::pair{b.i, b.j};
  });
  return result;
}

inline double mst_total_length(const MstResult& mst) {
  double total = 0.0;
  for (const auto& e : mst.edges) total += e.length;
  return total;
}

}  // namespace dpbounds

#endif  // DPBOUNDS_EMST_HPP_
