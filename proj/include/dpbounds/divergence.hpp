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

#ifndef DPBOUNDS_DIVERGENCE_HPP_
#define DPBOUNDS_DIVERGENCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "dpbounds/dataset.hpp"
#include "dpbounds/emst.hpp"
#include "dpbounds/error.hpp"

namespace dpbounds {

// Friedman-Rafsky cross-count and the plug-in divergence estimates built
// from it. Sample f is always the first block of the pooled MST.
struct DivergenceEstimate {
  std::size_t cross_count = 0;
  std::size_t n_f = 0;
  std::size_t n_g = 0;
  double dp = 0.0;            // clamped to [0, 1]
  double dp_tilde_raw = 0.0;  // 1 - 2C/(n_f + n_g), may be negative
  double dp_tilde = 0.0;      // clamped to [0, 1]
  double affinity = 1.0;      // 1 - dp
  double p_hat = 0.5;         // n_f / (n_f + n_g)

  // True when the priors are far enough from 1/2 that D~_{1/2} readings
  // (domain-shift terms) should be interpreted with care.
  bool imbalanced() const { return std::abs(p_hat - 0.5) > 0.1; }
};

// Number of MST edges joining a row < n_f to a row >= n_f.
inline std::size_t count_cross_edges(const MstResult& mst, std::size_t n_f) {
  return static_cast<std::size_t>(std::count_if(
      mst.edges.begin(), mst.edges.end(),
      [n_f](const MstEdge& e) { return (e.i < n_f) != (e.j < n_f); }));
}

inline std::size_t fr_statistic(const PointMatrix& sample_f, const PointMatrix& sample_g) {
  if (sample_f.rows() < 1 || sample_g.rows() < 1) {
    throw InvalidArgument("fr_statistic: both samples must be non-empty");
  }
  if (sample_f.cols() != sample_g.cols()) {
    throw InvalidArgument("fr_statistic: dimension mismatch (" +
                          std::to_string(sample_f.cols()) + " vs " +
                          std::to_string(sample_g.cols()) + ")");
  }
  const auto mst = build_mst(vstack(sample_f, sample_g));
  return count_cross_edges(mst, static_cast<std::size_t>(sample_f.rows()));
}

inline DivergenceEstimate estimate_from_count(std::size_t cross_count, std::size_t n_f,
                                              std::size_t n_g) {
  if (n_f < 1 || n_g < 1) throw InvalidArgument("estimate: empty sample");
  DivergenceEstimate e;
  e.cross_count = cross_count;
  e.n_f = n_f;
  e.n_g = n_g;
  const double c = static_cast<double>(cross_count);
  const double nf = static_cast<double>(n_f);
  const double ng = static_cast<double>(n_g);
  e.p_hat = nf / (nf + ng);
  e.dp = std::clamp(1.0 - c * (nf + ng) / (2.0 * nf * ng), 0.0, 1.0);
  e.dp_tilde_raw = 1.0 - 2.0 * c / (nf + ng);
  e.dp_tilde = std::clamp(e.dp_tilde_raw, 0.0, 1.0);
  e.affinity = 1.0 - e.dp;
  return e;
}

inline DivergenceEstimate estimate(const PointMatrix& sample_f, const PointMatrix& sample_g) {
  const auto c = fr_statistic(sample_f, sample_g);
  return estimate_from_count(c, static_cast<std::size_t>(sample_f.rows()),
                             static_cast<std::size_t>(sample_g.rows()));
}

// Class 0 plays f, class 1 plays g.
inline DivergenceEstimate estimate_from_labeled(const LabeledSample& sample) {
  for (int label : {0, 1}) {
    if (sample.count(label) == 0) {
      throw InvalidArgument("sample has no rows with label " + std::to_string(label) +
                            "; two classes are required");
    }
  }
  return estimate(sample.rows_with_label(0), sample.rows_with_label(1));
}

}  // namespace dpbounds

#endif  // DPBOUNDS_DIVERGENCE_HPP_
