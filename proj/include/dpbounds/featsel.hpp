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

#ifndef DPBOUNDS_FEATSEL_HPP_
#define DPBOUNDS_FEATSEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dpbounds/dataset.hpp"
#include "dpbounds/divergence.hpp"
#include "dpbounds/error.hpp"

namespace dpbounds {

// Source classes plus optional unlabeled target rows, all with d columns.
struct SelectionData {
  PointMatrix source0;
  PointMatrix source1;
  std::optional<PointMatrix> target;

  std::size_t dimension() const { return static_cast<std::size_t>(source0.cols()); }

  void validate() const {
    if (source0.rows() < 2 || source1.rows() < 2) {
      throw InvalidArgument("feature selection needs at least 2 rows in each source class");
    }
    if (source0.cols() != source1.cols() || source0.cols() < 1) {
      throw InvalidArgument("feature selection: source classes differ in dimension");
    }
    if (target && (target->cols() != source0.cols() || target->rows() < 1)) {
      throw InvalidArgument("feature selection: target must be non-empty with the source dimension");
    }
  }
};

// z-scores every column with the pooled source statistics; the target gets
// the same transform.
inline SelectionData standardize_features(const SelectionData& data) {
  const auto scaler = fit_standardizer(vstack(data.source0, data.source1));
  SelectionData out{apply_standardizer(data.source0, scaler),
                    apply_standardizer(data.source1, scaler), std::nullopt};
  if (data.target) out.target = apply_standardizer(*data.target, scaler);
  return out;
}

struct SelectionTrace {
  std::vector<std::size_t> selected;
  std::vector<double> criterion_values;
  std::vector<std::map<std::size_t, double>> per_step_candidates;  // only when audited
  double shift_weight = 0.0;
};

// Phi(S) = C(S0, S1) / (N0 + N1)
//        + 2 w sqrt(clamp(1 - 2 C(S0 u S1, T) / (N_S + N_T)))
// on the columns in `features`. w = 0 ignores the target entirely.
inline double criterion_phi(const SelectionData& data, std::span<const std::size_t> features,
                            double shift_weight) {
  if (features.empty()) throw InvalidArgument("criterion_phi: empty feature set");
  if (!(shift_weight >= 0.0) || !std::isfinite(shift_weight)) {
    throw InvalidArgument("criterion_phi: shift weight must be finite and >= 0");
  }
  if (shift_weight > 0.0 && !data.target) {
    throw InvalidArgument("criterion_phi: a target sample is required when shift weight > 0");
  }
  const PointMatrix s0 = select_columns(data.source0, features);
  const PointMatrix s1 = select_columns(data.source1, features);
  const double n_source = static_cast<double>(s0.rows() + s1.rows());
  double phi = static_cast<double>(fr_statistic(s0, s1)) / n_source;
  if (shift_weight > 0.0) {
    const PointMatrix t = select_columns(*data.target, features);
    const double cross = static_cast<double>(fr_statistic(vstack(s0, s1), t));
    const double shift = 1.0 - 2.0 * cross / (n_source + static_cast<double>(t.rows()));
    phi += 2.0 * shift_weight * std::sqrt(std::clamp(shift, 0.0, 1.0));
  }
  return phi;
}

// Greedy forward selection: each step adds the unselected feature with the
// smallest Phi(selected + {f}); equal Phi goes to the smaller index.
inline SelectionTrace forward_select(const SelectionData& data, std::size_t k,
                                     double shift_weight, bool audit = false) {
  data.validate();
  const std::size_t d = data.dimension();
  if (k < 1 || k > d) {
    throw InvalidArgument("forward_select: k=" + std::to_string(k) + " must lie in [1, " +
                          std::to_string(d) + "]");
  }
  if (shift_weight > 0.0 && !data.target) {
    throw InvalidArgument("forward_select: a target sample is required when shift weight > 0");
  }
  SelectionTrace trace;
  trace.shift_weight = shift_weight;
  std::vector<bool> used(d, false);
  std::vector<std::size_t> candidate_set;
  for (std::size_t step = 0; step < k; ++step) {
    std::optional<std::size_t> best;
    double best_phi = 0.0;
    std::map<std::size_t, double> audited;
    for (std::size_t f = 0; f < d; ++f) {
      if (used[f]) continue;
      candidate_set = trace.selected;
      candidate_set.push_back(f);
      const double phi = criterion_phi(data, candidate_set, shift_weight);
      if (audit) audited.emplace(f, phi);
      if (!best || phi < best_phi) {
        best = f;
        best_phi = phi;
      }
    }
    used[*best] = true;
    trace.selected.push_back(*best);
    trace.criterion_values.push_back(best_phi);
    if (audit) trace.per_step_candidates.push_back(std::move(audited));
  }
  return trace;
}

inline std::size_t default_selection_size(std::size_t d) { return std::min<std::size_t>(20, d); }

}  // namespace dpbounds

#endif  // DPBOUNDS_FEATSEL_HPP_
