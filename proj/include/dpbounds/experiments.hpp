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

#ifndef DPBOUNDS_EXPERIMENTS_HPP_
#define DPBOUNDS_EXPERIMENTS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "dpbounds/bounds.hpp"
#include "dpbounds/dataset.hpp"
#include "dpbounds/divergence.hpp"
#include "dpbounds/oracle.hpp"
#include "dpbounds/rng.hpp"

namespace dpbounds {

// Mean and across-trial sample standard deviation of per-trial values.
struct McSummary {
  double mean = 0.0;
  double std = 0.0;
  std::size_t n_trials = 0;
  std::vector<double> values;  // trial order
};

// Aggregates from the sorted values so the result does not depend on the
// order in which trials finished.
inline McSummary summarize(std::vector<double> values) {
  McSummary s;
  s.n_trials = values.size();
  s.values = values;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

inline double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty list");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

struct SweepRow {
  double separation = 0.0;
  double ber_true = 0.0;
  double dp_upper_analytic = 0.0;
  double dp_lower_analytic = 0.0;
  double dp_upper_empirical_mean = 0.0;
  double dp_lower_empirical_mean = 0.0;
  double bc_upper = 0.0;
  double bc_lower = 0.0;
  std::size_t n_per_class = 0;
  std::size_t n_trials = 0;
};

struct SweepResult {
  std::vector<double> separations;
  std::vector<SweepRow> rows;
};

// Two unit-covariance bivariate Gaussians, equal priors, means placed
// symmetrically on the diagonal at Euclidean distance `separation`.
inline GaussianModel sweep_model(double separation) {
  const double h = 0.5 * separation / std::sqrt(2.0);
  Vector m0(2);
  Vector m1(2);
  m0 << -h, -h;
  m1 << h, h;
  return isotropic_model(m0, m1, 0.5);
}

// Separations run uniformly over [0, 5]. Analytic columns come from the
// oracle and the Gaussian closed form; empirical columns average the
// FR-based bounds over n_trials independent samples per step.
inline SweepResult run_sweep(std::size_t n_steps, std::size_t n_per_class, std::size_t n_trials,
                             std::uint64_t seed, const OracleOptions& oracle_opt = {}) {
  if (n_steps < 2) throw InvalidArgument("run_sweep: n_steps must be >= 2");
  if (n_per_class < 1 || n_trials < 1) {
    throw InvalidArgument("run_sweep: n_per_class and n_trials must be >= 1");
  }
  SweepResult out;
  for (std::size_t step = 0; step < n_steps; ++step) {
    const double sep = 5.0 * static_cast<double>(step) / static_cast<double>(n_steps - 1);
    const auto model = sweep_model(sep);
    const auto oracle = all_integrals(gaussian_pair(model), 0.5, oracle_opt);
    const auto analytic = bounds_from_dp_tilde(oracle.dp_tilde.value, BoundSource::kDpAnalytic);
    const auto bc = bc_bound_gaussian(model);

    SweepRow row;
    row.separation = sep;
    row.ber_true = oracle.bayes_error.value;
    row.dp_upper_analytic = analytic.upper;
    row.dp_lower_analytic = analytic.lower;
    row.bc_upper = bc.upper;
    row.bc_lower = bc.lower;
    row.n_per_class = n_per_class;
    row.n_trials = n_trials;
    const std::uint64_t step_seed = derive_seed(seed, step);
    for (std::size_t t = 0; t < n_trials; ++t) {
      const auto sample = sample_gaussian(model, n_per_class, n_per_class, derive_seed(step_seed, t));
      const auto b = ber_bounds_from_estimate(estimate_from_labeled(sample));
      row.dp_upper_empirical_mean += b.upper;
      row.dp_lower_empirical_mean += b.lower;
    }
    row.dp_upper_empirical_mean /= static_cast<double>(n_trials);
    row.dp_lower_empirical_mean /= static_cast<double>(n_trials);
    out.separations.push_back(sep);
    out.rows.push_back(row);
  }
  return out;
}

// Per trial: fresh samples of both classes, FR estimate, and the upper
// bound 1/2 - D~/2 on the Bayes error. Sampling reads the D2 sigma row as
// standard deviations by default (see SigmaReading).
inline McSummary run_fukunaga(FukunagaDataset dataset, std::size_t n_per_class,
                              std::size_t n_trials, std::uint64_t seed,
                              SigmaReading reading = SigmaReading::kStdDev) {
  if (n_per_class < 1 || n_trials < 1) {
    throw InvalidArgument("run_fukunaga: n_per_class and n_trials must be >= 1");
  }
  const auto model = fukunaga_model(dataset, reading);
  std::vector<double> values;
  values.reserve(n_trials);
  for (std::size_t t = 0; t < n_trials; ++t) {
    const auto sample = sample_gaussian(model, n_per_class, n_per_class, derive_seed(seed, t));
    values.push_back(ber_bounds_from_estimate(estimate_from_labeled(sample)).upper);
  }
  return summarize(std::move(values));
}

struct ConsistencyResult {
  double oracle_dp_tilde = 0.0;
  std::vector<std::size_t> sizes;
  std::vector<McSummary> summaries;  // |dp_tilde - oracle| per size
};

// `sizes` are points per class at equal priors; in general the 2 * size
// pooled points are split round(2 * size * p) / rest.
inline ConsistencyResult run_consistency(const GaussianModel& model,
                                         const std::vector<std::size_t>& sizes,
                                         std::size_t n_trials, std::uint64_t seed,
                                         const OracleOptions& oracle_opt = {}) {
  model.validate();
  if (sizes.empty() || n_trials < 1) throw InvalidArgument("run_consistency: empty sizes or trials");
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw InvalidArgument("run_consistency: sizes must be ascending");
  }
  ConsistencyResult out;
  out.oracle_dp_tilde = dp_tilde_integral(gaussian_pair(model), oracle_opt).value;
  out.sizes = sizes;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const std::size_t total = 2 * sizes[s];
    std::size_t n0 = static_cast<std::size_t>(std::llround(static_cast<double>(total) * model.prior_p));
    n0 = std::clamp<std::size_t>(n0, 1, total - 1);
    std::vector<double> errors;
    for (std::size_t t = 0; t < n_trials; ++t) {
      const auto sample = sample_gaussian(model, n0, total - n0, derive_seed(derive_seed(seed, s), t));
      errors.push_back(std::abs(estimate_from_labeled(sample).dp_tilde - out.oracle_dp_tilde));
    }
    out.summaries.push_back(summarize(std::move(errors)));
  }
  return out;
}

}  // namespace dpbounds

#endif  // DPBOUNDS_EXPERIMENTS_HPP_
