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

#ifndef DPBOUNDS_BOUNDS_HPP_
#define DPBOUNDS_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "dpbounds/dataset.hpp"
#include "dpbounds/divergence.hpp"
#include "dpbounds/error.hpp"

namespace dpbounds {

enum class BoundSource { kDpEmpirical, kDpAnalytic, kBhattacharyya, kMahalanobis };

inline const char* to_string(BoundSource s) {
  switch (s) {
    case BoundSource::kDpEmpirical: return "dp_empirical";
    case BoundSource::kDpAnalytic: return "dp_analytic";
    case BoundSource::kBhattacharyya: return "bhattacharyya";
    case BoundSource::kMahalanobis: return "mahalanobis";
  }
  return "unknown";
}

// Bracket on the Bayes error rate, 0 <= lower <= upper <= 1/2.
struct BerBounds {
  double lower = 0.0;
  double upper = 0.5;
  BoundSource source = BoundSource::kDpEmpirical;
};

struct DaBoundReport {
  double source_term = 0.0;
  double shift_term = 0.0;
  double label_drift_term = 0.0;
  double total = 0.0;  // not clamped
  bool vacuous = false;
};

namespace detail {

inline BerBounds make_bounds(double lower, double upper, BoundSource source) {
  lower = std::clamp(lower, 0.0, 0.5);
  upper = std::clamp(upper, 0.0, 0.5);
  return {std::min(lower, upper), upper, source};
}

struct Factorized {
  Eigen::LLT<Matrix> llt;
  double log_det = 0.0;
};

inline Factorized factorize(const Matrix& cov, const char* what) {
  Factorized f{Eigen::LLT<Matrix>(cov), 0.0};
  if (f.llt.info() != Eigen::Success) {
    throw NumericalError(std::string(what) + " is singular or not positive definite");
  }
  const auto diag = f.llt.matrixLLT().diagonal();
  for (Eigen::Index k = 0; k < diag.size(); ++k) {
    if (!(diag(k) > 0.0)) throw NumericalError(std::string(what) + " is singular");
    f.log_det += 2.0 * std::log(diag(k));
  }
  return f;
}

}  // namespace detail

// Bounds from the bracket  1/2 - sqrt(D~)/2 <= BER <= 1/2 - D~/2  with the
// clamped empirical D~.
inline BerBounds bounds_from_dp_tilde(double dp_tilde, BoundSource source) {
  dp_tilde = std::clamp(dp_tilde, 0.0, 1.0);
  return detail::make_bounds(0.5 - 0.5 * std::sqrt(dp_tilde), 0.5 - 0.5 * dp_tilde, source);
}

inline BerBounds ber_bounds_from_estimate(const DivergenceEstimate& est) {
  return bounds_from_dp_tilde(est.dp_tilde, BoundSource::kDpEmpirical);
}

// Mahalanobis distance under the average covariance (S0 + S1) / 2.
inline double mahalanobis_sq(const GaussianModel& model) {
  model.validate();
  const Matrix avg = 0.5 * (model.cov0 + model.cov1);
  const auto f = detail::factorize(avg, "average covariance");
  const Vector delta = model.mean1 - model.mean0;
  return delta.dot(f.llt.solve(delta));
}

// Gaussian Bhattacharyya distance with the average covariance.
inline double bhattacharyya_distance(const GaussianModel& model) {
  model.validate();
  const Matrix avg = 0.5 * (model.cov0 + model.cov1);
  const auto f_avg = detail::factorize(avg, "average covariance");
  const auto f0 = detail::factorize(model.cov0, "cov0");
  const auto f1 = detail::factorize(model.cov1, "cov1");
  const Vector delta = model.mean1 - model.mean0;
  return 0.125 * delta.dot(f_avg.llt.solve(delta)) +
         0.5 * (f_avg.log_det - 0.5 * (f0.log_det + f1.log_det));
}

// BC = 2 sqrt(pq) exp(-D_B).
inline double bhattacharyya_coefficient(const GaussianModel& model) {
  return 2.0 * std::sqrt(model.prior_p * model.prior_q()) *
         std::exp(-bhattacharyya_distance(model));
}

inline BerBounds bc_bound_gaussian(const GaussianModel& model) {
  const double bc = std::min(bhattacharyya_coefficient(model), 1.0);
  return detail::make_bounds(0.5 - 0.5 * std::sqrt(1.0 - bc * bc), 0.5 * bc,
                             BoundSource::kBhattacharyya);
}

// Upper bound 2pq / (1 + pq * Delta); the lower side is reported as 0.
inline BerBounds mahalanobis_bound_gaussian(const GaussianModel& model) {
  const double pq = model.prior_p * model.prior_q();
  return detail::make_bounds(0.0, 2.0 * pq / (1.0 + pq * mahalanobis_sq(model)),
                             BoundSource::kMahalanobis);
}

// Closed form of  integral (p f0)^a (q f1)^(1-a) dx  for Gaussian classes.
inline double chernoff_upper_gaussian(const GaussianModel& model, double alpha) {
  model.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("chernoff_upper_gaussian: alpha must lie in (0,1)");
  }
  const Matrix blended = (1.0 - alpha) * model.cov0 + alpha * model.cov1;
  const auto fb = detail::factorize(blended, "blended covariance");
  const auto f0 = detail::factorize(model.cov0, "cov0");
  const auto f1 = detail::factorize(model.cov1, "cov1");
  const Vector delta = model.mean1 - model.mean0;
  const double exponent =
      0.5 * alpha * (1.0 - alpha) * delta.dot(fb.llt.solve(delta)) +
      0.5 * (fb.log_det - (1.0 - alpha) * f0.log_det - alpha * f1.log_det);
  return std::pow(model.prior_p, alpha) * std::pow(model.prior_q(), 1.0 - alpha) *
         std::exp(-exponent);
}

// Target-error bound under covariate shift:
//   eps_T <= eps_S + E|y_S - y_T| + 2 sqrt(D~_{1/2}(f_S, f_T)).
// eps_S defaults to the Bayes upper bound 1/2 - D~/2 of the source classes;
// pass `source_error` to use a measured classifier error instead.
inline DaBoundReport da_bound(const DivergenceEstimate& source_est,
                              const DivergenceEstimate& shift_est, double label_drift = 0.0,
                              std::optional<double> source_error = std::nullopt) {
  if (!(label_drift >= 0.0) || !std::isfinite(label_drift)) {
    throw InvalidArgument("da_bound: label_drift must be a finite value >= 0");
  }
  if (source_error && !(*source_error >= 0.0 && *source_error <= 1.0)) {
    throw InvalidArgument("da_bound: source_error must lie in [0,1]");
  }
  DaBoundReport r;
  r.source_term = source_error ? *source_error : 0.5 - 0.5 * source_est.dp_tilde;
  r.shift_term = 2.0 * std::sqrt(std::clamp(shift_est.dp_tilde, 0.0, 1.0));
  r.label_drift_term = label_drift;
  r.total = r.source_term + r.shift_term + r.label_drift_term;
  r.vacuous = r.total > 0.5;
  return r;
}

}  // namespace dpbounds

#endif  // DPBOUNDS_BOUNDS_HPP_
