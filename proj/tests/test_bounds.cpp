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
#include <gtest/gtest.h>

#include "dpbounds/bounds.hpp"
#include "support.hpp"

namespace dpbounds {
namespace {

DivergenceEstimate with_dp_tilde(double dt) {
  DivergenceEstimate e;
  e.dp_tilde = dt;
  e.dp_tilde_raw = dt;
  return e;
}

TEST(BerBoundsFromEstimate, Endpoints) {
  auto b = ber_bounds_from_estimate(with_dp_tilde(0.0));
  EXPECT_DOUBLE_EQ(b.lower, 0.5);
  EXPECT_DOUBLE_EQ(b.upper, 0.5);
  EXPECT_EQ(b.source, BoundSource::kDpEmpirical);
  b = ber_bounds_from_estimate(with_dp_tilde(1.0));
  EXPECT_DOUBLE_EQ(b.lower, 0.0);
  EXPECT_DOUBLE_EQ(b.upper, 0.0);
  b = ber_bounds_from_estimate(with_dp_tilde(0.64));
  EXPECT_NEAR(b.lower, 0.1, 1e-15);
  EXPECT_NEAR(b.upper, 0.18, 1e-15);
}

TEST(BerBoundsFromEstimate, StrictlyDecreasing) {
  double prev_lower = 1.0;
  double prev_upper = 1.0;
  for (int k = 0; k <= 1000; ++k) {
    const auto b = bounds_from_dp_tilde(k / 1000.0, BoundSource::kDpAnalytic);
    EXPECT_LT(b.lower, prev_lower);
    EXPECT_LT(b.upper, prev_upper);
    EXPECT_LE(0.0, b.lower);
    EXPECT_LE(b.lower, b.upper);
    EXPECT_LE(b.upper, 0.5);
    prev_lower = b.lower;
    prev_upper = b.upper;
  }
}

TEST(ClosedForms, BenchmarkValues) {
  const auto d1 = fukunaga_model(FukunagaDataset::kD1);
  const auto d2 = fukunaga_model(FukunagaDataset::kD2);
  EXPECT_NEAR(100.0 * bc_bound_gaussian(d1).upper, 22.04, 0.01);
  EXPECT_NEAR(100.0 * bc_bound_gaussian(d2).upper, 4.74, 0.01);
  EXPECT_NEAR(100.0 * mahalanobis_bound_gaussian(d1).upper, 18.95, 0.01);
  EXPECT_NEAR(100.0 * mahalanobis_bound_gaussian(d2).upper, 14.13, 0.01);
  EXPECT_EQ(bc_bound_gaussian(d1).source, BoundSource::kBhattacharyya);
  EXPECT_DOUBLE_EQ(mahalanobis_bound_gaussian(d1).lower, 0.0);
}

TEST(ClosedForms, IdenticalClasses) {
  const auto m = isotropic_model(Vector::Zero(3), Vector::Zero(3));
  EXPECT_NEAR(bhattacharyya_coefficient(m), 1.0, 1e-15);
  EXPECT_NEAR(bc_bound_gaussian(m).upper, 0.5, 1e-15);
  EXPECT_NEAR(bc_bound_gaussian(m).lower, 0.5, 1e-15);
  EXPECT_NEAR(mahalanobis_bound_gaussian(m).upper, 0.5, 1e-15);
  for (double alpha : {0.1, 0.5, 0.9}) EXPECT_NEAR(chernoff_upper_gaussian(m, alpha), 0.5, 1e-15);
  auto skew = m;
  skew.prior_p = 0.2;
  EXPECT_NEAR(chernoff_upper_gaussian(skew, 0.3), std::pow(0.2, 0.3) * std::pow(0.8, 0.7), 1e-15);
}

TEST(ClosedForms, ChernoffHalfIsHalfBc) {
  Rng rng = make_rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const auto m = testing::random_model(rng, 1 + rep % 4, 0.5);
    EXPECT_NEAR(2.0 * chernoff_upper_gaussian(m, 0.5), bhattacharyya_coefficient(m), 1e-13);
  }
  const auto d1 = fukunaga_model(FukunagaDataset::kD1);
  EXPECT_NEAR(2.0 * chernoff_upper_gaussian(d1, 0.5), 0.4408, 1e-4);
}

TEST(ClosedForms, Errors) {
  EXPECT_THROW(chernoff_upper_gaussian(fukunaga_model(FukunagaDataset::kD1), 1.0), InvalidArgument);
  auto m = isotropic_model(Vector::Zero(2), Vector::Ones(2));
  m.cov0 = Matrix::Zero(2, 2);
  EXPECT_THROW(bc_bound_gaussian(m), NumericalError);
}

TEST(DaBound, IdenticalDomainsSeparableClasses) {
  const auto r = da_bound(with_dp_tilde(1.0), with_dp_tilde(0.0));
  EXPECT_DOUBLE_EQ(r.total, 0.0);
  EXPECT_FALSE(r.vacuous);
}

TEST(DaBound, FullyShiftedIsVacuous) {
  const auto r = da_bound(with_dp_tilde(0.3), with_dp_tilde(1.0));
  EXPECT_DOUBLE_EQ(r.shift_term, 2.0);
  EXPECT_GE(r.total, 2.0);
  EXPECT_TRUE(r.vacuous);
}

TEST(DaBound, DecompositionAndHooks) {
  Rng rng = make_rng(4);
  std::uniform_real_distribution<double> u;
  for (int rep = 0; rep < 100; ++rep) {
    const auto r = da_bound(with_dp_tilde(u(rng)), with_dp_tilde(u(rng)), 0.1 * u(rng));
    EXPECT_EQ(r.total, r.source_term + r.shift_term + r.label_drift_term);
    EXPECT_GE(r.shift_term, 0.0);
    EXPECT_LE(r.shift_term, 2.0);
  }
  const auto r = da_bound(with_dp_tilde(0.5), with_dp_tilde(0.25), 0.0, 0.07);
  EXPECT_DOUBLE_EQ(r.source_term, 0.07);
  EXPECT_DOUBLE_EQ(r.shift_term, 1.0);
  EXPECT_THROW(da_bound(with_dp_tilde(0.5), with_dp_tilde(0.5), -0.1), InvalidArgument);
  EXPECT_THROW(da_bound(with_dp_tilde(0.5), with_dp_tilde(0.5), 0.0, 1.5), InvalidArgument);
}

TEST(DaBound, HoldsOnCovariateShiftScenario) {
  const auto s = testing::covariate_shift_scenario(1);
  EXPECT_GE(s.report.total, s.target_error);
}

}  // namespace
}  // namespace dpbounds
