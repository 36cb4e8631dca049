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

#include <numbers>

#include "dpbounds/bounds.hpp"
#include "dpbounds/oracle.hpp"
#include "support.hpp"

namespace dpbounds {
namespace {

// Frozen from scipy quad on the 1-D reduction (unit Gaussians, equal priors).
constexpr double kDpTildeSep1 = 0.20405426563350038;
constexpr double kDpTildeSep2 = 0.5504004907933273;
// Same pair at separation 1 with p = 0.3.
constexpr double kDpTildeSep1P03 = 0.3144086952449244;
constexpr double kTvSep1P03 = 0.49399124275273076;

DensityPair unit_pair(std::size_t d, double sep, double p = 0.5) {
  Vector m1 = Vector::Zero(static_cast<Eigen::Index>(d));
  m1.setConstant(sep / std::sqrt(static_cast<double>(d)));
  return gaussian_pair(isotropic_model(Vector::Zero(static_cast<Eigen::Index>(d)), m1, p));
}

// exp(-1 / (1 - u^2)) on (-1, 1), moved to `center`; smooth with compact support.
DensityPair bump_pair(double p) {
  const double z = quad::integrate_adaptive<1>(
                       [](double u) { return quad::Values<1>{std::exp(-1.0 / (1.0 - u * u))}; },
                       -1.0, 1.0)
                       .value[0];
  auto bump = [log_z = std::log(z)](double center) {
    return [=](std::span<const double> x) {
      const double u = x[0] - center;
      return std::abs(u) < 1.0 ? -1.0 / (1.0 - u * u) - log_z
                               : -std::numeric_limits<double>::infinity();
    };
  };
  DensityPair pair;
  pair.log_density0 = bump(0.0);
  pair.log_density1 = bump(3.0);
  pair.prior_p = p;
  pair.dimension = 1;
  pair.box = {{-1.0, 4.0}};
  return make_density_pair(std::move(pair));
}

TEST(GaussLegendre, ExactForPolynomials) {
  for (std::size_t n : {1u, 2u, 5u, 12u, 401u}) {
    const auto rule = quad::gauss_legendre(n);
    for (std::size_t k = 0; k < 2 * n && k < 30; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], static_cast<double>(k));
      const double exact = k % 2 ? 0.0 : 2.0 / static_cast<double>(k + 1);
      EXPECT_NEAR(s, exact, 1e-13) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Adaptive, SmoothAndKinked) {
  const auto r = quad::integrate_adaptive<2>(
      [](double x) { return quad::Values<2>{std::exp(-x * x), std::abs(x - 0.3)}; }, -6.0, 6.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value[0], std::sqrt(std::numbers::pi), 1e-12);
  EXPECT_NEAR(r.value[1], 0.5 * (6.3 * 6.3 + 5.7 * 5.7), 1e-9);
  const std::vector<double> kink{0.3};
  const auto split = quad::integrate_adaptive<1>(
      [](double x) { return quad::Values<1>{std::abs(x - 0.3)}; }, -6.0, 6.0, {}, kink);
  EXPECT_NEAR(split.value[0], 0.5 * (6.3 * 6.3 + 5.7 * 5.7), 1e-12);
}

TEST(Adaptive, SignChangesFindsRoots) {
  auto f = [](double x) { return (x - 0.25) * (x + 1.7); };
  const auto roots = quad::sign_changes(f, -3.0, 3.0);
  ASSERT_EQ(roots.size(), 2u);
  EXPECT_NEAR(roots[0], -1.7, 1e-13);
  EXPECT_NEAR(roots[1], 0.25, 1e-13);
}

TEST(Oracle, BayesErrorOneDimensional) {
  EXPECT_NEAR(bayes_error(unit_pair(1, 2.56)).value, testing::q_function(1.28), 1e-10);
  EXPECT_NEAR(bayes_error(unit_pair(1, 2.56)).value, 0.1, 5e-4);
  EXPECT_NEAR(bayes_error(unit_pair(2, 1.0)).value, testing::q_function(0.5), 1e-10);
}

TEST(Oracle, IdenticalDensities) {
  const auto pair = unit_pair(2, 0.0);
  EXPECT_NEAR(bayes_error(pair).value, 0.5, 1e-10);
  EXPECT_NEAR(dp_tilde_integral(pair).value, 0.0, 1e-10);
  EXPECT_NEAR(affinity_integral(pair).value, 1.0, 1e-10);
  EXPECT_NEAR(bc_integral(pair).value, 1.0, 1e-10);
  EXPECT_NEAR(tv_integral(pair).value, 0.0, 1e-10);
  for (double alpha : {0.2, 0.5, 0.7}) EXPECT_NEAR(chernoff_integral(pair, alpha).value, 0.5, 1e-10);
}

TEST(Oracle, DisjointSupports) {
  const auto pair = bump_pair(0.5);
  EXPECT_NEAR(dp_tilde_integral(pair).value, 1.0, 1e-9);
  EXPECT_NEAR(affinity_integral(pair).value, 0.0, 1e-12);
  EXPECT_NEAR(bc_integral(pair).value, 0.0, 1e-12);
  EXPECT_NEAR(tv_integral(pair).value, 1.0, 1e-9);
  EXPECT_NEAR(bayes_error(pair).value, 0.0, 1e-12);
}

TEST(Oracle, FrozenDpTilde) {
  EXPECT_NEAR(dp_tilde_integral(unit_pair(2, 1.0)).value, kDpTildeSep1, 1e-9);
  EXPECT_NEAR(dp_tilde_integral(unit_pair(2, 2.0)).value, kDpTildeSep2, 1e-9);
  EXPECT_NEAR(dp_tilde_integral(unit_pair(1, 1.0, 0.3)).value, kDpTildeSep1P03, 1e-9);
  EXPECT_NEAR(tv_integral(unit_pair(2, 1.0, 0.3)).value, kTvSep1P03, 1e-9);
}

TEST(Oracle, ConvergenceUnderRefinement) {
  Rng rng = make_rng(31);
  const auto pair = gaussian_pair(testing::random_model(rng, 2, 0.4));
  OracleOptions coarse;
  OracleOptions fine;
  fine.quadrature.initial_panels = 2 * coarse.quadrature.initial_panels;
  const auto a = all_integrals(pair, 0.5, coarse);
  const auto b = all_integrals(pair, 0.5, fine);
  EXPECT_NEAR(a.bayes_error.value, b.bayes_error.value, 1e-6);
  EXPECT_NEAR(a.dp_tilde.value, b.dp_tilde.value, 1e-6);
  EXPECT_NEAR(a.tv.value, b.tv.value, 1e-6);
  EXPECT_NEAR(a.bc.value, b.bc.value, 1e-6);
  // Fixed tensor Gauss-Legendre at 401 and 802 nodes per dimension.
  auto kernel = [&](std::span<const double> x) {
    const double l0 = pair.log_density0(x) + std::log(pair.prior_p);
    const double l1 = pair.log_density1(x) + std::log(pair.prior_q());
    const double u = std::exp(l0);
    const double v = std::exp(l1);
    return quad::Values<1>{(u - v) * (u - v) / (u + v)};
  };
  const std::span<const std::pair<double, double>> box(pair.box);
  const double gl401 = quad::integrate_gauss_legendre<1>(kernel, box, 401)[0];
  const double gl802 = quad::integrate_gauss_legendre<1>(kernel, box, 802)[0];
  EXPECT_NEAR(gl401, gl802, 1e-6);
  EXPECT_NEAR(gl802, a.dp_tilde.value, 1e-6);
}

TEST(Oracle, IdentitiesOnRandomPairs) {
  Rng rng = make_rng(41);
  for (int rep = 0; rep < 6; ++rep) {
    const double p = 0.2 + 0.6 * std::uniform_real_distribution<double>()(rng);
    const auto model = testing::random_model(rng, 1 + rep % 2, p);
    const auto pair = gaussian_pair(model);
    const auto o = all_integrals(pair, 0.5);
    EXPECT_NEAR(1.0 - 4.0 * p * (1.0 - p) * o.affinity.value, o.dp_tilde.value, 1e-6);
    EXPECT_NEAR(0.5 - 0.5 * o.tv.value, o.bayes_error.value, 1e-5);
    EXPECT_NEAR(o.mass0.value, 1.0, 1e-6);
    EXPECT_NEAR(o.mass1.value, 1.0, 1e-6);
    EXPECT_NEAR(o.chernoff.value, chernoff_upper_gaussian(model, 0.5), 1e-5);
    EXPECT_NEAR(chernoff_integral(pair, 0.3).value, chernoff_upper_gaussian(model, 0.3), 1e-5);
    EXPECT_NEAR(o.bc.value, 2.0 * std::sqrt(p * (1.0 - p)) * std::exp(-bhattacharyya_distance(model)), 1e-5);
    // Standalone entry points agree with the single pass.
    EXPECT_NEAR(bayes_error(pair).value, o.bayes_error.value, 1e-9);
    EXPECT_NEAR(unweighted_chernoff_integral(pair, 1.0 - p).value, o.unweighted_qp.value, 1e-9);
  }
}

TEST(Oracle, D1BhattacharyyaByQuadrature) {
  // D1 differs from N(0, I) only along the first axis.
  const auto pair = unit_pair(1, 2.56);
  EXPECT_NEAR(bc_integral(pair).value, bhattacharyya_coefficient(fukunaga_model(FukunagaDataset::kD1)), 1e-5);
  EXPECT_NEAR(bc_integral(pair).value, 0.4408, 1e-4);
}

TEST(Oracle, MonteCarloMatchesClosedForm) {
  Rng rng = make_rng(51);
  const auto model = testing::random_model(rng, 3, 0.5);
  OracleOptions opt;
  opt.mc_samples = 200'000;
  const auto o = all_integrals(gaussian_pair(model), 0.5, opt);
  EXPECT_TRUE(o.bc.monte_carlo);
  EXPECT_GT(o.bc.error, 0.0);
  EXPECT_NEAR(o.bc.value, bhattacharyya_coefficient(model), std::max(6.0 * o.bc.error, 1e-4));
  EXPECT_NEAR(o.mass0.value, 1.0, 1e-2);
  // Same seed, same answer.
  const auto again = all_integrals(gaussian_pair(model), 0.5, opt);
  EXPECT_EQ(o.bc.value, again.bc.value);
}

TEST(Oracle, MonteCarloAgreesWithQuadratureIn2D) {
  const auto pair = unit_pair(2, 1.0);
  OracleOptions opt;
  opt.force_monte_carlo = true;
  opt.mc_samples = 400'000;
  const auto mc = dp_tilde_integral(pair, opt);
  EXPECT_NEAR(mc.value, kDpTildeSep1, 6.0 * mc.error);
}

TEST(Oracle, Mixtures) {
  Matrix one = Matrix::Identity(1, 1);
  const GaussianMixture f0({{0.5, Vector::Constant(1, -2.0), one}, {0.5, Vector::Constant(1, 2.0), one}});
  const auto f1 = GaussianMixture::single(Vector::Zero(1), one);
  const auto pair = mixture_pair(f0, f1, 0.5);
  const auto o = all_integrals(pair);
  EXPECT_NEAR(o.mass0.value, 1.0, 1e-9);
  EXPECT_LE(o.dp_tilde.value, o.tv.value + 1e-7);
  EXPECT_LE(o.tv.value, std::sqrt(o.dp_tilde.value) + 1e-7);
  EXPECT_NEAR(0.5 - 0.5 * o.tv.value, o.bayes_error.value, 1e-9);
}

TEST(Oracle, Errors) {
  const auto pair = unit_pair(1, 1.0);
  EXPECT_THROW(chernoff_integral(pair, 0.0), InvalidArgument);
  EXPECT_THROW(unweighted_chernoff_integral(pair, 1.0), InvalidArgument);
  DensityPair bad = pair;
  bad.log_density1 = [](std::span<const double> x) { return std::log(2.0) - 0.5 * x[0] * x[0]; };
  EXPECT_THROW(make_density_pair(bad), InvalidArgument);
  bad = pair;
  bad.prior_p = 1.0;
  EXPECT_THROW(make_density_pair(bad), InvalidArgument);
  OracleOptions starved;
  starved.quadrature.abs_tol = 0.0;
  starved.quadrature.rel_tol = 0.0;
  starved.quadrature.max_panels = 20;
  EXPECT_THROW(bayes_error(unit_pair(1, 1.0), starved), NumericalError);
}

TEST(Oracle, DpFromDpTilde) {
  EXPECT_DOUBLE_EQ(dp_from_dp_tilde(0.3, 0.5), 0.3);
  EXPECT_NEAR(dp_from_dp_tilde(0.04 + 0.96 * 0.5, 0.4), 0.5, 1e-15);
}

}  // namespace
}  // namespace dpbounds
