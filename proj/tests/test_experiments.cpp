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

#include "dpbounds/experiments.hpp"
#include "support.hpp"

namespace dpbounds {
namespace {

TEST(Summarize, MeanAndSampleStd) {
  const auto s = summarize({1.0, 2.0, 4.0});
  EXPECT_DOUBLE_EQ(s.mean, 7.0 / 3.0);
  EXPECT_NEAR(s.std, std::sqrt(((1 - 7.0 / 3) * (1 - 7.0 / 3) + (2 - 7.0 / 3) * (2 - 7.0 / 3) +
                                (4 - 7.0 / 3) * (4 - 7.0 / 3)) / 2.0),
              1e-15);
  EXPECT_EQ(s.values, (std::vector<double>{1.0, 2.0, 4.0}));
  EXPECT_EQ(summarize({4.0, 1.0, 2.0}).mean, summarize({1.0, 2.0, 4.0}).mean);
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0, 10.0}), 2.5);
  EXPECT_THROW(median({}), InvalidArgument);
}

TEST(Sweep, EndpointsAndSandwich) {
  const auto r = run_sweep(8, 60, 2, 1);
  ASSERT_EQ(r.rows.size(), 8u);
  EXPECT_DOUBLE_EQ(r.separations.front(), 0.0);
  EXPECT_DOUBLE_EQ(r.separations.back(), 5.0);
  const auto& zero = r.rows.front();
  EXPECT_NEAR(zero.ber_true, 0.5, 1e-9);
  for (double v : {zero.dp_upper_analytic, zero.dp_lower_analytic, zero.bc_upper, zero.bc_lower}) {
    EXPECT_NEAR(v, 0.5, 1e-9);
  }
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const auto& row = r.rows[k];
    EXPECT_LE(row.bc_lower, row.dp_lower_analytic + 1e-7);
    EXPECT_LE(row.dp_lower_analytic, row.ber_true + 1e-7);
    EXPECT_LE(row.ber_true, row.dp_upper_analytic + 1e-7);
    EXPECT_LE(row.dp_upper_analytic, row.bc_upper + 1e-7);
    if (k > 0) EXPECT_LE(row.ber_true, r.rows[k - 1].ber_true + 1e-12);
    EXPECT_EQ(row.n_per_class, 60u);
    EXPECT_EQ(row.n_trials, 2u);
  }
  EXPECT_THROW(run_sweep(1, 10, 1, 1), InvalidArgument);
}

TEST(Sweep, BenchmarkGeometryBayesError) {
  const auto pair = gaussian_pair(sweep_model(2.56));
  EXPECT_NEAR(bayes_error(pair).value, 0.1003, 1e-4);
  EXPECT_NEAR(bayes_error(pair).value, testing::q_function(1.28), 1e-10);
}

TEST(Fukunaga, SmallRunIsDeterministic) {
  const auto a = run_fukunaga(FukunagaDataset::kD1, 100, 5, 3);
  const auto b = run_fukunaga(FukunagaDataset::kD1, 100, 5, 3);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.n_trials, 5u);
  const auto re = summarize(a.values);
  EXPECT_NEAR(re.mean, a.mean, 1e-12);
  EXPECT_NEAR(re.std, a.std, 1e-12);
}

TEST(Fukunaga, D1Band) {
  const auto s = run_fukunaga(FukunagaDataset::kD1, 1000, 50, kDefaultSeed);
  EXPECT_NEAR(100.0 * s.mean, 16.46, 2.0);
  EXPECT_GE(100.0 * s.std, 0.5);
  EXPECT_LE(100.0 * s.std, 2.5);
}

TEST(Fukunaga, D2Band) {
  const auto s = run_fukunaga(FukunagaDataset::kD2, 1000, 50, kDefaultSeed);
  EXPECT_NEAR(100.0 * s.mean, 1.94, 0.8);
}

TEST(Fukunaga, D1SmallSampleBand) {
  const auto s = run_fukunaga(FukunagaDataset::kD1, 100, 50, kDefaultSeed);
  EXPECT_NEAR(100.0 * s.mean, 18.23, 4.0);
}

TEST(Consistency, MedianErrorShrinks) {
  const auto r = run_consistency(sweep_model(2.0), {100, 400, 1600}, 20, kDefaultSeed);
  ASSERT_EQ(r.summaries.size(), 3u);
  EXPECT_NEAR(r.oracle_dp_tilde, 0.5504004907933273, 1e-9);
  for (std::size_t s = 1; s < 3; ++s) {
    EXPECT_LE(median(r.summaries[s].values), median(r.summaries[s - 1].values));
  }
  EXPECT_THROW(run_consistency(sweep_model(2.0), {400, 100}, 2, 1), InvalidArgument);
}

TEST(Consistency, IdenticalClassesCentreOnZero) {
  const auto model = sweep_model(0.0);
  std::vector<double> raw;
  for (std::uint64_t t = 0; t < 30; ++t) {
    raw.push_back(estimate_from_labeled(sample_gaussian(model, 200, 200, t)).dp_tilde_raw);
  }
  const auto s = summarize(raw);
  EXPECT_LE(std::abs(s.mean), 3.0 * s.std);
  const auto a = run_consistency(model, {50, 100}, 4, 9);
  const auto b = run_consistency(model, {50, 100}, 4, 9);
  EXPECT_EQ(a.summaries[1].values, b.summaries[1].values);
}

}  // namespace
}  // namespace dpbounds
