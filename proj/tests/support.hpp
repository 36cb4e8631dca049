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
#ifndef DPBOUNDS_TESTS_SUPPORT_HPP_
#define DPBOUNDS_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "dpbounds/dpbounds.hpp"

// Reference implementations and data generators shared by the unit tests
// and the acceptance binary. Nothing here calls build_mst.
namespace dpbounds::testing {

// Gaussian tail probability.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Kruskal over all N(N-1)/2 edges, ordered by (squared length, i, j).
inline std::vector<MstEdge> kruskal(const PointMatrix& pts) {
  const auto n = static_cast<std::size_t>(pts.rows());
  std::vector<std::tuple<double, std::size_t, std::size_t>> all;
  all.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d2 = (pts.row(static_cast<Eigen::Index>(i)) - pts.row(static_cast<Eigen::Index>(j)))
                            .squaredNorm();
      all.emplace_back(d2, i, j);
    }
  }
  std::sort(all.begin(), all.end());
  UnionFind uf(n);
  std::vector<MstEdge> tree;
  for (const auto& [d2, i, j] : all) {
    if (uf.unite(i, j)) tree.push_back({i, j, std::sqrt(d2)});
    if (tree.size() + 1 == n) break;
  }
  std::sort(tree.begin(), tree.end(), [](const MstEdge& a, const MstEdge& b) {
    return std::tie(a.i, a.j) < std::tie(b.i, b.j);
  });
  return tree;
}

inline double total_length(const std::vector<MstEdge>& edges) {
  double s = 0.0;
  for (const auto& e : edges) s += e.length;
  return s;
}

inline std::size_t kruskal_cross_count(const PointMatrix& f, const PointMatrix& g) {
  std::size_t c = 0;
  const auto nf = static_cast<std::size_t>(f.rows());
  for (const auto& e : kruskal(vstack(f, g))) c += (e.i < nf) != (e.j < nf);
  return c;
}

inline bool is_spanning_tree(const std::vector<MstEdge>& edges, std::size_t n) {
  if (edges.size() + 1 != n) return false;
  UnionFind uf(n);
  for (const auto& e : edges) {
    if (e.i >= e.j || e.j >= n || !uf.unite(e.i, e.j)) return false;
  }
  return true;
}

inline PointMatrix random_points(Rng& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> normal;
  PointMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = normal(rng);
  }
  return m;
}

// A A^T / d + floor I with A standard normal.
inline Matrix random_spd(Rng& rng, std::size_t d, double floor = 0.25) {
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(d);
  Matrix a(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) a(r, c) = normal(rng);
  }
  Matrix s = a * a.transpose() / static_cast<double>(d) + floor * Matrix::Identity(n, n);
  return 0.5 * (s + s.transpose());
}

inline GaussianModel random_model(Rng& rng, std::size_t d, double prior_p) {
  std::normal_distribution<double> normal(0.0, 1.2);
  GaussianModel m{Vector(d), Vector(d), random_spd(rng, d), random_spd(rng, d), prior_p};
  for (std::size_t k = 0; k < d; ++k) {
    m.mean0(static_cast<Eigen::Index>(k)) = normal(rng);
    m.mean1(static_cast<Eigen::Index>(k)) = normal(rng);
  }
  m.validate();
  return m;
}

// Two-feature source/target construction: feature 0 separates the classes
// well but moves between domains, feature 1 separates less but is stable.
inline SelectionData invariant_vs_shifted(std::uint64_t seed, std::size_t n = 500) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal;
  auto draw = [&](std::size_t rows, double m0, double m1) {
    PointMatrix x(static_cast<Eigen::Index>(rows), 2);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      x(r, 0) = m0 + normal(rng);
      x(r, 1) = m1 + normal(rng);
    }
    return x;
  };
  SelectionData data;
  data.source0 = draw(n, -2.0, -1.0);
  data.source1 = draw(n, 2.0, 1.0);
  data.target = vstack(draw(n, 1.0, -1.0), draw(n, 5.0, 1.0));
  return data;
}

// Feature 0 has class means -3 / +3; features 1..9 are N(0, 1) noise.
inline SelectionData informative_plus_noise(std::uint64_t seed, std::size_t n = 300) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal;
  auto draw = [&](double mean) {
    PointMatrix x(static_cast<Eigen::Index>(n), 10);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      for (Eigen::Index c = 0; c < 10; ++c) x(r, c) = normal(rng);
      x(r, 0) += mean;
    }
    return x;
  };
  SelectionData data;
  data.source0 = draw(-3.0);
  data.source1 = draw(3.0);
  return data;
}

struct DaScenario {
  DaBoundReport report;
  double target_error = 0.0;
};

// Source classes N((-1,0), I) and N((1,0), I); the target is the same pair
// moved by (0.5, 0). The source Bayes rule predicts class 1 when x0 > 0 and
// is scored on labeled target draws.
inline DaScenario covariate_shift_scenario(std::uint64_t seed, std::size_t n = 500) {
  Vector m0(2), m1(2), shift(2);
  m0 << -1.0, 0.0;
  m1 << 1.0, 0.0;
  shift << 0.5, 0.0;
  const auto source = sample_gaussian(isotropic_model(m0, m1), n, n, derive_seed(seed, 0));
  const auto target = sample_gaussian(isotropic_model(m0 + shift, m1 + shift), n, n,
                                      derive_seed(seed, 1));
  const auto source_est = estimate_from_labeled(source);
  const auto shift_est = estimate(source.points(), target.points());
  DaScenario s;
  s.report = da_bound(source_est, shift_est);
  std::size_t wrong = 0;
  for (std::size_t r = 0; r < target.size(); ++r) {
    const int predicted = target.points()(static_cast<Eigen::Index>(r), 0) > 0.0 ? 1 : 0;
    wrong += predicted != target.labels()[r];
  }
  s.target_error = static_cast<double>(wrong) / static_cast<double>(target.size());
  return s;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("dpbounds_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace dpbounds::testing

#endif  // DPBOUNDS_TESTS_SUPPORT_HPP_
