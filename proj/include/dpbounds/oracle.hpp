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

#ifndef DPBOUNDS_ORACLE_HPP_
#define DPBOUNDS_ORACLE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dpbounds/dataset.hpp"
#include "dpbounds/error.hpp"
#include "dpbounds/quadrature.hpp"
#include "dpbounds/rng.hpp"

// Reference values for the divergence functionals and the Bayes error of
// two known densities, computed by numerical integration only.
//
// All functionals are written in terms of a = p f0(x) and b = q f1(x):
//   Bayes error   int min(a, b)
//   D~_p          int (a - b)^2 / (a + b)        (= 1 - 4pq A_p)
//   A_p           int f0 f1 / (a + b)
//   BC            int 2 sqrt(a b)
//   TV            int |a - b|
//   I_alpha       int a^alpha b^(1 - alpha)
// d <= 2 uses iterated adaptive Gauss-Kronrod quadrature over the box;
// d > 2 uses Monte Carlo with the mixture a + b as the sampling density,
// stratified by component (round(pN) draws from f0, the rest from f1).
namespace dpbounds {

struct DensityPair {
  using LogDensity = std::function<double(std::span<const double>)>;
  using Sampler = std::function<void(Rng&, std::span<double>)>;

  LogDensity log_density0;
  LogDensity log_density1;
  double prior_p = 0.5;
  std::size_t dimension = 0;
  std::vector<std::pair<double, double>> box;
  // Optional exact samplers. Without them d > 2 falls back to uniform
  // sampling over the box.
  Sampler sample0;
  Sampler sample1;

  double prior_q() const { return 1.0 - prior_p; }
};

struct OracleOptions {
  quad::AdaptiveOptions quadrature{};
  std::size_t mc_samples = 1'000'000;
  std::uint64_t seed = kDefaultSeed;
  bool force_monte_carlo = false;
};

struct IntegralEstimate {
  double value = 0.0;
  double error = 0.0;  // quadrature error estimate or MC standard error
  bool monte_carlo = false;
};

// A weighted sum of Gaussians; a single component is an ordinary Gaussian.
class GaussianMixture {
 public:
  struct Component {
    double weight;
    Vector mean;
    Matrix cov;
  };

  explicit GaussianMixture(std::vector<Component> components) {
    if (components.empty()) throw InvalidArgument("GaussianMixture: no components");
    const auto d = components.front().mean.size();
    double total = 0.0;
    for (auto& c : components) {
      if (c.mean.size() != d || c.cov.rows() != d || c.cov.cols() != d) {
        throw InvalidArgument("GaussianMixture: inconsistent dimensions");
      }
      if (!(c.weight > 0.0)) throw InvalidArgument("GaussianMixture: weights must be > 0");
      GaussianModel::check_covariance(c.cov, "component covariance");
      total += c.weight;
    }
    for (auto& c : components) {
      Prepared p;
      p.mean = c.mean;
      p.lower = Eigen::LLT<Matrix>(c.cov).matrixL();
      p.lower_inv = p.lower.triangularView<Eigen::Lower>().solve(Matrix::Identity(d, d));
      const double log_det = 2.0 * p.lower.diagonal().array().log().sum();
      p.log_norm = std::log(c.weight / total) - 0.5 * log_det -
                   0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi);
      p.weight = c.weight / total;
      p.sd = c.cov.diagonal().array().sqrt();
      prepared_.push_back(std::move(p));
    }
    dimension_ = static_cast<std::size_t>(d);
  }

  static GaussianMixture single(const Vector& mean, const Matrix& cov) {
    return GaussianMixture({{1.0, mean, cov}});
  }

  std::size_t dimension() const { return dimension_; }

  double log_density(std::span<const double> x) const {
    const auto d = static_cast<Eigen::Index>(dimension_);
    double best = -std::numeric_limits<double>::infinity();
    std::array<double, 16> terms_small{};
    std::vector<double> terms_big;
    double* terms = terms_small.data();
    if (prepared_.size() > terms_small.size()) {
      terms_big.resize(prepared_.size());
      terms = terms_big.data();
    }
    for (std::size_t c = 0; c < prepared_.size(); ++c) {
      const auto& p = prepared_[c];
      double q = 0.0;
      for (Eigen::Index r = 0; r < d; ++r) {
        double z = 0.0;
        for (Eigen::Index k = 0; k <= r; ++k) z += p.lower_inv(r, k) * (x[static_cast<std::size_t>(k)] - p.mean(k));
        q += z * z;
      }
      terms[c] = p.log_norm - 0.5 * q;
      best = std::max(best, terms[c]);
    }
    if (prepared_.size() == 1) return terms[0];
    double s = 0.0;
    for (std::size_t c = 0; c < prepared_.size(); ++c) s += std::exp(terms[c] - best);
    return best + std::log(s);
  }

  void sample(Rng& rng, std::span<double> out) const {
    std::size_t c = 0;
    if (prepared_.size() > 1) {
      double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      while (c + 1 < prepared_.size() && u >= prepared_[c].weight) {
        u -= prepared_[c].weight;
        ++c;
      }
    }
    const auto& p = prepared_[c];
    const auto d = static_cast<Eigen::Index>(dimension_);
    std::normal_distribution<double> normal;
    Vector z(d);
    for (Eigen::Index k = 0; k < d; ++k) z(k) = normal(rng);
    const Vector x = p.mean + p.lower * z;
    for (Eigen::Index k = 0; k < d; ++k) out[static_cast<std::size_t>(k)] = x(k);
  }

  // Per-dimension [min(mu - w sd), max(mu + w sd)] over components.
  std::vector<std::pair<double, double>> box(double width_sd) const {
    std::vector<std::pair<double, double>> b(dimension_,
                                             {std::numeric_limits<double>::infinity(),
                                              -std::numeric_limits<double>::infinity()});
    for (const auto& p : prepared_) {
      for (std::size_t k = 0; k < dimension_; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        b[k].first = std::min(b[k].first, p.mean(kk) - width_sd * p.sd(kk));
        b[k].second = std::max(b[k].second, p.mean(kk) + width_sd * p.sd(kk));
      }
    }
    return b;
  }

 private:
  struct Prepared {
    Vector mean;
    Matrix lower;
    Matrix lower_inv;
    Eigen::ArrayXd sd;
    double log_norm = 0.0;
    double weight = 1.0;
  };
  std::vector<Prepared> prepared_;
  std::size_t dimension_ = 0;
};

namespace detail {

template <std::size_t K, class Kernel>
quad::QuadResult<K> integrate_quadrature(const DensityPair& pair, Kernel&& kernel,
                                         const quad::AdaptiveOptions& opt) {
  const double log_p = std::log(pair.prior_p);
  const double log_q = std::log(pair.prior_q());
  // min(a, b) and |a - b| bend where a = b.
  auto kink = [&](std::span<const double> x) {
    return (log_p + pair.log_density0(x)) - (log_q + pair.log_density1(x));
  };
  return quad::integrate_box<K>(
      [&](std::span<const double> x) {
        return kernel(pair.log_density0(x), pair.log_density1(x), log_p, log_q);
      },
      std::span<const std::pair<double, double>>(pair.box), opt, kink);
}

template <std::size_t K, class Kernel>
std::array<IntegralEstimate, K> integrate_monte_carlo(const DensityPair& pair, Kernel&& kernel,
                                                      std::size_t n_samples, std::uint64_t seed) {
  constexpr std::size_t kBlock = 1 << 16;
  const double log_p = std::log(pair.prior_p);
  const double log_q = std::log(pair.prior_q());
  const std::size_t n = std::max<std::size_t>(n_samples, 2);
  std::vector<double> x(pair.dimension);
  std::array<IntegralEstimate, K> out{};

  const bool importance = static_cast<bool>(pair.sample0) && static_cast<bool>(pair.sample1);
  if (importance) {
    std::size_t n0 = static_cast<std::size_t>(std::llround(pair.prior_p * static_cast<double>(n)));
    n0 = std::clamp<std::size_t>(n0, 1, n - 1);
    const std::array<std::size_t, 2> counts{n0, n - n0};
    std::array<double, K> total{};
    std::array<double, K> variance_sum{};
    for (std::size_t s = 0; s < 2; ++s) {
      const auto& sampler = s == 0 ? pair.sample0 : pair.sample1;
      std::array<double, K> sum{};
      std::array<double, K> sum_sq{};
      for (std::size_t start = 0, block = 0; start < counts[s]; start += kBlock, ++block) {
        Rng rng = make_rng(derive_seed(derive_seed(seed, s), block));
        const std::size_t stop = std::min(counts[s], start + kBlock);
        for (std::size_t i = start; i < stop; ++i) {
          sampler(rng, std::span<double>(x));
          const double l0 = pair.log_density0(std::span<const double>(x));
          const double l1 = pair.log_density1(std::span<const double>(x));
          const double mix = std::exp(log_p + l0) + std::exp(log_q + l1);
          if (!(mix > 0.0)) continue;
          const auto v = kernel(l0, l1, log_p, log_q);
          for (std::size_t k = 0; k < K; ++k) {
            const double h = v[k] / mix;
            sum[k] += h;
            sum_sq[k] += h * h;
          }
        }
      }
      const double ns = static_cast<double>(counts[s]);
      for (std::size_t k = 0; k < K; ++k) {
        total[k] += sum[k];
        const double mean = sum[k] / ns;
        const double var = ns > 1 ? std::max(0.0, (sum_sq[k] - ns * mean * mean) / (ns - 1)) : 0.0;
        variance_sum[k] += ns * var;  // (n_s/N)^2 var_s / n_s, scaled by N^2
      }
    }
    const double nn = static_cast<double>(n);
    for (std::size_t k = 0; k < K; ++k) {
      out[k] = {total[k] / nn, std::sqrt(variance_sum[k]) / nn, true};
    }
    return out;
  }

  // Uniform sampling over the box.
  double volume = 1.0;
  for (const auto& [lo, hi] : pair.box) volume *= hi - lo;
  std::array<double, K> sum{};
  std::array<double, K> sum_sq{};
  for (std::size_t start = 0, block = 0; start < n; start += kBlock, ++block) {
    Rng rng = make_rng(derive_seed(derive_seed(seed, 2), block));
    const std::size_t stop = std::min(n, start + kBlock);
    for (std::size_t i = start; i < stop; ++i) {
      for (std::size_t k = 0; k < pair.dimension; ++k) {
        x[k] = std::uniform_real_distribution<double>(pair.box[k].first, pair.box[k].second)(rng);
      }
      const auto v = kernel(pair.log_density0(std::span<const double>(x)),
                            pair.log_density1(std::span<const double>(x)), log_p, log_q);
      for (std::size_t k = 0; k < K; ++k) {
        sum[k] += v[k] * volume;
        sum_sq[k] += v[k] * v[k] * volume * volume;
      }
    }
  }
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < K; ++k) {
    const double mean = sum[k] / nn;
    const double var = std::max(0.0, (sum_sq[k] - nn * mean * mean) / (nn - 1));
    out[k] = {mean, std::sqrt(var / nn), true};
  }
  return out;
}

template <std::size_t K, class Kernel>
std::array<IntegralEstimate, K> integrate(const DensityPair& pair, Kernel&& kernel,
                                          const OracleOptions& opt) {
  if (pair.dimension <= 2 && !opt.force_monte_carlo) {
    const auto r = integrate_quadrature<K>(pair, kernel, opt.quadrature);
    if (!r.converged) {
      std::ostringstream msg;
      msg << "oracle quadrature did not converge within " << opt.quadrature.max_panels
          << " panels; residual error estimate " << *std::max_element(r.error.begin(), r.error.end());
      throw NumericalError(msg.str());
    }
    std::array<IntegralEstimate, K> out{};
    for (std::size_t k = 0; k < K; ++k) out[k] = {r.value[k], r.error[k], false};
    return out;
  }
  return integrate_monte_carlo<K>(pair, kernel, opt.mc_samples, opt.seed);
}

inline double safe_exp(double x) { return x == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(x); }

// Tolerance for identities and range checks that must absorb integration error.
inline double check_tolerance(const IntegralEstimate& e) {
  return e.monte_carlo ? std::max(1e-6, 6.0 * e.error) : std::max(1e-6, 10.0 * e.error);
}

}  // namespace detail

// Validates the pair and checks that each density integrates to one over the
// box: within 1e-6 by quadrature for d <= 2, within 1e-2 by MC otherwise.
inline DensityPair make_density_pair(DensityPair pair) {
  if (!pair.log_density0 || !pair.log_density1) {
    throw InvalidArgument("DensityPair: both log-densities are required");
  }
  if (!(pair.prior_p > 0.0 && pair.prior_p < 1.0)) {
    throw InvalidArgument("DensityPair: prior_p must lie strictly inside (0,1)");
  }
  if (pair.dimension < 1 || pair.box.size() != pair.dimension) {
    throw InvalidArgument("DensityPair: box must have one interval per dimension");
  }
  for (const auto& [lo, hi] : pair.box) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) {
      throw InvalidArgument("DensityPair: degenerate integration box");
    }
  }
  auto masses = [](double l0, double l1, double, double) {
    return quad::Values<2>{detail::safe_exp(l0), detail::safe_exp(l1)};
  };
  OracleOptions opt;
  opt.mc_samples = 100'000;
  opt.quadrature.abs_tol = 1e-9;
  const auto m = detail::integrate<2>(pair, masses, opt);
  const double tol = m[0].monte_carlo ? 1e-2 : 1e-6;
  for (std::size_t k = 0; k < 2; ++k) {
    if (std::abs(m[k].value - 1.0) > tol) {
      std::ostringstream msg;
      msg << "DensityPair: density " << k << " integrates to " << m[k].value
          << " over the box (tolerance " << tol << ")";
      throw InvalidArgument(msg.str());
    }
  }
  return pair;
}

inline DensityPair mixture_pair(const GaussianMixture& f0, const GaussianMixture& f1,
                                double prior_p, double width_sd = 8.0) {
  if (f0.dimension() != f1.dimension()) throw InvalidArgument("mixture_pair: dimension mismatch");
  auto a = std::make_shared<GaussianMixture>(f0);
  auto b = std::make_shared<GaussianMixture>(f1);
  DensityPair pair;
  pair.log_density0 = [a](std::span<const double> x) { return a->log_density(x); };
  pair.log_density1 = [b](std::span<const double> x) { return b->log_density(x); };
  pair.sample0 = [a](Rng& rng, std::span<double> out) { a->sample(rng, out); };
  pair.sample1 = [b](Rng& rng, std::span<double> out) { b->sample(rng, out); };
  pair.prior_p = prior_p;
  pair.dimension = f0.dimension();
  auto box0 = f0.box(width_sd);
  const auto box1 = f1.box(width_sd);
  for (std::size_t k = 0; k < box0.size(); ++k) {
    box0[k].first = std::min(box0[k].first, box1[k].first);
    box0[k].second = std::max(box0[k].second, box1[k].second);
  }
  pair.box = std::move(box0);
  return make_density_pair(std::move(pair));
}

// Box is [mu - 8 sd, mu + 8 sd] per dimension, merged over both classes.
inline DensityPair gaussian_pair(const GaussianModel& model) {
  model.validate();
  return mixture_pair(GaussianMixture::single(model.mean0, model.cov0),
                      GaussianMixture::single(model.mean1, model.cov1), model.prior_p);
}

inline IntegralEstimate bayes_error(const DensityPair& pair, const OracleOptions& opt = {}) {
  return detail::integrate<1>(
      pair,
      [](double l0, double l1, double lp, double lq) {
        return quad::Values<1>{detail::safe_exp(std::min(lp + l0, lq + l1))};
      },
      opt)[0];
}

inline IntegralEstimate dp_tilde_integral(const DensityPair& pair, const OracleOptions& opt = {}) {
  auto r = detail::integrate<1>(
      pair,
      [](double l0, double l1, double lp, double lq) {
        const double a = detail::safe_exp(lp + l0);
        const double b = detail::safe_exp(lq + l1);
        const double s = a + b;
        return quad::Values<1>{s > 0.0 ? (a - b) * (a - b) / s : 0.0};
      },
      opt)[0];
  const double tol = detail::check_tolerance(r);
  if (r.value < -tol || r.value > 1.0 + tol) {
    std::ostringstream msg;
    msg << "dp_tilde_integral: raw value " << r.value << " lies outside [0,1]";
    throw NumericalError(msg.str());
  }
  r.value = std::clamp(r.value, 0.0, 1.0);
  return r;
}

// Also checks D~_p = 1 - 4 p q A_p against an independent evaluation of D~_p.
inline IntegralEstimate affinity_integral(const DensityPair& pair, const OracleOptions& opt = {}) {
  const auto r = detail::integrate<2>(
      pair,
      [](double l0, double l1, double lp, double lq) {
        const double a = detail::safe_exp(lp + l0);
        const double b = detail::safe_exp(lq + l1);
        const double s = a + b;
        if (!(s > 0.0)) return quad::Values<2>{0.0, 0.0};
        return quad::Values<2>{detail::safe_exp(l0) * detail::safe_exp(l1) / s, (a - b) * (a - b) / s};
      },
      opt);
  const double four_pq = 4.0 * pair.prior_p * pair.prior_q();
  const double mismatch = std::abs(1.0 - four_pq * r[0].value - r[1].value);
  const double tol = detail::check_tolerance(r[0]) + detail::check_tolerance(r[1]);
  if (mismatch > tol) {
    std::ostringstream msg;
    msg << "affinity_integral: identity D~ = 1 - 4pqA violated by " << mismatch;
    throw NumericalError(msg.str());
  }
  return r[0];
}

inline IntegralEstimate bc_integral(const DensityPair& pair, const OracleOptions& opt = {}) {
  return detail::integrate<1>(
      pair,
      [](double l0, double l1, double lp, double lq) {
        return quad::Values<1>{2.0 * detail::safe_exp(0.5 * (lp + l0 + lq + l1))};
      },
      opt)[0];
}

inline IntegralEstimate tv_integral(const DensityPair& pair, const OracleOptions& opt = {}) {
  return detail::integrate<1>(
      pair,
      [](double l0, double l1, double lp, double lq) {
        return quad::Values<1>{std::abs(detail::safe_exp(lp + l0) - detail::safe_exp(lq + l1))};
      },
      opt)[0];
}

// int (p f0)^alpha (q f1)^(1 - alpha)
inline IntegralEstimate chernoff_integral(const DensityPair& pair, double alpha,
                                          const OracleOptions& opt = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("chernoff_integral: alpha must lie in (0,1)");
  return detail::integrate<1>(
      pair,
      [alpha](double l0, double l1, double lp, double lq) {
        return quad::Values<1>{detail::safe_exp(alpha * (lp + l0) + (1.0 - alpha) * (lq + l1))};
      },
      opt)[0];
}

// int f0^alpha f1^(1 - alpha), without prior weights. With alpha = q this is
// the right-hand side of A_p <= int f0^q f1^p.
inline IntegralEstimate unweighted_chernoff_integral(const DensityPair& pair, double alpha,
                                                     const OracleOptions& opt = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("unweighted_chernoff_integral: alpha must lie in (0,1)");
  }
  return detail::integrate<1>(
      pair,
      [alpha](double l0, double l1, double, double) {
        return quad::Values<1>{detail::safe_exp(alpha * l0 + (1.0 - alpha) * l1)};
      },
      opt)[0];
}

// Every functional in a single pass over shared nodes or samples.
struct OracleIntegrals {
  IntegralEstimate bayes_error;
  IntegralEstimate dp_tilde;
  IntegralEstimate affinity;
  IntegralEstimate bc;
  IntegralEstimate tv;
  IntegralEstimate chernoff;           // I_alpha
  IntegralEstimate unweighted_qp;      // int f0^q f1^p
  IntegralEstimate mass0;
  IntegralEstimate mass1;
  double alpha = 0.5;
};

inline OracleIntegrals all_integrals(const DensityPair& pair, double alpha = 0.5,
                                     const OracleOptions& opt = {}) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("all_integrals: alpha must lie in (0,1)");
  const double p = pair.prior_p;
  const double q = pair.prior_q();
  const auto r = detail::integrate<9>(
      pair,
      [alpha, p, q](double l0, double l1, double lp, double lq) {
        const double a = detail::safe_exp(lp + l0);
        const double b = detail::safe_exp(lq + l1);
        const double s = a + b;
        quad::Values<9> v{};
        v[0] = std::min(a, b);
        v[1] = s > 0.0 ? (a - b) * (a - b) / s : 0.0;
        v[2] = s > 0.0 ? detail::safe_exp(l0) * detail::safe_exp(l1) / s : 0.0;
        v[3] = 2.0 * detail::safe_exp(0.5 * (lp + l0 + lq + l1));
        v[4] = std::abs(a - b);
        v[5] = detail::safe_exp(alpha * (lp + l0) + (1.0 - alpha) * (lq + l1));
        v[6] = detail::safe_exp(q * l0 + p * l1);
        v[7] = detail::safe_exp(l0);
        v[8] = detail::safe_exp(l1);
        return v;
      },
      opt);
  OracleIntegrals out{r[0], r[1], r[2], r[3], r[4], r[5], r[6], r[7], r[8], alpha};
  out.dp_tilde.value = std::clamp(out.dp_tilde.value, 0.0, 1.0);
  return out;
}

// D_p from D~_p: (D~ - (p - q)^2) / (4pq).
inline double dp_from_dp_tilde(double dp_tilde, double p) {
  const double q = 1.0 - p;
  return (dp_tilde - (p - q) * (p - q)) / (4.0 * p * q);
}

}  // namespace dpbounds

#endif  // DPBOUNDS_ORACLE_HPP_
