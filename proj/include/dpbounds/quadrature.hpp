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

#ifndef DPBOUNDS_QUADRATURE_HPP_
#define DPBOUNDS_QUADRATURE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <type_traits>
#include <span>
#include <utility>
#include <vector>

#include "dpbounds/error.hpp"

namespace dpbounds::quad {

template <std::size_t K>
using Values = std::array<double, K>;

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule by Newton iteration on P_n.
inline GaussLegendreRule gauss_legendre(std::size_t n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: n must be >= 1");
  GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double dk = static_cast<double>(k);
        const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = dn * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

// Fixed tensor-product Gauss-Legendre over a box of dimension 1 or 2.
template <std::size_t K, class F>
Values<K> integrate_gauss_legendre(F&& f, std::span<const std::pair<double, double>> box,
                                   std::size_t nodes_per_dim) {
  const auto rule = gauss_legendre(nodes_per_dim);
  Values<K> acc{};
  if (box.size() == 1) {
    const double half = 0.5 * (box[0].second - box[0].first);
    const double mid = 0.5 * (box[0].second + box[0].first);
    for (std::size_t i = 0; i < nodes_per_dim; ++i) {
      const std::array<double, 1> x{mid + half * rule.nodes[i]};
      const auto v = f(std::span<const double>(x));
      for (std::size_t k = 0; k < K; ++k) acc[k] += half * rule.weights[i] * v[k];
    }
    return acc;
  }
  if (box.size() != 2) throw InvalidArgument("integrate_gauss_legendre: dimension must be 1 or 2");
  const double hx = 0.5 * (box[0].second - box[0].first);
  const double mx = 0.5 * (box[0].second + box[0].first);
  const double hy = 0.5 * (box[1].second - box[1].first);
  const double my = 0.5 * (box[1].second + box[1].first);
  for (std::size_t i = 0; i < nodes_per_dim; ++i) {
    for (std::size_t j = 0; j < nodes_per_dim; ++j) {
      const std::array<double, 2> x{mx + hx * rule.nodes[i], my + hy * rule.nodes[j]};
      const auto v = f(std::span<const double>(x));
      const double w = hx * hy * rule.weights[i] * rule.weights[j];
      for (std::size_t k = 0; k < K; ++k) acc[k] += w * v[k];
    }
  }
  return acc;
}

struct AdaptiveOptions {
  double abs_tol = 1e-11;
  double rel_tol = 1e-12;
  std::size_t initial_panels = 16;
  std::size_t max_panels = 5000;
};

template <std::size_t K>
struct QuadResult {
  Values<K> value{};
  Values<K> error{};
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (abscissae of the Kronrod rule,
// Gauss nodes at odd positions).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t K>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  Values<K> value{};
  Values<K> error{};
  double max_error = 0.0;
  friend bool operator<(const Panel& x, const Panel& y) { return x.max_error < y.max_error; }
};

template <std::size_t K, class F>
Panel<K> gauss_kronrod(F& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Values<K> kron{};
  Values<K> gauss{};
  const auto fc = f(mid);
  for (std::size_t k = 0; k < K; ++k) {
    kron[k] = fc[k] * kWgk[7];
    gauss[k] = fc[k] * kWg[3];
  }
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const auto f1 = f(mid - dx);
    const auto f2 = f(mid + dx);
    for (std::size_t k = 0; k < K; ++k) {
      kron[k] += kWgk[j] * (f1[k] + f2[k]);
      if (j % 2 == 1) gauss[k] += kWg[j / 2] * (f1[k] + f2[k]);
    }
  }
  Panel<K> p{a, b, {}, {}, 0.0};
  for (std::size_t k = 0; k < K; ++k) {
    p.value[k] = kron[k] * half;
    p.error[k] = std::abs((kron[k] - gauss[k]) * half);
    p.max_error = std::max(p.max_error, p.error[k]);
  }
  return p;
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (G7/K15) integration of a K-vector valued
// function on [a, b]. The worst panel is bisected until every component
// meets max(abs_tol, rel_tol * |value|) or the panel budget runs out.
template <std::size_t K, class F>
QuadResult<K> integrate_adaptive(F&& f, double a, double b, const AdaptiveOptions& opt = {},
                                 std::span<const double> breakpoints = {}) {
  QuadResult<K> out;
  if (!(b > a)) return out;
  std::size_t evals = 0;
  auto counted = [&](double x) {
    ++evals;
    return f(x);
  };
  std::priority_queue<detail::Panel<K>> queue;
  const std::size_t n0 = std::max<std::size_t>(1, opt.initial_panels);
  std::vector<double> edges;
  edges.reserve(n0 + 1 + breakpoints.size());
  for (std::size_t i = 0; i < n0; ++i) {
    edges.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n0));
  }
  edges.push_back(b);
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    queue.push(detail::gauss_kronrod<K>(counted, edges[i], edges[i + 1]));
  }
  auto totals = [&](Values<K>& value, Values<K>& error) {
    value.fill(0.0);
    error.fill(0.0);
    auto copy = queue;
    while (!copy.empty()) {
      for (std::size_t k = 0; k < K; ++k) {
        value[k] += copy.top().value[k];
        error[k] += copy.top().error[k];
      }
      copy.pop();
    }
  };
  auto done = [&](const Values<K>& value, const Values<K>& error) {
    for (std::size_t k = 0; k < K; ++k) {
      if (error[k] > std::max(opt.abs_tol, opt.rel_tol * std::abs(value[k]))) return false;
    }
    return true;
  };

  Values<K> value{};
  Values<K> error{};
  totals(value, error);
  while (!done(value, error) && queue.size() < opt.max_panels) {
    const auto worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gauss_kronrod<K>(counted, worst.a, mid);
    const auto right = detail::gauss_kronrod<K>(counted, mid, worst.b);
    for (std::size_t k = 0; k < K; ++k) {
      value[k] += left.value[k] + right.value[k] - worst.value[k];
      error[k] += left.error[k] + right.error[k] - worst.error[k];
    }
    queue.push(left);
    queue.push(right);
    // Running sums drift; resynchronise occasionally.
    if (queue.size() % 256 == 0) totals(value, error);
  }
  totals(value, error);
  out.value = value;
  out.error = error;
  out.evaluations = evals;
  out.converged = done(value, error);
  return out;
}

// Zeros of `sign_fn` on [a, b], located by scanning `grid` equal cells and
// bisecting each sign change. Non-finite readings are skipped. Used to place
// panel edges on kinks such as the switch of min(a, b).
template <class S>
std::vector<double> sign_changes(S& sign_fn, double a, double b, std::size_t grid = 128) {
  std::vector<double> roots;
  double x_prev = a;
  double s_prev = sign_fn(a);
  for (std::size_t i = 1; i <= grid; ++i) {
    const double x = i == grid ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(grid);
    const double sx = sign_fn(x);
    if (std::isfinite(sx) && std::isfinite(s_prev) && ((s_prev < 0.0) != (sx < 0.0))) {
      double lo = x_prev;
      double hi = x;
      const bool lo_negative = s_prev < 0.0;
      for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double sm = sign_fn(mid);
        if (!std::isfinite(sm)) break;
        ((sm < 0.0) == lo_negative ? lo : hi) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x_prev = x;
    s_prev = sx;
  }
  return roots;
}

// Iterated adaptive integration over a box of dimension 1 or 2. The inner
// integral in y is resolved for every outer abscissa x.
// `kink` (may be nullptr) is a function of the point whose zero set marks
// where the integrand is not smooth; its zeros along each inner line become
// panel edges.
template <std::size_t K, class F, class G = std::nullptr_t>
QuadResult<K> integrate_box(F&& f, std::span<const std::pair<double, double>> box,
                            const AdaptiveOptions& opt = {}, G kink = nullptr) {
  constexpr bool kHasKink = !std::is_same_v<G, std::nullptr_t>;
  if (box.size() == 1) {
    std::vector<double> breaks;
    if constexpr (kHasKink) {
      auto line = [&](double x) {
        const std::array<double, 1> pt{x};
        return kink(std::span<const double>(pt));
      };
      breaks = sign_changes(line, box[0].first, box[0].second);
    }
    return integrate_adaptive<K>(
        [&](double x) {
          const std::array<double, 1> pt{x};
          return f(std::span<const double>(pt));
        },
        box[0].first, box[0].second, opt, breaks);
  }
  if (box.size() != 2) throw InvalidArgument("integrate_box: dimension must be 1 or 2");
  AdaptiveOptions inner_opt = opt;
  const double width = box[0].second - box[0].first;
  inner_opt.abs_tol = 0.1 * opt.abs_tol / std::max(width, 1.0);
  inner_opt.rel_tol = 0.1 * opt.rel_tol;
  std::size_t inner_evals = 0;
  double worst_inner = 0.0;
  bool inner_ok = true;
  auto outer = integrate_adaptive<K>(
      [&](double x) {
        std::vector<double> breaks;
        if constexpr (kHasKink) {
          auto line = [&](double y) {
            const std::array<double, 2> pt{x, y};
            return kink(std::span<const double>(pt));
          };
          breaks = sign_changes(line, box[1].first, box[1].second);
        }
        auto r = integrate_adaptive<K>(
            [&](double y) {
              const std::array<double, 2> pt{x, y};
              return f(std::span<const double>(pt));
            },
            box[1].first, box[1].second, inner_opt, breaks);
        inner_evals += r.evaluations;
        inner_ok = inner_ok && r.converged;
        for (double e : r.error) worst_inner = std::max(worst_inner, e);
        return r.value;
      },
      box[0].first, box[0].second, opt);
  for (auto& e : outer.error) e += width * worst_inner;
  outer.evaluations = inner_evals;
  outer.converged = outer.converged && inner_ok;
  return outer;
}

}  // namespace dpbounds::quad

#endif  // DPBOUNDS_QUADRATURE_HPP_
