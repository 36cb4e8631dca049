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

#ifndef DPBOUNDS_REPORT_HPP_
#define DPBOUNDS_REPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpbounds/bounds.hpp"
#include "dpbounds/dataset.hpp"
#include "dpbounds/divergence.hpp"
#include "dpbounds/emst.hpp"
#include "dpbounds/experiments.hpp"
#include "dpbounds/featsel.hpp"
#include "dpbounds/oracle.hpp"

namespace dpbounds {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  // Keep integral-valued doubles recognisably floating point.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

inline void write_json(std::ostringstream& out, const Json& j, int indent, int depth) {
  indent = std::max(indent, 0);
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_json(out, it.value(), indent, depth + 1);
      }
      out << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out << ',' << nl;
        out << pad;
        write_json(out, j[i], indent, depth + 1);
      }
      out << nl << close_pad << ']';
      return;
    }
    case Json::value_t::number_float:
      out << format_double(j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

}  // namespace detail

// JSON text with every floating-point number at 17 significant digits.
// indent <= 0 gives compact output.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::ostringstream out;
  detail::write_json(out, j, indent, 0);
  out << '\n';
  return out.str();
}

// Writes through a temporary file in the same directory, then renames.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw InvalidArgument("cannot create directory '" + path.parent_path().string() + "'");
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw InvalidArgument("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InvalidArgument("cannot rename into '" + path.string() + "'");
  }
}

inline Json to_json(const DivergenceEstimate& e) {
  return Json{{"cross_count", e.cross_count}, {"n_f", e.n_f},
              {"n_g", e.n_g},                 {"dp", e.dp},
              {"dp_tilde_raw", e.dp_tilde_raw}, {"dp_tilde", e.dp_tilde},
              {"affinity", e.affinity},       {"p_hat", e.p_hat}};
}

inline Json to_json(const BerBounds& b) {
  return Json{{"lower", b.lower}, {"upper", b.upper}, {"source", to_string(b.source)}};
}

inline Json to_json(const DaBoundReport& r) {
  return Json{{"source_term", r.source_term},
              {"shift_term", r.shift_term},
              {"label_drift_term", r.label_drift_term},
              {"total", r.total},
              {"vacuous", r.vacuous}};
}

inline Json to_json(const McSummary& s) {
  return Json{{"mean", s.mean}, {"std", s.std}, {"n_trials", s.n_trials}, {"values", s.values}};
}

inline Json to_json(const IntegralEstimate& e) {
  return Json{{"value", e.value}, {"error", e.error},
              {"method", e.monte_carlo ? "monte_carlo" : "quadrature"}};
}

inline Json to_json(const SweepRow& r) {
  return Json{{"separation", r.separation},
              {"ber_true", r.ber_true},
              {"dp_upper_analytic", r.dp_upper_analytic},
              {"dp_lower_analytic", r.dp_lower_analytic},
              {"dp_upper_empirical_mean", r.dp_upper_empirical_mean},
              {"dp_lower_empirical_mean", r.dp_lower_empirical_mean},
              {"bc_upper", r.bc_upper},
              {"bc_lower", r.bc_lower},
              {"n_per_class", r.n_per_class},
              {"n_trials", r.n_trials}};
}

inline Json to_json(const SelectionTrace& t, const std::vector<std::string>& names = {}) {
  auto name = [&](std::size_t f) { return f < names.size() ? names[f] : "x" + std::to_string(f); };
  Json selected = Json::array();
  Json selected_names = Json::array();
  for (auto f : t.selected) {
    selected.push_back(f);
    selected_names.push_back(name(f));
  }
  Json j{{"selected", selected},
         {"selected_names", selected_names},
         {"criterion_values", t.criterion_values},
         {"shift_weight", t.shift_weight}};
  if (!t.per_step_candidates.empty()) {
    Json steps = Json::array();
    for (const auto& step : t.per_step_candidates) {
      Json m = Json::object();
      for (const auto& [f, phi] : step) m[name(f)] = phi;
      steps.push_back(m);
    }
    j["per_step_candidates"] = steps;
  }
  return j;
}

inline Json to_json(const OracleIntegrals& o) {
  return Json{{"bayes_error", to_json(o.bayes_error)}, {"dp_tilde", to_json(o.dp_tilde)},
              {"affinity", to_json(o.affinity)},       {"bc", to_json(o.bc)},
              {"tv", to_json(o.tv)},                   {"chernoff", to_json(o.chernoff)},
              {"chernoff_alpha", o.alpha}};
}

// Reads {mean0, mean1, cov0, cov1, prior_p}; covariances are row arrays.
inline GaussianModel gaussian_model_from_json(const Json& j) {
  auto vec = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_array()) {
      throw InvalidArgument(std::string("model JSON: missing array '") + key + "'");
    }
    const auto v = j[key].get<std::vector<double>>();
    return Vector(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  auto mat = [&](const char* key, Eigen::Index d) {
    if (!j.contains(key) || !j[key].is_array()) {
      throw InvalidArgument(std::string("model JSON: missing matrix '") + key + "'");
    }
    const auto rows = j[key].get<std::vector<std::vector<double>>>();
    if (static_cast<Eigen::Index>(rows.size()) != d) {
      throw InvalidArgument(std::string("model JSON: '") + key + "' has wrong row count");
    }
    Matrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != d) {
        throw InvalidArgument(std::string("model JSON: '") + key + "' is not square");
      }
      for (Eigen::Index c = 0; c < d; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return m;
  };
  try {
    GaussianModel m;
    m.mean0 = vec("mean0");
    m.mean1 = vec("mean1");
    m.cov0 = mat("cov0", m.mean0.size());
    m.cov1 = mat("cov1", m.mean0.size());
    m.prior_p = j.value("prior_p", 0.5);
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("model JSON: ") + e.what());
  }
}

inline GaussianModel load_gaussian_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open model file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("model file '" + path + "' is not valid JSON: " + e.what());
  }
  return gaussian_model_from_json(j);
}

inline Json to_json(const GaussianModel& m) {
  auto rows = [](const Matrix& c) {
    std::vector<std::vector<double>> out(static_cast<std::size_t>(c.rows()));
    for (Eigen::Index r = 0; r < c.rows(); ++r) {
      for (Eigen::Index k = 0; k < c.cols(); ++k) out[static_cast<std::size_t>(r)].push_back(c(r, k));
    }
    return out;
  };
  return Json{{"mean0", std::vector<double>(m.mean0.data(), m.mean0.data() + m.mean0.size())},
              {"mean1", std::vector<double>(m.mean1.data(), m.mean1.data() + m.mean1.size())},
              {"cov0", rows(m.cov0)},
              {"cov1", rows(m.cov1)},
              {"prior_p", m.prior_p}};
}

// --- CSV ---------------------------------------------------------------

namespace detail {
inline std::ostream& csv_num(std::ostream& out, double v) { return out << format_double(v); }
}  // namespace detail

inline std::string mst_to_csv(const MstResult& mst) {
  std::ostringstream out;
  out << "i,j,length\n";
  for (const auto& e : mst.edges) {
    out << e.i << ',' << e.j << ',';
    detail::csv_num(out, e.length) << '\n';
  }
  return out.str();
}

inline std::string sweep_to_csv(const SweepResult& r) {
  std::ostringstream out;
  out << "separation,ber_true,dp_upper_analytic,dp_lower_analytic,dp_upper_empirical_mean,"
         "dp_lower_empirical_mean,bc_upper,bc_lower,n_per_class,n_trials\n";
  for (const auto& row : r.rows) {
    for (double v : {row.separation, row.ber_true, row.dp_upper_analytic, row.dp_lower_analytic,
                     row.dp_upper_empirical_mean, row.dp_lower_empirical_mean, row.bc_upper,
                     row.bc_lower}) {
      detail::csv_num(out, v) << ',';
    }
    out << row.n_per_class << ',' << row.n_trials << '\n';
  }
  return out.str();
}

inline std::string trials_to_csv(const McSummary& s, const std::string& column) {
  std::ostringstream out;
  out << "trial," << column << '\n';
  for (std::size_t t = 0; t < s.values.size(); ++t) {
    out << t << ',';
    detail::csv_num(out, s.values[t]) << '\n';
  }
  return out.str();
}

inline std::string selection_to_csv(const SelectionTrace& t, const std::vector<std::string>& names) {
  std::ostringstream out;
  out << "step,feature_name,phi\n";
  for (std::size_t s = 0; s < t.selected.size(); ++s) {
    const auto f = t.selected[s];
    out << s + 1 << ',' << (f < names.size() ? names[f] : "x" + std::to_string(f)) << ',';
    detail::csv_num(out, t.criterion_values[s]) << '\n';
  }
  return out.str();
}

// --- SVG ---------------------------------------------------------------

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;
};

// Self-contained line plot: axes with ticks, one polyline per series and a
// legend. No external assets.
inline std::string svg_line_plot(const std::string& title, const std::string& x_label,
                                 const std::string& y_label, const std::vector<PlotSeries>& series) {
  constexpr double kW = 720, kH = 480, kLeft = 70, kRight = 190, kTop = 40, kBottom = 55;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (double v : s.x) xmin = std::min(xmin, v), xmax = std::max(xmax, v);
    for (double v : s.y) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  ymin = std::min(ymin, 0.0);
  if (ymax == ymin) ymax = ymin + 1;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - ymin) / (ymax - ymin) * ph; };
  auto esc = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '<') o += "&lt;";
      else if (c == '>') o += "&gt;";
      else if (c == '&') o += "&amp;";
      else o += c;
    }
    return o;
  };

  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"15\">" << esc(title) << "</text>\n";
  out << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\""
      << kTop + ph << "\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
      << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 5.0;
    const double yv = ymin + (ymax - ymin) * k / 5.0;
    out << "<line x1=\"" << sx(xv) << "\" y1=\"" << kTop + ph << "\" x2=\"" << sx(xv) << "\" y2=\""
        << kTop + ph + 5 << "\" stroke=\"black\"/>"
        << "<text x=\"" << sx(xv) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
        << std::setprecision(3) << std::defaultfloat << xv << std::fixed << std::setprecision(2)
        << "</text>\n";
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy(yv) << "\" x2=\"" << kLeft << "\" y2=\""
        << sy(yv) << "\" stroke=\"black\"/>"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">"
        << std::setprecision(3) << std::defaultfloat << yv << std::fixed << std::setprecision(2)
        << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">"
      << esc(x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kTop + ph / 2 << ")\">" << esc(y_label) << "</text>\n</g>\n";

  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const std::string color = s.color.empty() ? kPalette[i % 8] : s.color;
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      out << (k ? " " : "") << sx(s.x[k]) << ',' << sy(s.y[k]);
    }
    out << "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(i);
    out << "<line x1=\"" << kLeft + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 40
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>"
        << "<text x=\"" << kLeft + pw + 46 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << esc(s.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

inline std::string sweep_to_svg(const SweepResult& r) {
  std::vector<PlotSeries> s(7);
  const char* labels[] = {"Bayes error",      "Dp upper (analytic)", "Dp lower (analytic)",
                          "Dp upper (empirical)", "Dp lower (empirical)", "BC upper", "BC lower"};
  for (std::size_t i = 0; i < s.size(); ++i) s[i].label = labels[i];
  for (const auto& row : r.rows) {
    const double ys[] = {row.ber_true,
                         row.dp_upper_analytic,
                         row.dp_lower_analytic,
                         row.dp_upper_empirical_mean,
                         row.dp_lower_empirical_mean,
                         row.bc_upper,
                         row.bc_lower};
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i].x.push_back(row.separation);
      s[i].y.push_back(ys[i]);
    }
  }
  return svg_line_plot("Bounds on the Bayes error, bivariate Gaussians", "mean separation",
                       "error rate", s);
}

}  // namespace dpbounds

#endif  // DPBOUNDS_REPORT_HPP_
