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

#ifndef DPBOUNDS_DATASET_HPP_
#define DPBOUNDS_DATASET_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ios>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dpbounds/error.hpp"
#include "dpbounds/rng.hpp"

namespace dpbounds {

// Row-major so each point is contiguous in memory.
using PointMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

namespace detail {

inline bool all_finite(const PointMatrix& m) {
  return std::all_of(m.data(), m.data() + m.size(),
                     [](double v) { return std::isfinite(v); });
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

inline bool parse_double(std::string_view token, double& out) {
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace detail

// N x d points with binary labels. Immutable after construction.
class LabeledSample {
 public:
  LabeledSample(PointMatrix points, std::vector<int> labels,
                std::vector<std::string> feature_names = {})
      : points_(std::move(points)),
        labels_(std::move(labels)),
        feature_names_(std::move(feature_names)) {
    if (points_.rows() < 1 || points_.cols() < 1) {
      throw InvalidArgument("LabeledSample needs at least one row and one column");
    }
    if (static_cast<Eigen::Index>(labels_.size()) != points_.rows()) {
      throw InvalidArgument("LabeledSample: " + std::to_string(labels_.size()) +
                            " labels for " + std::to_string(points_.rows()) + " rows");
    }
    for (std::size_t r = 0; r < labels_.size(); ++r) {
      if (labels_[r] != 0 && labels_[r] != 1) {
        throw InvalidArgument("LabeledSample: label " + std::to_string(labels_[r]) +
                              " at row " + std::to_string(r) + " is not 0 or 1");
      }
    }
    if (!detail::all_finite(points_)) {
      throw InvalidArgument("LabeledSample: non-finite coordinate");
    }
    if (!feature_names_.empty()) {
      if (static_cast<Eigen::Index>(feature_names_.size()) != points_.cols()) {
        throw InvalidArgument("LabeledSample: feature_names length differs from d");
      }
      std::set<std::string> unique(feature_names_.begin(), feature_names_.end());
      if (unique.size() != feature_names_.size()) {
        throw InvalidArgument("LabeledSample: duplicate feature name");
      }
    }
  }

  const PointMatrix& points() const { return points_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t dimension() const { return static_cast<std::size_t>(points_.cols()); }

  std::size_t count(int label) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
  }

  // Rows carrying `label`, in file order.
  PointMatrix rows_with_label(int label) const {
    PointMatrix out(static_cast<Eigen::Index>(count(label)), points_.cols());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < points_.rows(); ++r) {
      if (labels_[static_cast<std::size_t>(r)] == label) out.row(k++) = points_.row(r);
    }
    return out;
  }

  // Name of column `j`, synthesised as x<j> when the sample has no names.
  std::string feature_name(std::size_t j) const {
    return feature_names_.empty() ? "x" + std::to_string(j) : feature_names_.at(j);
  }

  // Number of rows that exactly repeat an earlier row. Duplicates are legal
  // but make the spanning tree depend on the tie rule.
  std::size_t duplicate_row_count() const {
    std::vector<std::vector<double>> rows;
    rows.reserve(size());
    for (Eigen::Index r = 0; r < points_.rows(); ++r) {
      rows.emplace_back(points_.row(r).data(), points_.row(r).data() + points_.cols());
    }
    std::sort(rows.begin(), rows.end());
    std::size_t dups = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) dups += rows[r] == rows[r - 1];
    return dups;
  }

  friend bool operator==(const LabeledSample& a, const LabeledSample& b) {
    return a.points_.rows() == b.points_.rows() && a.points_.cols() == b.points_.cols() &&
           a.points_ == b.points_ && a.labels_ == b.labels_ &&
           a.feature_names_ == b.feature_names_;
  }

 private:
  PointMatrix points_;
  std::vector<int> labels_;
  std::vector<std::string> feature_names_;
};

// Two Gaussian class-conditionals with the prior of class 0.
struct GaussianModel {
  Vector mean0;
  Vector mean1;
  Matrix cov0;
  Matrix cov1;
  double prior_p = 0.5;

  std::size_t dimension() const { return static_cast<std::size_t>(mean0.size()); }
  double prior_q() const { return 1.0 - prior_p; }

  void validate() const {
    const auto d = mean0.size();
    if (d < 1) throw InvalidArgument("GaussianModel: empty mean vector");
    if (mean1.size() != d || cov0.rows() != d || cov0.cols() != d || cov1.rows() != d ||
        cov1.cols() != d) {
      throw InvalidArgument("GaussianModel: inconsistent dimensions");
    }
    if (!(prior_p > 0.0 && prior_p < 1.0)) {
      throw InvalidArgument("GaussianModel: prior_p must lie strictly inside (0,1)");
    }
    if (!mean0.allFinite() || !mean1.allFinite() || !cov0.allFinite() || !cov1.allFinite()) {
      throw InvalidArgument("GaussianModel: non-finite parameter");
    }
    check_covariance(cov0, "cov0");
    check_covariance(cov1, "cov1");
  }

  static void check_covariance(const Matrix& cov, const char* name) {
    const double scale = std::max(cov.cwiseAbs().maxCoeff(), 1e-300);
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw InvalidArgument(std::string("GaussianModel: ") + name + " is not symmetric");
    }
    const double min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(cov, Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .minCoeff();
    if (!(min_eig > 0.0)) {
      std::ostringstream msg;
      msg << "GaussianModel: " << name
          << " is not positive definite (smallest eigenvalue " << min_eig << ")";
      throw NumericalError(msg.str());
    }
  }
};

// Identity-covariance model with the given means.
inline GaussianModel isotropic_model(Vector mean0, Vector mean1, double prior_p = 0.5) {
  const auto d = mean0.size();
  GaussianModel m{std::move(mean0), std::move(mean1), Matrix::Identity(d, d),
                  Matrix::Identity(d, d), prior_p};
  m.validate();
  return m;
}

// Fukunaga's 8-D benchmark pairs (class 0 standard normal).
enum class FukunagaDataset { kD1, kD2 };

// How the D2 per-coordinate sigma values are read. The usual closed-form
// Bhattacharyya and Mahalanobis figures and the true Bayes error of D2 go
// with variances; the usual Monte Carlo Dp figures come out when the same
// numbers are used as standard deviations. D1 is unaffected.
enum class SigmaReading { kVariance, kStdDev };

inline GaussianModel fukunaga_model(FukunagaDataset which,
                                    SigmaReading reading = SigmaReading::kVariance) {
  Vector mean1 = Vector::Zero(8);
  Vector sigma1 = Vector::Ones(8);
  if (which == FukunagaDataset::kD1) {
    mean1(0) = 2.56;
  } else {
    mean1 << 3.86, 3.10, 0.84, 0.84, 1.64, 1.08, 0.26, 0.01;
    sigma1 << 8.41, 12.06, 0.12, 0.22, 1.49, 1.77, 0.35, 2.73;
  }
  const Vector var1 = reading == SigmaReading::kVariance ? sigma1 : Vector(sigma1.array().square());
  GaussianModel m{Vector::Zero(8), mean1, Matrix::Identity(8, 8),
                  Matrix(var1.asDiagonal()), 0.5};
  m.validate();
  return m;
}

// Draws n0 rows from class 0 then n1 rows from class 1. Each class uses its
// own stream derived from `seed`, via Cholesky factor times N(0, I).
inline LabeledSample sample_gaussian(const GaussianModel& model, std::size_t n0,
                                     std::size_t n1, std::uint64_t seed) {
  model.validate();
  if (n0 < 1 || n1 < 1) throw InvalidArgument("sample_gaussian: n0 and n1 must be >= 1");
  const auto d = static_cast<Eigen::Index>(model.dimension());
  PointMatrix points(static_cast<Eigen::Index>(n0 + n1), d);
  std::vector<int> labels(n0 + n1, 0);

  auto fill = [&](const Vector& mean, const Matrix& cov, Eigen::Index begin, std::size_t n,
                  std::uint64_t stream) {
    const Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success) GaussianModel::check_covariance(cov, "covariance");
    const Matrix lower = llt.matrixL();
    Rng rng = make_rng(derive_seed(seed, stream));
    std::normal_distribution<double> normal;
    Vector z(d);
    for (std::size_t r = 0; r < n; ++r) {
      for (Eigen::Index k = 0; k < d; ++k) z(k) = normal(rng);
      points.row(begin + static_cast<Eigen::Index>(r)) = (mean + lower * z).transpose();
    }
  };
  fill(model.mean0, model.cov0, 0, n0, 0);
  fill(model.mean1, model.cov1, static_cast<Eigen::Index>(n0), n1, 1);
  std::fill(labels.begin() + static_cast<std::ptrdiff_t>(n0), labels.end(), 1);
  return LabeledSample(std::move(points), std::move(labels));
}

// Columns `features` of `points`, in the given order.
inline PointMatrix select_columns(const PointMatrix& points,
                                  std::span<const std::size_t> features) {
  PointMatrix out(points.rows(), static_cast<Eigen::Index>(features.size()));
  for (std::size_t k = 0; k < features.size(); ++k) {
    if (features[k] >= static_cast<std::size_t>(points.cols())) {
      throw InvalidArgument("feature index " + std::to_string(features[k]) +
                            " out of range for d=" + std::to_string(points.cols()));
    }
    out.col(static_cast<Eigen::Index>(k)) = points.col(static_cast<Eigen::Index>(features[k]));
  }
  return out;
}

inline LabeledSample project(const LabeledSample& sample,
                             std::span<const std::size_t> features) {
  if (features.empty()) throw InvalidArgument("project: empty feature set");
  std::set<std::size_t> seen(features.begin(), features.end());
  if (seen.size() != features.size()) throw InvalidArgument("project: repeated feature index");
  PointMatrix pts = select_columns(sample.points(), features);
  std::vector<std::string> names;
  if (!sample.feature_names().empty()) {
    for (auto f : features) names.push_back(sample.feature_names()[f]);
  }
  return LabeledSample(std::move(pts), sample.labels(), std::move(names));
}

// Label column selector: a header name or a zero-based column index.
using LabelColumn = std::variant<std::string, std::size_t>;

namespace detail {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
};

inline CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open CSV file '" + path + "'");
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (trim(line).empty()) continue;
    auto cells = split_commas(line);
    std::vector<std::string> owned(cells.begin(), cells.end());
    if (table.header.empty()) {
      table.header = std::move(owned);
      continue;
    }
    if (owned.size() != table.header.size()) {
      throw InvalidArgument(path + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(table.header.size()) + " columns, found " +
                            std::to_string(owned.size()));
    }
    table.rows.push_back(std::move(owned));
    table.line_numbers.push_back(line_no);
  }
  if (in.bad()) throw InvalidArgument("I/O error reading '" + path + "'");
  if (table.header.empty()) throw InvalidArgument("CSV file '" + path + "' is empty");
  if (table.rows.empty()) throw InvalidArgument("CSV file '" + path + "' has no data rows");
  return table;
}

inline std::size_t resolve_column(const CsvTable& table, const LabelColumn& column,
                                  const std::string& path) {
  if (const auto* index = std::get_if<std::size_t>(&column)) {
    if (*index >= table.header.size()) {
      throw InvalidArgument("label column index " + std::to_string(*index) +
                            " out of range in '" + path + "'");
    }
    return *index;
  }
  const auto& name = std::get<std::string>(column);
  const auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end()) {
    throw InvalidArgument("label column '" + name + "' not found in '" + path + "'");
  }
  return static_cast<std::size_t>(it - table.header.begin());
}

inline double parse_cell(const CsvTable& table, std::size_t r, std::size_t c,
                         const std::string& path) {
  double v = 0.0;
  if (!parse_double(table.rows[r][c], v)) {
    throw InvalidArgument(path + ":" + std::to_string(table.line_numbers[r]) +
                          ": non-numeric value '" + table.rows[r][c] + "' in column '" +
                          table.header[c] + "'");
  }
  return v;
}

}  // namespace detail

inline LabeledSample load_csv(const std::string& path,
                              const LabelColumn& label_column = std::string("label")) {
  const auto table = detail::read_csv_table(path);
  const auto label_col = detail::resolve_column(table, label_column, path);
  const auto d = table.header.size() - 1;
  if (d < 1) throw InvalidArgument("CSV file '" + path + "' has no feature columns");

  PointMatrix points(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(d));
  std::vector<int> labels(table.rows.size());
  std::vector<std::string> names;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c != label_col) names.push_back(table.header[c]);
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double label = detail::parse_cell(table, r, label_col, path);
    if (label != 0.0 && label != 1.0) {
      throw InvalidArgument(path + ":" + std::to_string(table.line_numbers[r]) +
                            ": label '" + table.rows[r][label_col] + "' is not 0 or 1");
    }
    labels[r] = static_cast<int>(label);
    Eigen::Index k = 0;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c == label_col) continue;
      points(static_cast<Eigen::Index>(r), k++) = detail::parse_cell(table, r, c, path);
    }
  }
  return LabeledSample(std::move(points), std::move(labels), std::move(names));
}

// Unlabeled point cloud: every column is a feature. If `drop_column` names a
// header entry it is skipped (lets a labeled file serve as target data).
struct PointTable {
  PointMatrix points;
  std::vector<std::string> names;
};

inline PointTable load_points_csv(const std::string& path, const std::string& drop_column = "") {
  const auto table = detail::read_csv_table(path);
  std::vector<std::size_t> keep;
  PointTable out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (!drop_column.empty() && table.header[c] == drop_column) continue;
    keep.push_back(c);
    out.names.push_back(table.header[c]);
  }
  if (keep.empty()) throw InvalidArgument("CSV file '" + path + "' has no feature columns");
  out.points.resize(static_cast<Eigen::Index>(table.rows.size()),
                    static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t k = 0; k < keep.size(); ++k) {
      out.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          detail::parse_cell(table, r, keep[k], path);
    }
  }
  return out;
}

// Writes features followed by a `label` column, 17 significant digits.
inline void write_csv(std::ostream& out, const LabeledSample& sample,
                      const std::string& label_name = "label") {
  for (std::size_t j = 0; j < sample.dimension(); ++j) out << sample.feature_name(j) << ',';
  out << label_name << '\n';
  out << std::setprecision(17);
  for (std::size_t r = 0; r < sample.size(); ++r) {
    for (std::size_t j = 0; j < sample.dimension(); ++j) {
      out << sample.points()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) << ',';
    }
    out << sample.labels()[r] << '\n';
  }
}

// Per-column z-scoring fitted on `reference`; returns {mean, stddev}.
// Constant columns keep unit scale.
inline std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd> fit_standardizer(
    const PointMatrix& reference) {
  const Eigen::RowVectorXd mean = reference.colwise().mean();
  Eigen::RowVectorXd scale(reference.cols());
  for (Eigen::Index j = 0; j < reference.cols(); ++j) {
    const double var = reference.rows() > 1
                           ? (reference.col(j).array() - mean(j)).square().sum() /
                                 static_cast<double>(reference.rows() - 1)
                           : 0.0;
    scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  return {mean, scale};
}

inline PointMatrix apply_standardizer(const PointMatrix& points,
                                      const std::pair<Eigen::RowVectorXd, Eigen::RowVectorXd>& s) {
  PointMatrix out = points;
  out.rowwise() -= s.first;
  out.array().rowwise() /= s.second.array();
  return out;
}

// Adds uniform noise of magnitude 1e-9 x (largest |coordinate| in the
// column) so that, almost surely, no two pairwise distances tie.
inline void add_jitter(PointMatrix& points, std::uint64_t seed) {
  Rng rng = make_rng(derive_seed(seed, 0x717E5));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    double scale = points.col(j).cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) scale = 1.0;
    for (Eigen::Index r = 0; r < points.rows(); ++r) points(r, j) += 1e-9 * scale * unit(rng);
  }
}

inline PointMatrix vstack(const PointMatrix& top, const PointMatrix& bottom) {
  if (top.cols() != bottom.cols()) throw InvalidArgument("vstack: dimension mismatch");
  PointMatrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

}  // namespace dpbounds

#endif  // DPBOUNDS_DATASET_HPP_
