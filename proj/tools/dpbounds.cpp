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

// Command-line front end: estimation, bounds, feature selection, the
// benchmark experiments and the integration oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpbounds/dpbounds.hpp"

namespace {

using namespace dpbounds;
namespace fs = std::filesystem;

struct Common {
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;
  std::vector<std::string> formats;

  bool wants(const std::string& fmt) const {
    return formats.empty() || std::find(formats.begin(), formats.end(), fmt) != formats.end();
  }

  // Writes `content` to <out>/<name> when an output directory was given.
  void emit(const std::string& name, const std::string& fmt, const std::string& content) const {
    if (out_dir.empty() || !wants(fmt)) return;
    write_file_atomic(fs::path(out_dir) / name, content);
  }
};

void warn(const std::string& msg) { std::cerr << "warning: " << msg << '\n'; }

GaussianModel load_model_checked(const std::string& path) {
  try {
    return load_gaussian_model(path);
  } catch (const NumericalError& e) {
    throw InvalidArgument(e.what());
  }
}

LabeledSample load_labeled(const std::string& path, const std::string& label_column) {
  auto sample = load_csv(path, label_column);
  if (const auto dups = sample.duplicate_row_count(); dups > 0) {
    warn(path + " contains " + std::to_string(dups) +
         " duplicate rows; spanning-tree ties are broken by index (see --jitter)");
  }
  return sample;
}

PointMatrix maybe_jitter(PointMatrix pts, bool jitter, std::uint64_t seed) {
  if (jitter) add_jitter(pts, seed);
  return pts;
}

// --- subcommands -----------------------------------------------------------

struct EstimateArgs {
  std::string a, b, input, label_column = "label";
  bool jitter = false;
};

int run_estimate(const Common& common, const EstimateArgs& args) {
  DivergenceEstimate est;
  if (!args.input.empty()) {
    if (!args.a.empty() || !args.b.empty()) {
      throw InvalidArgument("--input cannot be combined with --a/--b");
    }
    const auto sample = load_labeled(args.input, args.label_column);
    const auto all = maybe_jitter(sample.points(), args.jitter, common.seed);
    est = estimate_from_labeled(LabeledSample(all, sample.labels()));
  } else {
    if (args.a.empty() || args.b.empty()) {
      throw InvalidArgument("estimate needs either --input or both --a and --b");
    }
    auto f = load_points_csv(args.a, args.label_column).points;
    auto g = load_points_csv(args.b, args.label_column).points;
    auto pooled = maybe_jitter(vstack(f, g), args.jitter, common.seed);
    est = estimate(pooled.topRows(f.rows()), pooled.bottomRows(g.rows()));
  }
  Json j{{"schema", kSchemaVersion}};
  j.update(to_json(est));
  const auto text = dump_json(j);
  std::cout << text;
  common.emit("estimate.json", "json", text);
  return 0;
}

struct BoundsArgs {
  std::string source, target, model, label_column = "label";
  double label_drift = 0.0;
  std::optional<double> source_error;
  bool jitter = false;
};

int run_bounds(const Common& common, const BoundsArgs& args) {
  const auto sample = load_labeled(args.source, args.label_column);
  const auto points = maybe_jitter(sample.points(), args.jitter, common.seed);
  const auto source_est = estimate_from_labeled(LabeledSample(points, sample.labels()));
  const auto dp = ber_bounds_from_estimate(source_est);

  Json j{{"schema", kSchemaVersion}};
  j["estimate"] = to_json(source_est);
  j["dp_bounds"] = Json{{"lower", dp.lower}, {"upper", dp.upper}};
  if (!args.model.empty()) {
    const auto model = load_model_checked(args.model);
    if (model.dimension() != sample.dimension()) {
      throw InvalidArgument("model dimension differs from the source CSV");
    }
    const auto bc = bc_bound_gaussian(model);
    const auto mah = mahalanobis_bound_gaussian(model);
    j["bc"] = Json{{"lower", bc.lower}, {"upper", bc.upper}};
    j["mahalanobis"] = Json{{"lower", mah.lower}, {"upper", mah.upper}};
  } else {
    j["bc"] = nullptr;
    j["mahalanobis"] = nullptr;
  }
  if (!args.target.empty()) {
    auto target = load_points_csv(args.target, args.label_column);
    if (target.points.cols() != points.cols()) {
      throw InvalidArgument("target CSV has " + std::to_string(target.points.cols()) +
                            " feature columns, source has " + std::to_string(points.cols()));
    }
    const auto shift_est = estimate(points, maybe_jitter(target.points, args.jitter,
                                                         derive_seed(common.seed, 1)));
    if (shift_est.imbalanced()) {
      warn("source and target sizes are unbalanced (p_hat = " + std::to_string(shift_est.p_hat) +
           "); the shift term assumes equiprobable domains");
    }
    const auto da = da_bound(source_est, shift_est, args.label_drift, args.source_error);
    j["da"] = to_json(da);
    j["shift_estimate"] = to_json(shift_est);
  } else {
    j["da"] = nullptr;
  }
  const auto text = dump_json(j);
  std::cout << text;
  common.emit("bounds.json", "json", text);
  return 0;
}

struct SelectArgs {
  std::string source, target, label_column = "label";
  std::optional<std::size_t> k;
  double shift_weight = 0.0;
  bool audit = false;
  bool standardize = false;
};

int run_select(const Common& common, const SelectArgs& args) {
  const auto sample = load_labeled(args.source, args.label_column);
  for (int label : {0, 1}) {
    if (sample.count(label) == 0) {
      throw InvalidArgument("source has no rows with label " + std::to_string(label));
    }
  }
  SelectionData data{sample.rows_with_label(0), sample.rows_with_label(1), std::nullopt};
  if (!args.target.empty()) {
    data.target = load_points_csv(args.target, args.label_column).points;
  }
  if (args.shift_weight > 0.0 && !data.target) {
    throw InvalidArgument("--shift-weight > 0 requires --target");
  }
  if (args.standardize) data = standardize_features(data);
  const std::size_t k = args.k.value_or(default_selection_size(sample.dimension()));
  const auto trace = forward_select(data, k, args.shift_weight, args.audit);

  std::vector<std::string> names;
  for (std::size_t f = 0; f < sample.dimension(); ++f) names.push_back(sample.feature_name(f));
  Json j{{"schema", kSchemaVersion}};
  j.update(to_json(trace, names));
  const auto text = dump_json(j);
  std::cout << text;
  common.emit("selection.json", "json", text);
  common.emit("selection.csv", "csv", selection_to_csv(trace, names));
  return 0;
}

struct SweepArgs {
  std::size_t steps = 150, n = 300, trials = 10;
};

int run_sweep_cmd(const Common& common, const SweepArgs& args) {
  const auto result = run_sweep(args.steps, args.n, args.trials, common.seed);
  Json rows = Json::array();
  double mad = 0.0;
  for (const auto& r : result.rows) {
    rows.push_back(to_json(r));
    mad += std::abs(r.dp_upper_empirical_mean - r.dp_upper_analytic);
  }
  mad /= static_cast<double>(result.rows.size());
  Json j{{"schema", kSchemaVersion},
         {"n_steps", args.steps},
         {"n_per_class", args.n},
         {"n_trials", args.trials},
         {"seed", common.seed},
         {"dp_upper_mean_abs_deviation", mad},
         {"rows", rows}};
  const auto text = dump_json(j);
  std::cout << text;
  common.emit("sweep.json", "json", text);
  common.emit("sweep.csv", "csv", sweep_to_csv(result));
  common.emit("sweep.svg", "svg", sweep_to_svg(result));
  return 0;
}

struct FukunagaArgs {
  std::string dataset = "D1";
  std::string sigma = "stddev";
  std::size_t n = 1000, trials = 50;
};

int run_fukunaga_cmd(const Common& common, const FukunagaArgs& args) {
  const auto which = args.dataset == "D1" ? FukunagaDataset::kD1 : FukunagaDataset::kD2;
  const auto reading = args.sigma == "variance" ? SigmaReading::kVariance : SigmaReading::kStdDev;
  // Closed forms always use the variance reading of the sigma row.
  const auto model = fukunaga_model(which, SigmaReading::kVariance);
  const auto summary = run_fukunaga(which, args.n, args.trials, common.seed, reading);
  Json j{{"schema", kSchemaVersion},
         {"dataset", args.dataset},
         {"n_per_class", args.n},
         {"sigma_reading", args.sigma},
         {"seed", common.seed},
         {"dp_upper", to_json(summary)},
         {"bhattacharyya_upper", bc_bound_gaussian(model).upper},
         {"mahalanobis_upper", mahalanobis_bound_gaussian(model).upper}};
  const auto text = dump_json(j);
  std::cout << text;
  common.emit("fukunaga.json", "json", text);
  common.emit("fukunaga.csv", "csv", trials_to_csv(summary, "dp_upper"));
  std::vector<double> xs;
  for (std::size_t t = 0; t < summary.values.size(); ++t) xs.push_back(static_cast<double>(t));
  common.emit("fukunaga.svg", "svg",
              svg_line_plot("Dp upper bound per trial, " + args.dataset, "trial", "error rate",
                            {{"Dp upper", xs, summary.values, ""},
                             {"mean", {0.0, xs.empty() ? 0.0 : xs.back()},
                              {summary.mean, summary.mean}, ""}}));
  return 0;
}

struct ConsistencyArgs {
  std::string model;
  std::vector<std::size_t> sizes{100, 400, 1600};
  std::size_t trials = 20;
};

int run_consistency_cmd(const Common& common, const ConsistencyArgs& args) {
  const auto model = args.model.empty() ? sweep_model(2.0) : load_model_checked(args.model);
  const auto result = run_consistency(model, args.sizes, args.trials, common.seed);
  Json per_size = Json::array();
  std::ostringstream csv;
  csv << "size,trial,abs_error\n";
  std::vector<double> xs;
  std::vector<double> medians;
  for (std::size_t s = 0; s < result.sizes.size(); ++s) {
    const auto& summary = result.summaries[s];
    Json entry{{"size", result.sizes[s]}, {"median_abs_error", median(summary.values)}};
    entry.update(to_json(summary));
    per_size.push_back(entry);
    for (std::size_t t = 0; t < summary.values.size(); ++t) {
      csv << result.sizes[s] << ',' << t << ',' << detail::format_double(summary.values[t]) << '\n';
    }
    xs.push_back(static_cast<double>(result.sizes[s]));
    medians.push_back(median(summary.values));
  }
  Json j{{"schema", kSchemaVersion},
         {"seed", common.seed},
         {"oracle_dp_tilde", result.oracle_dp_tilde},
         {"sizes", per_size}};
  const auto text = dump_json(j);
  std::cout << text;
  common.emit("consistency.json", "json", text);
  common.emit("consistency.csv", "csv", csv.str());
  common.emit("consistency.svg", "svg",
              svg_line_plot("Estimator consistency", "points per class", "median |error|",
                            {{"median |dp_tilde - oracle|", xs, medians, ""}}));
  return 0;
}

struct OracleArgs {
  std::string model;
  double alpha = 0.5;
  std::size_t mc_samples = 1'000'000;
};

int run_oracle_cmd(const Common& common, const OracleArgs& args) {
  const auto model = load_model_checked(args.model);
  OracleOptions opt;
  opt.seed = common.seed;
  opt.mc_samples = args.mc_samples;
  const auto result = all_integrals(gaussian_pair(model), args.alpha, opt);
  Json j{{"schema", kSchemaVersion}};
  j.update(to_json(result));
  const auto text = dump_json(j);
  std::cout << text;
  common.emit("oracle.json", "json", text);
  return 0;
}

struct MstDumpArgs {
  std::string input, label_column = "label";
  bool jitter = false;
};

int run_mst_dump(const Common& common, const MstDumpArgs& args) {
  auto pts = load_points_csv(args.input, args.label_column).points;
  const auto mst = build_mst(maybe_jitter(std::move(pts), args.jitter, common.seed));
  const auto text = mst_to_csv(mst);
  std::cout << text;
  common.emit("mst.csv", "csv", text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpbounds: MST-based divergence estimates and Bayes error bounds"};
  app.require_subcommand(1);
  app.fallthrough();
  app.get_formatter()->column_width(40);

  Common common;
  app.add_option("--seed", common.seed, "64-bit master seed")->capture_default_str();
  app.add_option("--out", common.out_dir, "Directory for output files (written atomically)");
  app.add_option("--format", common.formats, "Output formats to write under --out (default: all)")
      ->check(CLI::IsMember({"json", "csv", "svg"}))
      ->delimiter(',');

  EstimateArgs est;
  auto* estimate_cmd = app.add_subcommand("estimate", "Friedman-Rafsky divergence estimate");
  estimate_cmd->add_option("--a", est.a, "CSV of sample f (all columns are features)");
  estimate_cmd->add_option("--b", est.b, "CSV of sample g");
  estimate_cmd->add_option("--input", est.input, "Labeled CSV; class 0 plays f");
  estimate_cmd->add_option("--label-column", est.label_column, "Label column name")->capture_default_str();
  estimate_cmd->add_flag("--jitter", est.jitter, "Add seeded 1e-9 relative jitter to break ties");

  BoundsArgs bnd;
  auto* bounds_cmd = app.add_subcommand("bounds", "Bayes error and domain-adaptation bounds");
  bounds_cmd->add_option("--source", bnd.source, "Labeled source CSV")->required();
  bounds_cmd->add_option("--target", bnd.target, "Unlabeled target CSV");
  bounds_cmd->add_option("--model", bnd.model, "Gaussian model JSON for closed-form bounds");
  bounds_cmd->add_option("--label-column", bnd.label_column, "Label column name")->capture_default_str();
  bounds_cmd->add_option("--label-drift", bnd.label_drift, "E|y_S - y_T| term")->capture_default_str();
  bounds_cmd->add_option("--source-error", bnd.source_error,
                         "Measured source error replacing the Bayes upper bound");
  bounds_cmd->add_flag("--jitter", bnd.jitter, "Add seeded 1e-9 relative jitter to break ties");

  SelectArgs sel;
  auto* select_cmd = app.add_subcommand("select", "Greedy forward feature selection");
  select_cmd->add_option("--source", sel.source, "Labeled source CSV")->required();
  select_cmd->add_option("--target", sel.target, "Unlabeled target CSV");
  select_cmd->add_option("--k", sel.k, "Number of features (default min(20, d))");
  select_cmd->add_option("--shift-weight", sel.shift_weight, "Weight of the domain-shift term")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  select_cmd->add_option("--label-column", sel.label_column, "Label column name")->capture_default_str();
  select_cmd->add_flag("--audit", sel.audit, "Record every candidate criterion value");
  select_cmd->add_flag("--standardize", sel.standardize, "z-score features before selection");

  SweepArgs swp;
  auto* sweep_cmd = app.add_subcommand("sweep", "Bounds versus mean separation (bivariate Gaussians)");
  sweep_cmd->add_option("--steps", swp.steps, "Number of separations in [0, 5]")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000));
  sweep_cmd->add_option("--n", swp.n, "Points per class per trial")->capture_default_str();
  sweep_cmd->add_option("--trials", swp.trials, "Trials per separation")->capture_default_str();

  FukunagaArgs fk;
  auto* fukunaga_cmd = app.add_subcommand("fukunaga", "Dp upper bound on the 8-D Gaussian benchmarks");
  fukunaga_cmd->add_option("--dataset", fk.dataset, "D1 or D2")
      ->capture_default_str()
      ->check(CLI::IsMember({"D1", "D2"}));
  fukunaga_cmd->add_option("--sigma", fk.sigma,
                            "Read the D2 sigma row as stddev or variance when sampling")
      ->capture_default_str()
      ->check(CLI::IsMember({"stddev", "variance"}));
  fukunaga_cmd->add_option("--n", fk.n, "Points per class")->capture_default_str();
  fukunaga_cmd->add_option("--trials", fk.trials, "Monte Carlo trials")->capture_default_str();

  ConsistencyArgs cons;
  auto* consistency_cmd = app.add_subcommand("consistency", "Estimator error versus sample size");
  consistency_cmd->add_option("--model", cons.model,
                              "Gaussian model JSON (default: unit bivariate pair at separation 2)");
  consistency_cmd->add_option("--sizes", cons.sizes, "Ascending points per class")
      ->capture_default_str()
      ->delimiter(',');
  consistency_cmd->add_option("--trials", cons.trials, "Trials per size")->capture_default_str();

  OracleArgs orc;
  auto* oracle_cmd = app.add_subcommand("oracle", "Reference integrals for a Gaussian model");
  oracle_cmd->add_option("--model", orc.model, "Gaussian model JSON")->required();
  oracle_cmd->add_option("--alpha", orc.alpha, "Chernoff exponent in (0,1)")->capture_default_str();
  oracle_cmd->add_option("--mc-samples", orc.mc_samples, "Monte Carlo samples for d > 2")
      ->capture_default_str();

  MstDumpArgs mst;
  auto* mst_cmd = app.add_subcommand("mst-dump", "Write the Euclidean MST edges as CSV");
  mst_cmd->add_option("--input", mst.input, "CSV of points (label column dropped if present)")->required();
  mst_cmd->add_option("--label-column", mst.label_column, "Column to drop")->capture_default_str();
  mst_cmd->add_flag("--jitter", mst.jitter, "Add seeded 1e-9 relative jitter to break ties");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*estimate_cmd) return run_estimate(common, est);
    if (*bounds_cmd) return run_bounds(common, bnd);
    if (*select_cmd) return run_select(common, sel);
    if (*sweep_cmd) return run_sweep_cmd(common, swp);
    if (*fukunaga_cmd) return run_fukunaga_cmd(common, fk);
    if (*consistency_cmd) return run_consistency_cmd(common, cons);
    if (*oracle_cmd) return run_oracle_cmd(common, orc);
    if (*mst_cmd) return run_mst_dump(common, mst);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
