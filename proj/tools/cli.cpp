#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "infill/covariance.hpp"
#include "infill/design_models.hpp"
#include "infill/errors.hpp"
#include "infill/gls_engine.hpp"
#include "infill/monte_carlo.hpp"
#include "infill/variance_analysis.hpp"
#include "table_format.hpp"

namespace infill::cli {

namespace {

using nlohmann::json;

constexpr const char* kQuantityHelp =
    "var-b0-intercept | var-b1-slope | var-b0-full | var-b1-full | cov-full";

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw InputError("cannot open output file '" + out_path + "'");
  file << text;
  if (!file) throw InputError("failed writing '" + out_path + "'");
}

struct SeriesData {
  std::vector<double> t;
  Eigen::VectorXd y;
};

SeriesData read_series(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InputError("cannot open input file '" + path + "'");
  std::string line;
  if (!std::getline(file, line)) throw InputError("input file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string header;
  for (char c : line) {
    if (c != ' ' && c != '\t') header.push_back(c);
  }
  if (header != "t,y") throw InputError("input header must be 't,y'");

  std::vector<double> t;
  std::vector<double> y;
  int row = 1;
  while (std::getline(file, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw InputError("row " + std::to_string(row) + " must have exactly two fields");
    }
    try {
      std::size_t used = 0;
      t.push_back(std::stod(line.substr(0, comma), &used));
      y.push_back(std::stod(line.substr(comma + 1), &used));
    } catch (const std::logic_error&) {
      throw InputError("row " + std::to_string(row) + " is not numeric");
    }
  }
  if (t.size() < 2) throw InputError("input needs at least two rows");
  SeriesData data;
  data.t = std::move(t);
  data.y = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  return data;
}

DesignMatrix design_from_times(ModelKind model, const TimeGrid& grid) {
  const int n = grid.size();
  Eigen::VectorXd times(n);
  for (int i = 0; i < n; ++i) times(i) = grid[i];
  switch (model) {
    case ModelKind::InterceptOnly:
      return Eigen::VectorXd::Ones(n);
    case ModelKind::SlopeOnly:
      return times;
    case ModelKind::InterceptSlope: {
      DesignMatrix x(n, 2);
      x.col(0).setOnes();
      x.col(1) = times;
      return x;
    }
  }
  return {};
}

// Options shared by several subcommands live here so CLI11 can bind to them.
struct Options {
  std::string quantity;
  std::string model = "full";
  bool rho = false;
  bool derivative = false;
  std::vector<double> n_list = default_n_list();
  std::vector<double> lambda_list = default_lambda_list();
  std::string format = "csv";
  std::string out_path;
  std::optional<int> precision;
  double lambda = 1.0;
  double step = 0.1;
  double tol = 1e-4;
  double eps = 1e-4;
  std::string criterion = "derivative";
  std::string n_range;
  std::string lambda_range;
  double beta0 = 0.0;
  double beta1 = 0.0;
  int n = 10;
  std::int64_t reps = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string input;
  bool general_grid = false;
};

// Grid points such as 428 * 0.1 print as 42.8 rather than 42.800000000000004.
std::string format_grid_point(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

int decimals(const Options& o) { return o.precision ? *o.precision : precision_from_env(); }

std::string cmd_table(const Options& o) {
  TableRequest request;
  if (o.rho == !o.quantity.empty()) {
    throw InputError("table: give exactly one of --rho or --quantity");
  }
  if (!o.rho) request.quantity = parse_quantity(o.quantity);
  request.derivative = o.derivative;
  request.n_list = o.n_list;
  request.lambda_list = o.lambda_list;
  const TableGrid grid = compute_table(request);
  if (o.format == "json") return render_json(grid, request);
  return render_csv(grid, decimals(o));
}

std::string cmd_limit(const Options& o) {
  return format_value(moment_limit(parse_quantity(o.quantity), o.lambda), decimals(o)) + "\n";
}

std::string cmd_knee(const Options& o) {
  const KneeResult k = lambda_knee(parse_quantity(o.quantity), o.step, o.tol);
  if (o.format == "json") {
    json doc{{"quantity", o.quantity},   {"lambda_star", k.lambda_star}, {"scan_start", k.scan_start},
             {"step", k.step},           {"tol", k.tol}};
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << "lambda_star=" << format_grid_point(k.lambda_star) << '\n'
     << "scan_start=" << format_grid_point(k.scan_start) << '\n'
     << "step=" << format_axis(k.step) << '\n'
     << "tol=" << format_axis(k.tol) << '\n';
  return os.str();
}

std::string cmd_extremum(const Options& o) {
  const Extremum e = asymptote_extremum(parse_quantity(o.quantity));
  const int d = decimals(o);
  return "lambda=" + format_value(e.lambda, d) + "\nvalue=" + format_value(e.value, d) + "\n";
}

std::string cmd_nstar(const Options& o) {
  DiminishingCriterion criterion = DiminishingCriterion::Derivative;
  if (o.criterion == "forward") {
    criterion = DiminishingCriterion::ForwardDifference;
  } else if (o.criterion != "derivative") {
    throw InputError("--criterion must be derivative or forward");
  }
  return std::to_string(n_diminishing_return(parse_quantity(o.quantity), o.lambda, o.eps,
                                             criterion)) +
         "\n";
}

std::string cmd_sweep(const Options& o, const CLI::App& sub) {
  const Quantity q = parse_quantity(o.quantity);
  const bool over_n = !o.n_range.empty();
  if (over_n == !o.lambda_range.empty()) {
    throw InputError("sweep: give exactly one of --n-range or --lambda-range");
  }
  if (over_n && sub.count("--lambda") == 0) {
    throw InputError("sweep over n needs --lambda");
  }
  if (!over_n && o.derivative) {
    throw InputError("--derivative applies to n sweeps only");
  }
  const int d = decimals(o);
  std::ostringstream os;
  if (over_n) {
    os << "n," << (o.derivative ? "derivative" : "value") << '\n';
    for (double n : parse_range(o.n_range, 1.0)) {
      const double v =
          o.derivative ? moment_derivative_n(q, n, o.lambda).value : exact_moment(q, n, o.lambda);
      os << format_axis(n) << ',' << format_value(v, d) << '\n';
    }
  } else {
    os << "lambda,value\n";
    for (double lambda : parse_range(o.lambda_range, 0.1)) {
      os << format_axis(lambda) << ',' << format_value(moment_limit(q, lambda), d) << '\n';
    }
  }
  return os.str();
}

std::string cmd_simulate(const Options& o, std::ostream& err) {
  SimSpec spec;
  spec.model = parse_model_kind(o.model);
  spec.beta = spec.model == ModelKind::InterceptSlope ? Eigen::Vector2d(o.beta0, o.beta1)
              : spec.model == ModelKind::InterceptOnly ? Eigen::VectorXd::Constant(1, o.beta0)
                                                       : Eigen::VectorXd::Constant(1, o.beta1);
  spec.n = o.n;
  spec.lambda = o.lambda;
  spec.reps = o.reps;
  spec.seed = o.seed;
  spec.workers = o.workers;

  const auto start = std::chrono::steady_clock::now();
  const McReport report = run_monte_carlo(spec);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  err << "simulate: " << spec.reps << " replicates in " << seconds << " s\n";

  Eigen::MatrixXd relative = (report.empirical_cov - report.reference_cov).array() /
                             report.reference_cov.array().abs();
  json doc;
  doc["model"] = std::string(to_string(spec.model));
  doc["n"] = spec.n;
  doc["lambda"] = spec.lambda;
  doc["reps"] = report.reps;
  doc["seed"] = spec.seed;
  doc["beta"] = to_json(spec.beta);
  doc["empirical_mean"] = to_json(report.empirical_mean);
  doc["empirical_cov"] = to_json(report.empirical_cov);
  doc["mc_standard_errors"] = to_json(report.mc_standard_errors);
  doc["cov_standard_errors"] = to_json(report.cov_standard_errors);
  doc["reference_cov"] = to_json(report.reference_cov);
  doc["relative_deviation"] = to_json(relative);
  doc["max_abs_z"] = report.max_abs_z;
  return doc.dump(2) + "\n";
}

std::string cmd_fit(const Options& o) {
  const ModelKind model = parse_model_kind(o.model);
  const SeriesData data = read_series(o.input);
  const TimeGrid grid(data.t);
  json doc;
  doc["model"] = std::string(to_string(model));
  doc["lambda"] = o.lambda;
  doc["n"] = grid.size();

  FitResult fit;
  GlsProblem problem;
  problem.response = data.y;
  if (o.general_grid) {
    problem.design = design_from_times(model, grid);
    problem.covariance = sigma_general(grid, o.lambda);
    fit = gls_fit(problem);
    doc["path"] = "general-grid";
  } else {
    if (!grid.is_even(1e-9)) {
      throw GridError("time points are not evenly spaced; rerun with --general-grid");
    }
    fit = closed_form_fit(model, data.y, o.lambda);
    problem.design = design_matrix(model, grid.size());
    problem.covariance = sigma_even(grid.size(), o.lambda);
    doc["path"] = "closed-form";
  }
  doc["estimates"] = to_json(fit.estimates);
  doc["covariance"] = to_json(fit.covariance);
  doc["weighted_rss"] = weighted_rss(problem, fit.estimates);
  return doc.dump(2) + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact GLS estimator moments for linear regression under OU errors on [0, 1]"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file supplying defaults for any option");
  app.allow_config_extras(CLI::config_extras_mode::error);

  const auto add_quantity = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--quantity,-q", o.quantity, kQuantityHelp);
    if (required) opt->required();
  };
  const auto add_precision = [&](CLI::App* sub) {
    sub->add_option("--precision", o.precision,
                    "fixed decimals for |x| >= 1e-4 (default: INFILL_PRECISION or 6)")
        ->check(CLI::Range(1, 15));
  };

  auto* table = app.add_subcommand("table", "tabulate rho or a quantity over an (n, lambda) grid");
  table->add_flag("--rho", o.rho, "tabulate rho = exp(-lambda/(n-1))");
  add_quantity(table, false);
  table->add_flag("--derivative", o.derivative, "tabulate d/dn instead of the value");
  table->add_option("--n-list", o.n_list, "comma-separated sample sizes")->delimiter(',');
  table->add_option("--lambda-list", o.lambda_list, "comma-separated lambdas")->delimiter(',');
  table->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  table->add_option("--out", o.out_path, "write to this file instead of stdout");
  add_precision(table);

  auto* limit = app.add_subcommand("limit", "n -> infinity limit of a quantity");
  add_quantity(limit, true);
  limit->add_option("--lambda", o.lambda)->required();
  add_precision(limit);

  auto* knee = app.add_subcommand("knee", "diminishing-return lambda of the asymptotic curve");
  add_quantity(knee, true);
  knee->add_option("--step", o.step, "lambda grid step")->capture_default_str();
  knee->add_option("--tol", o.tol, "change threshold per step")->capture_default_str();
  knee->add_option("--format", o.format)->check(CLI::IsMember({"csv", "text", "json"}));

  auto* extremum = app.add_subcommand("extremum", "interior extremum of the asymptotic curve");
  add_quantity(extremum, true);
  add_precision(extremum);

  auto* nstar = app.add_subcommand("nstar", "smallest n with |dVar/dn| below eps");
  add_quantity(nstar, true);
  nstar->add_option("--lambda", o.lambda)->required();
  nstar->add_option("--eps", o.eps)->capture_default_str();
  nstar->add_option("--criterion", o.criterion, "derivative | forward")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "curve data: limit over lambda, or exact value over n");
  add_quantity(sweep, true);
  sweep->add_option("--lambda-range", o.lambda_range, "a:b[:step] (default step 0.1)");
  sweep->add_option("--n-range", o.n_range, "a:b[:step] (default step 1)");
  sweep->add_option("--lambda", o.lambda, "fixed lambda for n sweeps");
  sweep->add_flag("--derivative", o.derivative, "emit d/dn for n sweeps");
  sweep->add_option("--out", o.out_path);
  add_precision(sweep);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the closed forms");
  simulate->add_option("--model", o.model, "intercept | slope | full")->capture_default_str();
  simulate->add_option("--beta0", o.beta0);
  simulate->add_option("--beta1", o.beta1);
  simulate->add_option("--n", o.n)->required();
  simulate->add_option("--lambda", o.lambda)->required();
  simulate->add_option("--reps", o.reps)->required();
  simulate->add_option("--seed", o.seed)->capture_default_str();
  simulate->add_option("--workers", o.workers, "threads; does not change the result")
      ->capture_default_str();
  simulate->add_option("--out", o.out_path);

  auto* fit = app.add_subcommand("fit", "GLS fit of a t,y series with known lambda");
  fit->add_option("--model", o.model, "intercept | slope | full")->capture_default_str();
  fit->add_option("--lambda", o.lambda)->required();
  fit->add_option("--input", o.input, "CSV with header t,y")->required();
  fit->add_flag("--general-grid", o.general_grid, "allow uneven time points (dense GLS)");
  fit->add_option("--out", o.out_path);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    std::string text;
    if (table->parsed()) {
      text = cmd_table(o);
    } else if (limit->parsed()) {
      text = cmd_limit(o);
    } else if (knee->parsed()) {
      text = cmd_knee(o);
    } else if (extremum->parsed()) {
      text = cmd_extremum(o);
    } else if (nstar->parsed()) {
      text = cmd_nstar(o);
    } else if (sweep->parsed()) {
      text = cmd_sweep(o, *sweep);
    } else if (simulate->parsed()) {
      text = cmd_simulate(o, err);
    } else if (fit->parsed()) {
      text = cmd_fit(o);
    }
    emit(text, o.out_path, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumericError;
  }
  return kExitOk;
}

}  // namespace infill::cli
