// Command-line front end: Monte Carlo study, calibration runs and the
// single-dataset tools (EL statistic, CV bandwidth, density estimate).

#include "uibw/bandwidth.hpp"
#include "uibw/density.hpp"
#include "uibw/empirical_likelihood.hpp"
#include "uibw/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace {

std::string
fmt(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Study flags are captured as raw strings so that a --config file can be
// applied first and explicit flags on top of it.
struct StudyFlags
{
  std::string config_path;
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> opts;
  bool record_timing = false;
  CLI::Option* timing_opt = nullptr;

  void attach(CLI::App* cmd, bool with_outputs)
  {
    cmd->add_option("--config", config_path, "key=value file; flags override it");
    add(cmd, "sizes", "Comma-separated sample sizes");
    add(cmd, "reps", "Replications per sample size");
    add(cmd, "delta", "Bandwidth exponent: h in [n^(-1/5-delta), n^(-1/5+delta)]");
    add(cmd, "grid-z", "Grid points in z over H");
    add(cmd, "grid-t", "Grid points in t over [1, 2]");
    add(cmd, "grid-h", "Grid points in h");
    add(cmd, "eps", "Exponent offset for c = h^(d+eps)");
    add(cmd, "kernel", "uniform | epanechnikov | triweight");
    add(cmd, "seed", "Master seed");
    add(cmd, "threads", "Worker threads (0 = all cores)");
    if (with_outputs) {
      add(cmd, "out", "Study CSV path");
      add(cmd, "svg", "Directory for the SVG density figure");
      add(cmd, "grid-points", "Abscissas per density curve");
      timing_opt = cmd->add_flag("--record-timing", record_timing, "Write measured runtime_ms");
    }
  }

  void add(CLI::App* cmd, const std::string& key, const std::string& help)
  {
    opts[key] = cmd->add_option("--" + key, raw[key], help);
  }

  uibw::StudyConfig resolve() const
  {
    uibw::StudyConfig config;
    if (!config_path.empty())
      config = uibw::load_study_config(config_path);
    for (const auto& [key, opt] : opts) {
      if (opt->count() > 0)
        uibw::apply_study_setting(config, key, raw.at(key));
    }
    if (timing_opt != nullptr && timing_opt->count() > 0)
      config.record_timing = record_timing;
    config.validate();
    return config;
  }
};

std::vector<double>
read_value_column(const std::string& path, const std::string& column)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty file");

  auto split = [](const std::string& text) {
    std::vector<std::string> cells;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.push_back(cell);
    return cells;
  };
  auto is_number = [](const std::string& cell) {
    char* end = nullptr;
    std::strtod(cell.c_str(), &end);
    return end != cell.c_str();
  };

  auto header = split(line);
  std::size_t index = 0;
  std::vector<double> values;
  if (!header.empty() && !is_number(header.front())) {
    bool found = column.empty();
    const std::string wanted = column.empty() ? "sup_stat" : column;
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (header[k] == wanted || header[k] == wanted + "\r") {
        index = k;
        found = true;
      }
    }
    if (!found)
      throw std::runtime_error(path + ": no column '" + column + "'");
  } else {
    if (!header.empty())
      values.push_back(std::strtod(header.front().c_str(), nullptr));
  }
  while (std::getline(in, line)) {
    const auto cells = split(line);
    if (cells.size() <= index)
      continue;
    const double v = std::strtod(cells[index].c_str(), nullptr);
    if (std::isfinite(v))
      values.push_back(v);
  }
  return values;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Uniform-in-bandwidth kernel estimators and smoothed empirical likelihood" };
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo study of the sup EL statistic");
  StudyFlags sim_flags;
  sim_flags.attach(simulate, true);

  // coverage
  auto* coverage = app.add_subcommand("coverage", "Coverage of m(C,h,z) by I_n with c = h^(d+eps)");
  StudyFlags cov_flags;
  cov_flags.attach(coverage, false);
  std::size_t cov_n = 500;
  coverage->add_option("--n", cov_n, "Sample size")->capture_default_str();

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "chi-square(1) calibration of -2 log R_n");
  calibrate->set_help_flag("--help", "Print this help message and exit");
  std::size_t cal_n = 2000;
  std::size_t cal_reps = 500;
  double cal_t = 1.5;
  double cal_z = 0.5;
  double cal_h = 0.0;
  std::uint64_t cal_seed = 7;
  std::string cal_kernel = "epanechnikov";
  unsigned cal_threads = 0;
  std::string cal_out;
  calibrate->add_option("--n", cal_n, "Sample size")->capture_default_str();
  calibrate->add_option("--reps", cal_reps, "Replications")->capture_default_str();
  calibrate->add_option("--t", cal_t, "Class C = [0, t]")->capture_default_str();
  calibrate->add_option("--z", cal_z, "Evaluation point")->capture_default_str();
  calibrate->add_option("--h", cal_h, "Bandwidth (default n^(-1/5))");
  calibrate->add_option("--seed", cal_seed, "Master seed")->capture_default_str();
  calibrate->add_option("--kernel", cal_kernel, "Kernel name")->capture_default_str();
  calibrate->add_option("--threads", cal_threads, "Worker threads (0 = all cores)");
  calibrate->add_option("--out", cal_out, "Optional CSV of per-replication -2 log R_n");

  // theorem1-trend
  auto* trend = app.add_subcommand("theorem1-trend", "Normalized sup of |W_n| for g = Id");
  uibw::TrendConfig trend_config;
  std::string trend_sizes = "1000,10000,100000";
  trend->add_option("--sizes", trend_sizes, "Comma-separated sample sizes")->capture_default_str();
  trend->add_option("--seed", trend_config.seed, "Master seed")->capture_default_str();
  trend->add_option("--delta", trend_config.delta, "Bandwidth exponent")->capture_default_str();
  trend->add_option("--grid-z", trend_config.grid_z, "Grid points in z")->capture_default_str();
  trend->add_option("--grid-h", trend_config.grid_h, "Grid points in h")->capture_default_str();
  trend->add_option("--reps", trend_config.reps, "Replications averaged per n")->capture_default_str();
  trend->add_option("--kernel", trend_config.kernel, "Kernel name")->capture_default_str();
  trend->add_option("--threads", trend_config.threads, "Worker threads (0 = all cores)");

  // el-stat
  auto* el_stat = app.add_subcommand("el-stat", "EL ratio for one cell and theta");
  el_stat->set_help_flag("--help", "Print this help message and exit");
  std::string el_input;
  double el_t = 0.0;
  double el_z = 0.0;
  double el_h = 0.0;
  double el_theta = 0.0;
  bool el_model = false;
  std::string el_kernel = "epanechnikov";
  el_stat->add_option("--input", el_input, "Dataset CSV with header y,z")->required();
  el_stat->add_option("--t", el_t, "Class C = [0, t]")->required();
  el_stat->add_option("--z", el_z, "Evaluation point")->required();
  el_stat->add_option("--h", el_h, "Bandwidth")->required();
  auto* theta_opt = el_stat->add_option("--theta", el_theta, "Hypothesised value");
  auto* model_opt =
    el_stat->add_flag("--model-centring", el_model, "Use m(C,h,z) under the simulation model");
  theta_opt->excludes(model_opt);
  el_stat->add_option("--kernel", el_kernel, "Kernel name")->capture_default_str();

  // cv-bandwidth
  auto* cv = app.add_subcommand("cv-bandwidth", "Leave-one-out CV bandwidth for Nadaraya-Watson");
  std::string cv_input;
  double cv_delta = 0.05;
  std::size_t cv_grid = 40;
  std::string cv_kernel = "epanechnikov";
  double cv_w_lo = 0.25;
  double cv_w_hi = 0.75;
  cv->add_option("--input", cv_input, "Dataset CSV with header y,z")->required();
  cv->add_option("--delta", cv_delta, "Search h in [n^(-1+delta), n^(-delta)]")->capture_default_str();
  cv->add_option("--grid-size", cv_grid, "Geometric grid points")->capture_default_str();
  cv->add_option("--kernel", cv_kernel, "Kernel name")->capture_default_str();
  cv->add_option("--w-lo", cv_w_lo, "Weight function is 1 on [w-lo, w-hi]")->capture_default_str();
  cv->add_option("--w-hi", cv_w_hi, "Weight function is 1 on [w-lo, w-hi]")->capture_default_str();

  // density
  auto* density = app.add_subcommand("density", "Parzen-Rosenblatt density with LSCV bandwidth");
  std::string den_input;
  std::string den_column;
  std::size_t den_points = 256;
  std::string den_out;
  double den_h = 0.0;
  density->add_option("--input", den_input, "CSV of values")->required();
  density->add_option("--column", den_column, "Column name (default sup_stat or the first column)");
  density->add_option("--grid-points", den_points, "Evaluation abscissas")->capture_default_str();
  density->add_option("--bandwidth", den_h, "Fixed bandwidth instead of LSCV");
  density->add_option("--out", den_out, "Output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const auto config = sim_flags.resolve();
      const auto result = uibw::run_study(config);
      uibw::write_summary_csv(std::cout, result.summaries);
    } else if (coverage->parsed()) {
      const auto config = cov_flags.resolve();
      const auto result = uibw::interval_coverage(cov_n, config.reps, config);
      std::cout << "n,reps,covered_reps,missed_cells\n"
                << cov_n << ',' << result.reps << ',' << result.covered_reps << ','
                << result.missed_cells << '\n';
    } else if (calibrate->parsed()) {
      const double h = cal_h > 0.0 ? cal_h : std::pow(static_cast<double>(cal_n), -0.2);
      const auto result =
        uibw::calibration_study(cal_n, cal_reps, { cal_t, cal_z, h }, cal_seed, cal_kernel, cal_threads);
      std::cout << "n,reps,t,z,h,coverage\n"
                << cal_n << ',' << cal_reps << ',' << fmt(cal_t) << ',' << fmt(cal_z) << ','
                << fmt(h) << ',' << fmt(result.coverage) << '\n';
      if (!cal_out.empty()) {
        std::ofstream out(cal_out);
        if (!out)
          throw std::runtime_error("cannot write '" + cal_out + "'");
        out << "rep,minus_two_log_r\n";
        for (std::size_t k = 0; k < result.statistics.size(); ++k)
          out << k << ',' << fmt(result.statistics[k]) << '\n';
      }
    } else if (trend->parsed()) {
      trend_config.sizes = uibw::parse_size_list(trend_sizes);
      std::cout << "n,sup,target,ratio\n";
      for (const auto& row : uibw::sup_w_trend(trend_config))
        std::cout << row.n << ',' << fmt(row.sup) << ',' << fmt(row.target) << ','
                  << fmt(row.ratio) << '\n';
    } else if (el_stat->parsed()) {
      if (theta_opt->count() == 0 && !el_model)
        throw std::invalid_argument("pass --theta or --model-centring");
      const auto data = uibw::read_dataset_csv(el_input);
      const auto kernel = uibw::Kernel::from_name(el_kernel);
      const uibw::Cell cell{ el_t, el_z, el_h };
      const double theta =
        el_model ? uibw::centring_m(uibw::SimulationModel{}, cell, kernel) : el_theta;
      const auto sol = uibw::log_ratio(data, cell, theta, kernel);
      std::cout << "theta,lambda,log_r,minus_two_log_r,hull_ok\n"
                << fmt(theta) << ',' << fmt(sol.lambda) << ',' << fmt(sol.log_r) << ','
                << fmt(sol.minus_two_log_r()) << ',' << (sol.hull_ok ? 1 : 0) << '\n';
    } else if (cv->parsed()) {
      const auto data = uibw::read_dataset_csv(cv_input);
      const auto sel = uibw::select_cv_bandwidth(
        data, cv_delta, cv_grid, uibw::indicator_weight(cv_w_lo, cv_w_hi), uibw::Kernel::from_name(cv_kernel));
      std::cout << "h,cv,selected\n";
      for (const auto& [h, score] : sel.table)
        std::cout << fmt(h) << ',' << fmt(score) << ',' << (h == sel.h ? 1 : 0) << '\n';
    } else if (density->parsed()) {
      const auto values = read_value_column(den_input, den_column);
      const double h =
        den_h > 0.0 ? den_h : uibw::lscv_bandwidth(values, uibw::default_density_candidates(values));
      const auto est = uibw::pr_density(values, h, uibw::density_grid(values, h, den_points));
      std::ofstream file;
      if (!den_out.empty()) {
        file.open(den_out);
        if (!file)
          throw std::runtime_error("cannot write '" + den_out + "'");
      }
      std::ostream& out = den_out.empty() ? std::cout : file;
      out << "x,fhat\n";
      for (std::size_t k = 0; k < est.grid.size(); ++k)
        out << fmt(est.grid[k]) << ',' << fmt(est.values[k]) << '\n';
      std::cerr << "bandwidth " << fmt(h) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
