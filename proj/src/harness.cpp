#include "uibw/harness.hpp"

#include "uibw/bandwidth.hpp"
#include "uibw/density.hpp"
#include "uibw/empirical_likelihood.hpp"
#include "uibw/estimators.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace uibw {

namespace {

std::vector<double>
uniform_axis(double lo, double hi, std::size_t count)
{
  if (count == 1)
    return { 0.5 * (lo + hi) };
  std::vector<double> axis(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k)
    axis[k] = lo + step * static_cast<double>(k);
  axis.back() = hi;
  return axis;
}

std::string
format_double(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream
open_output(const std::filesystem::path& path)
{
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void
check_written(std::ofstream& out, const std::filesystem::path& path)
{
  out.flush();
  if (!out)
    throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::filesystem::path
sibling_path(const std::filesystem::path& base, const std::string& suffix)
{
  auto stem = base.stem().string();
  return base.parent_path() / (stem + suffix);
}

} // namespace

void
StudyConfig::validate() const
{
  if (sizes.empty())
    throw std::invalid_argument("study needs at least one sample size");
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 2)
      throw std::invalid_argument("sample sizes must be at least 2");
    if (k > 0 && sizes[k] <= sizes[k - 1])
      throw std::invalid_argument("sample sizes must be strictly ascending");
  }
  if (reps == 0)
    throw std::invalid_argument("study needs at least one replication");
  if (grid_z == 0 || grid_t == 0 || grid_h == 0)
    throw std::invalid_argument("grid counts must be positive");
  if (!(delta >= 0.0 && delta < 0.2))
    throw std::invalid_argument("delta must lie in [0, 1/5)");
  if (!(eps > 0.0))
    throw std::invalid_argument("eps must be positive");
  if (density_points < 2)
    throw std::invalid_argument("density grid needs at least two points");
  Kernel::from_name(kernel);
}

namespace {

std::string_view
trim(std::string_view text)
{
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  return text;
}

template<class T>
T
parse_number(std::string_view key, std::string_view text)
{
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("bad value '" + std::string(text) + "' for '" +
                                std::string(key) + "'");
  return value;
}

bool
parse_bool(std::string_view key, std::string_view text)
{
  text = trim(text);
  if (text == "1" || text == "true" || text == "yes" || text == "on")
    return true;
  if (text == "0" || text == "false" || text == "no" || text == "off")
    return false;
  throw std::invalid_argument("bad boolean '" + std::string(text) + "' for '" +
                              std::string(key) + "'");
}

} // namespace

std::vector<std::size_t>
parse_size_list(std::string_view text)
{
  std::vector<std::size_t> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_number<std::size_t>("sizes", text.substr(0, comma)));
    if (comma == std::string_view::npos)
      break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void
apply_study_setting(StudyConfig& config, std::string_view key_in, std::string_view value)
{
  std::string key(trim(key_in));
  std::replace(key.begin(), key.end(), '-', '_');
  value = trim(value);
  if (key == "sizes")
    config.sizes = parse_size_list(value);
  else if (key == "reps")
    config.reps = parse_number<std::size_t>(key, value);
  else if (key == "delta")
    config.delta = parse_number<double>(key, value);
  else if (key == "grid_z")
    config.grid_z = parse_number<std::size_t>(key, value);
  else if (key == "grid_t")
    config.grid_t = parse_number<std::size_t>(key, value);
  else if (key == "grid_h")
    config.grid_h = parse_number<std::size_t>(key, value);
  else if (key == "seed")
    config.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "kernel")
    config.kernel = std::string(value);
  else if (key == "eps")
    config.eps = parse_number<double>(key, value);
  else if (key == "out")
    config.out = std::string(value);
  else if (key == "svg")
    config.svg_dir = std::filesystem::path(std::string(value));
  else if (key == "threads")
    config.threads = parse_number<unsigned>(key, value);
  else if (key == "record_timing")
    config.record_timing = parse_bool(key, value);
  else if (key == "density_points" || key == "grid_points")
    config.density_points = parse_number<std::size_t>(key, value);
  else
    throw std::invalid_argument("unknown study setting '" + key + "'");
}

StudyConfig
load_study_config(const std::filesystem::path& path, StudyConfig base)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = trim(view);
    if (view.empty())
      continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected key=value");
    apply_study_setting(base, view.substr(0, eq), view.substr(eq + 1));
  }
  return base;
}

bool
StudyRow::flagged() const
{
  return std::isinf(sup_stat);
}

StudyPlan
make_study_plan(std::size_t n, const StudyConfig& config)
{
  const SimulationModel model;
  const Kernel kernel = Kernel::from_name(config.kernel);
  const auto [h_lo, h_hi] = rate_bandwidth_interval(n, config.delta);
  const auto hs = geometric_grid(h_lo, h_hi, config.grid_h).points;
  const auto zs = uniform_axis(model.region_lo(), model.region_hi(), config.grid_z);
  const auto ts = uniform_axis(1.0, 2.0, config.grid_t);

  StudyPlan plan;
  plan.n = n;
  for (const double z : zs)
    for (const double t : ts)
      for (const double h : hs) {
        const Cell cell{ t, z, h };
        plan.cells.push_back(cell);
        plan.centrings.push_back(centring_m(model, cell, kernel));
      }
  return plan;
}

StudyRow
run_replication(const StudyPlan& plan, std::size_t rep, const StudyConfig& config)
{
  const auto start = std::chrono::steady_clock::now();
  const SimulationModel model;
  const Kernel kernel = Kernel::from_name(config.kernel);
  const Dataset data = model.sample(plan.n, config.seed, rep);

  StudyRow row;
  row.n = plan.n;
  row.rep = rep;
  bool any_finite = false;
  for (std::size_t k = 0; k < plan.cells.size(); ++k) {
    const double stat = normalized_log_ratio(data, plan.cells[k], plan.centrings[k], kernel);
    if (std::isinf(stat)) {
      ++row.hull_failures;
      continue;
    }
    row.sup_stat = any_finite ? std::max(row.sup_stat, stat) : stat;
    any_finite = true;
  }
  if (!any_finite)
    row.sup_stat = std::numeric_limits<double>::infinity();
  if (config.record_timing) {
    row.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return row;
}

StudyRow
run_replication(std::size_t n, std::size_t rep, const StudyConfig& config)
{
  return run_replication(make_study_plan(n, config), rep, config);
}

double
quantile_sorted(const std::vector<double>& sorted, double q)
{
  if (sorted.empty())
    return std::numeric_limits<double>::quiet_NaN();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0 || sorted[lo] == sorted[hi])
    return sorted[lo];
  if (std::isinf(sorted[hi]))
    return sorted[hi];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<SizeSummary>
summarize(const std::vector<StudyRow>& rows)
{
  std::vector<SizeSummary> out;
  std::size_t begin = 0;
  while (begin < rows.size()) {
    std::size_t end = begin;
    std::vector<double> values;
    while (end < rows.size() && rows[end].n == rows[begin].n)
      values.push_back(rows[end++].sup_stat);
    std::sort(values.begin(), values.end());
    SizeSummary s;
    s.n = rows[begin].n;
    s.finite = static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](double v) { return std::isfinite(v); }));
    s.median = quantile_sorted(values, 0.5);
    s.q1 = quantile_sorted(values, 0.25);
    s.q3 = quantile_sorted(values, 0.75);
    s.iqr = s.q3 - s.q1;
    out.push_back(s);
    begin = end;
  }
  return out;
}

StudyResult
simulate(const StudyConfig& config)
{
  config.validate();
  StudyResult result;
  result.rows.resize(config.sizes.size() * config.reps);
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    const StudyPlan plan = make_study_plan(config.sizes[s], config);
    parallel_for(config.reps, config.threads, [&](std::size_t rep) {
      result.rows[s * config.reps + rep] = run_replication(plan, rep, config);
    });
  }
  result.summaries = summarize(result.rows);
  return result;
}

void
write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows)
{
  out << "n,rep,sup_stat,hull_failures,runtime_ms\n";
  for (const auto& row : rows) {
    out << row.n << ',' << row.rep << ',' << format_double(row.sup_stat) << ','
        << row.hull_failures << ',' << format_double(row.runtime_ms) << '\n';
  }
}

void
write_summary_csv(std::ostream& out, const std::vector<SizeSummary>& summaries)
{
  out << "n,finite,median,q1,q3,iqr\n";
  for (const auto& s : summaries) {
    out << s.n << ',' << s.finite << ',' << format_double(s.median) << ','
        << format_double(s.q1) << ',' << format_double(s.q3) << ',' << format_double(s.iqr)
        << '\n';
  }
}

StudyResult
run_study(const StudyConfig& config)
{
  StudyResult result = simulate(config);

  {
    auto out = open_output(config.out);
    write_study_csv(out, result.rows);
    check_written(out, config.out);
  }
  {
    const auto path = sibling_path(config.out, "_summary.csv");
    auto out = open_output(path);
    write_summary_csv(out, result.summaries);
    check_written(out, path);
  }

  std::vector<std::pair<std::size_t, std::vector<std::pair<double, double>>>> curves;
  for (std::size_t s = 0; s < config.sizes.size(); ++s) {
    std::vector<double> values;
    for (std::size_t rep = 0; rep < config.reps; ++rep) {
      const double v = result.rows[s * config.reps + rep].sup_stat;
      if (std::isfinite(v))
        values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    if (values.size() < 3 || values.front() == values.back())
      continue;
    const double h = lscv_bandwidth(values, default_density_candidates(values));
    const auto est = pr_density(values, h, density_grid(values, h, config.density_points));

    const auto path =
      sibling_path(config.out, "_density_n" + std::to_string(config.sizes[s]) + ".csv");
    auto out = open_output(path);
    out << "x,fhat\n";
    std::vector<std::pair<double, double>> curve;
    for (std::size_t k = 0; k < est.grid.size(); ++k) {
      out << format_double(est.grid[k]) << ',' << format_double(est.values[k]) << '\n';
      curve.emplace_back(est.grid[k], est.values[k]);
    }
    check_written(out, path);
    curves.emplace_back(config.sizes[s], std::move(curve));
  }

  if (config.svg_dir) {
    char title[96];
    std::snprintf(title, sizeof title, "Density of the sup statistic, delta = %g", config.delta);
    write_density_svg(*config.svg_dir / (config.out.stem().string() + "_density.svg"), curves, title);
  }
  return result;
}

CalibrationResult
calibration_study(std::size_t n,
                  std::size_t reps,
                  const Cell& cell,
                  std::uint64_t seed,
                  const std::string& kernel_name,
                  unsigned threads)
{
  if (reps == 0)
    throw std::invalid_argument("calibration needs at least one replication");
  const SimulationModel model;
  const Kernel kernel = Kernel::from_name(kernel_name);
  const double centring = centring_m(model, cell, kernel);

  CalibrationResult result;
  result.statistics.resize(reps);
  parallel_for(reps, threads, [&](std::size_t rep) {
    const Dataset data = model.sample(n, seed, rep);
    result.statistics[rep] = -2.0 * el_log_ratio(el_weights(data, cell, centring, kernel));
  });
  const auto hits = std::count_if(result.statistics.begin(),
                                  result.statistics.end(),
                                  [](double s) { return s <= chi2_1_q95; });
  result.coverage = static_cast<double>(hits) / static_cast<double>(reps);
  return result;
}

CoverageResult
interval_coverage(std::size_t n, std::size_t reps, const StudyConfig& config)
{
  const SimulationModel model;
  const Kernel kernel = Kernel::from_name(config.kernel);
  const StudyPlan plan = make_study_plan(n, config);
  std::vector<std::size_t> missed(reps, 0);
  parallel_for(reps, config.threads, [&](std::size_t rep) {
    const Dataset data = model.sample(n, config.seed, rep);
    for (std::size_t k = 0; k < plan.cells.size(); ++k) {
      const Cell& cell = plan.cells[k];
      const double c = std::pow(cell.h, kernel.dimension() + config.eps);
      try {
        if (!confidence_interval(data, cell, c, kernel).contains(plan.centrings[k]))
          ++missed[rep];
      } catch (const HullViolation&) {
        ++missed[rep];
      }
    }
  });
  CoverageResult result;
  result.reps = reps;
  for (const auto m : missed) {
    result.missed_cells += m;
    if (m == 0)
      ++result.covered_reps;
  }
  return result;
}

std::vector<TrendRow>
sup_w_trend(const TrendConfig& config)
{
  if (config.sizes.empty() || config.reps == 0)
    throw std::invalid_argument("trend study needs sizes and replications");
  const SimulationModel model;
  const Kernel kernel = Kernel::from_name(config.kernel);
  const FunctionClassEntry entry = identity_entry(model);
  const auto zs = uniform_axis(model.region_lo(), model.region_hi(), config.grid_z);

  double delta_g = 0.0;
  for (const double z : zs)
    delta_g = std::max(delta_g, std::sqrt((*entry.delta_sq)(z)));
  const double target = delta_g * std::sqrt(kernel.l2_norm_sq());

  std::vector<TrendRow> rows;
  for (const std::size_t n : config.sizes) {
    const auto [h_lo, h_hi] = rate_bandwidth_interval(n, config.delta);
    const auto hs = geometric_grid(h_lo, h_hi, config.grid_h).points;
    std::vector<double> sups(config.reps);
    parallel_for(config.reps, config.threads, [&](std::size_t rep) {
      const Dataset data = model.sample(n, config.seed, rep);
      sups[rep] = sup_deviation(data, entry, zs, hs, model, kernel).value;
    });
    double mean = 0.0;
    for (const double s : sups)
      mean += s;
    mean /= static_cast<double>(sups.size());
    rows.push_back({ n, mean, target, mean / target });
  }
  return rows;
}

void
write_density_svg(const std::filesystem::path& path,
                  const std::vector<std::pair<std::size_t, std::vector<std::pair<double, double>>>>& curves,
                  const std::string& title)
{
  constexpr double width = 640.0;
  constexpr double height = 400.0;
  constexpr double margin = 50.0;
  static const char* const palette[] = { "#000000", "#888888", "#1f77b4", "#d62728", "#2ca02c", "#9467bd" };

  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_hi = 0.0;
  for (const auto& [n, curve] : curves)
    for (const auto& [x, y] : curve) {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_hi = std::max(y_hi, y);
    }
  if (curves.empty() || !(x_hi > x_lo) || !(y_hi > 0.0)) {
    x_lo = 0.0;
    x_hi = 1.0;
    y_hi = 1.0;
  }
  auto px = [&](double x) { return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin); };
  auto py = [&](double y) { return height - margin - y / y_hi * (height - 2 * margin); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << title << "</text>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  char buf[64];
  for (int k = 0; k <= 4; ++k) {
    const double x = x_lo + (x_hi - x_lo) * k / 4.0;
    std::snprintf(buf, sizeof buf, "%.3g", x);
    svg << "<text x=\"" << px(x) << "\" y=\"" << height - margin + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << buf
        << "</text>\n";
  }
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = palette[c % std::size(palette)];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : curves[c].second) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
      svg << buf;
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << width - margin - 80 << "\" y=\"" << margin + 16.0 * static_cast<double>(c)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color
        << "\">n = " << curves[c].first << "</text>\n";
  }
  svg << "</svg>\n";

  auto out = open_output(path);
  out << svg.str();
  check_written(out, path);
}

unsigned
resolve_threads(unsigned requested)
{
  if (requested > 0)
    return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace uibw
