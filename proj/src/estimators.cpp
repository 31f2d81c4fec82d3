#include "uibw/estimators.hpp"

#include "uibw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uibw {

namespace {

void
require_univariate(const Kernel& kernel)
{
  if (kernel.dimension() != 1)
    throw std::invalid_argument("scalar covariates need a univariate kernel");
}

double
indicator(double y, double t)
{
  return (y >= 0.0 && y <= t) ? 1.0 : 0.0;
}

} // namespace

FunctionClassEntry
indicator_entry(const SimulationModel& model, double t)
{
  FunctionClassEntry entry;
  entry.g = [t](double y) { return indicator(y, t); };
  entry.c_g = [](double) { return 1.0; };
  entry.d_g = [](double) { return 0.0; };
  entry.conditional_mean = [model, t](double u) { return model.conditional_cdf(t, u); };
  entry.delta_sq = [model, t](double z) { return model.conditional_cdf(t, z); };
  return entry;
}

FunctionClassEntry
identity_entry(const SimulationModel& model)
{
  FunctionClassEntry entry;
  entry.g = [](double y) { return y; };
  entry.c_g = [](double) { return 1.0; };
  entry.d_g = [](double) { return 0.0; };
  entry.conditional_mean = [model](double u) { return model.conditional_mean(u); };
  entry.delta_sq = [model](double z) { return model.conditional_second_moment(z); };
  return entry;
}

void
check_bounded(const FunctionClassEntry& entry, std::span<const double> z_grid)
{
  for (const double z : z_grid) {
    if (!std::isfinite(entry.c_g(z)) || !std::isfinite(entry.d_g(z)))
      throw std::invalid_argument("c_g or d_g is not finite on the evaluation grid");
  }
}

double
expected_summand(const SimulationModel& model,
                 const FunctionClassEntry& entry,
                 double h,
                 double z,
                 const Kernel& kernel)
{
  require_univariate(kernel);
  if (!entry.conditional_mean)
    throw std::invalid_argument("simulation-mode centring needs the conditional mean of g");
  const double lo = std::max(z - 0.5 * h, model.support_lo());
  const double hi = std::min(z + 0.5 * h, model.support_hi());
  if (!(hi > lo))
    return 0.0;
  const double c = entry.c_g(z);
  const double d = entry.d_g(z);
  return quad::integrate_adaptive(
    [&](double u) {
      return (c * entry.conditional_mean(u) + d) * kernel((u - z) / h) *
             model.covariate_density(u);
    },
    lo,
    hi,
    1e-12);
}

double
w_process(const Dataset& data,
          const FunctionClassEntry& entry,
          double h,
          double z,
          double f_z_value,
          const Kernel& kernel,
          const SimulationModel& model)
{
  return w_process(
    data, entry, h, z, f_z_value, kernel, expected_summand(model, entry, h, z, kernel));
}

double
w_process(const Dataset& data,
          const FunctionClassEntry& entry,
          double h,
          double z,
          double f_z_value,
          const Kernel& kernel,
          double expected_summand)
{
  require_univariate(kernel);
  if (!(f_z_value > 0.0))
    throw std::invalid_argument("covariate density at z must be positive");
  if (!(h > 0.0))
    throw std::invalid_argument("bandwidth must be positive");
  const double c = entry.c_g(z);
  const double d = entry.d_g(z);
  double sum = 0.0;
  if (c != 0.0 || d != 0.0) {
    const auto& ys = data.y();
    const auto& zs = data.z();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double k = kernel((zs[i] - z) / h);
      if (k != 0.0)
        sum += (c * entry.g(ys[i]) + d) * k;
    }
  }
  sum -= static_cast<double>(data.size()) * expected_summand;
  return sum / std::sqrt(f_z_value);
}

double
nw_regression(const Dataset& data, double h, double z, const Kernel& kernel)
{
  require_univariate(kernel);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double k = kernel((z - data.z()[i]) / h);
    num += k * data.y()[i];
    den += k;
  }
  if (!(den > 0.0))
    throw UndefinedEstimate("Nadaraya-Watson window is empty");
  return num / den;
}

std::vector<double>
el_weights(const Dataset& data, const Cell& cell, double theta, const Kernel& kernel)
{
  require_univariate(kernel);
  if (!(cell.h > 0.0))
    throw std::invalid_argument("bandwidth must be positive");
  std::vector<double> w(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double k = kernel((data.z()[i] - cell.z) / cell.h);
    w[i] = k == 0.0 ? 0.0 : k * (indicator(data.y()[i], cell.t) - theta);
  }
  return w;
}

ELMoments
xn_sn_un(const Dataset& data, const Cell& cell, double theta, double f_z_value, const Kernel& kernel)
{
  if (!(f_z_value > 0.0))
    throw std::invalid_argument("covariate density at z must be positive");
  const auto w = el_weights(data, cell, theta, kernel);
  double x = 0.0;
  double sq = 0.0;
  for (const double wi : w) {
    x += wi;
    sq += wi * wi;
  }
  if (sq == 0.0)
    throw UndefinedEstimate("all EL weights vanish; S_n is zero");
  const double s = sq / f_z_value;
  return { x, s, x * x / (f_z_value * s) };
}

double
weighted_proportion(const Dataset& data, const Cell& cell, const Kernel& kernel)
{
  require_univariate(kernel);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double k = kernel((data.z()[i] - cell.z) / cell.h);
    num += k * indicator(data.y()[i], cell.t);
    den += k;
  }
  if (!(den > 0.0))
    return std::numeric_limits<double>::quiet_NaN();
  return num / den;
}

DeviationStat
sup_deviation(const Dataset& data,
              const FunctionClassEntry& entry,
              std::span<const double> z_grid,
              std::span<const double> h_grid,
              const SimulationModel& model,
              const Kernel& kernel)
{
  if (z_grid.empty() || h_grid.empty())
    throw std::invalid_argument("deviation grids must be nonempty");
  check_bounded(entry, z_grid);
  const int d = kernel.dimension();
  const auto n = static_cast<double>(data.size());
  DeviationStat stat;
  stat.per_point.reserve(z_grid.size() * h_grid.size());
  for (const double h : h_grid) {
    if (!(h > 0.0 && h < 1.0))
      throw std::invalid_argument("sup statistic needs bandwidths in (0, 1)");
    const double hd = std::pow(h, d);
    const double normalizer = std::sqrt(2.0 * n * hd * std::log(1.0 / hd));
    for (const double z : z_grid) {
      const double w =
        w_process(data, entry, h, z, model.covariate_density(z), kernel, model);
      stat.per_point.push_back({ z, h, w, normalizer });
      stat.value = std::max(stat.value, std::abs(w) / normalizer);
    }
  }
  return stat;
}

} // namespace uibw
