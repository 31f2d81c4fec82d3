#include "uibw/density.hpp"

#include "uibw/bandwidth.hpp"
#include "uibw/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uibw {

namespace {

// Pieces of fhat^2 are quartic polynomials; 8 nodes integrate them exactly.
const quad::GaussLegendreRule&
piece_rule()
{
  static const quad::GaussLegendreRule rule = quad::make_gauss_legendre(8);
  return rule;
}

double
fhat(std::span<const double> xs, double h, double x)
{
  double sum = 0.0;
  for (const double xj : xs)
    sum += epanechnikov_std((x - xj) / h);
  return sum / (static_cast<double>(xs.size()) * h);
}

} // namespace

double
epanechnikov_std(double u) noexcept
{
  return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

DensityEstimate
pr_density(std::span<const double> xs, double h, std::span<const double> grid)
{
  if (!(h > 0.0))
    throw std::invalid_argument("density bandwidth must be positive");
  if (xs.empty())
    throw std::invalid_argument("density estimate needs at least one observation");
  DensityEstimate est{ { grid.begin(), grid.end() }, std::vector<double>(grid.size()), h };
  for (std::size_t k = 0; k < grid.size(); ++k)
    est.values[k] = fhat(xs, h, grid[k]);
  return est;
}

double
lscv_score(std::span<const double> xs, double h)
{
  if (xs.size() < 3)
    throw std::invalid_argument("LSCV needs at least three observations");
  if (!(h > 0.0))
    throw std::invalid_argument("density bandwidth must be positive");

  std::vector<double> breaks;
  breaks.reserve(2 * xs.size());
  for (const double x : xs) {
    breaks.push_back(x - h);
    breaks.push_back(x + h);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    integral += quad::integrate(
      [&](double x) {
        const double f = fhat(xs, h, x);
        return f * f;
      },
      breaks[k],
      breaks[k + 1],
      piece_rule());
  }

  const auto m = static_cast<double>(xs.size());
  double loo = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (k != j)
        sum += epanechnikov_std((xs[j] - xs[k]) / h);
    }
    loo += sum / ((m - 1.0) * h);
  }
  return integral - 2.0 * loo / m;
}

double
lscv_bandwidth(std::span<const double> xs, std::span<const double> candidates)
{
  if (candidates.empty())
    throw std::invalid_argument("LSCV needs at least one candidate bandwidth");
  double best_h = candidates.front();
  double best = std::numeric_limits<double>::infinity();
  for (const double h : candidates) {
    const double score = lscv_score(xs, h);
    if (score < best || (score == best && h < best_h)) {
      best = score;
      best_h = h;
    }
  }
  return best_h;
}

std::vector<double>
default_density_candidates(std::span<const double> xs)
{
  if (xs.size() < 2)
    throw std::invalid_argument("candidate bandwidths need at least two observations");
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double range = *hi - *lo;
  if (!(range > 0.0))
    throw std::invalid_argument("candidate bandwidths need a nondegenerate sample");
  return geometric_grid(range / static_cast<double>(xs.size()), range, 40).points;
}

std::vector<double>
density_grid(std::span<const double> xs, double h, std::size_t points)
{
  if (xs.empty() || points < 2)
    throw std::invalid_argument("density grid needs data and at least two points");
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it - h;
  const double hi = *hi_it + h;
  std::vector<double> grid(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k)
    grid[k] = lo + step * static_cast<double>(k);
  grid.back() = hi;
  return grid;
}

double
trapezoid_mass(const DensityEstimate& est)
{
  double mass = 0.0;
  for (std::size_t k = 0; k + 1 < est.grid.size(); ++k)
    mass += 0.5 * (est.values[k] + est.values[k + 1]) * (est.grid[k + 1] - est.grid[k]);
  return mass;
}

} // namespace uibw
