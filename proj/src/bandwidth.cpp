#include "uibw/bandwidth.hpp"

#include <cmath>
#include <limits>

namespace uibw {

BandwidthGrid
geometric_grid(double lo, double hi, std::size_t count)
{
  if (!(lo > 0.0) || !(hi >= lo))
    throw std::invalid_argument("geometric grid needs 0 < lo <= hi");
  if (count == 0)
    throw std::invalid_argument("geometric grid needs at least one point");
  if (count == 1) {
    const double mid = std::sqrt(lo * hi);
    return { mid, mid, { mid } };
  }
  BandwidthGrid grid{ lo, hi, std::vector<double>(count) };
  const double log_lo = std::log(lo);
  const double step = (std::log(hi) - log_lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k)
    grid.points[k] = std::exp(log_lo + step * static_cast<double>(k));
  grid.points.front() = lo;
  grid.points.back() = hi;
  return grid;
}

std::pair<double, double>
rate_bandwidth_interval(std::size_t n, double delta)
{
  if (n < 2)
    throw std::invalid_argument("bandwidth interval needs n >= 2");
  if (!(delta >= 0.0 && delta < 0.2))
    throw std::invalid_argument("delta must lie in [0, 1/5)");
  const auto nd = static_cast<double>(n);
  return { std::pow(nd, -0.2 - delta), std::pow(nd, -0.2 + delta) };
}

WeightFunction
indicator_weight(double lo, double hi)
{
  return [lo, hi](double z) { return (z >= lo && z <= hi) ? 1.0 : 0.0; };
}

double
cv_score(const Dataset& data, double h, const WeightFunction& w, const Kernel& kernel)
{
  if (!(h > 0.0))
    throw std::invalid_argument("bandwidth must be positive");
  const auto& ys = data.y();
  const auto& zs = data.z();
  const std::size_t n = data.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w(zs[i]);
    if (wi == 0.0)
      continue;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i)
        continue;
      const double k = kernel((zs[i] - zs[j]) / h);
      num += k * ys[j];
      den += k;
    }
    if (!(den > 0.0))
      throw InfeasibleBandwidth("empty leave-one-out window");
    const double resid = ys[i] - num / den;
    total += resid * resid * wi;
  }
  return total / static_cast<double>(n);
}

CvSelection
select_cv_bandwidth(const Dataset& data,
                    double delta,
                    std::size_t grid_size,
                    const WeightFunction& w,
                    const Kernel& kernel)
{
  if (grid_size < 2)
    throw std::invalid_argument("CV grid needs at least two points");
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("CV delta must lie in (0, 1/2)");
  const auto nd = static_cast<double>(data.size());
  const auto grid = geometric_grid(std::pow(nd, -1.0 + delta), std::pow(nd, -delta), grid_size);

  CvSelection sel{ std::numeric_limits<double>::quiet_NaN(), {} };
  double best = std::numeric_limits<double>::infinity();
  for (const double h : grid.points) {
    double score = std::numeric_limits<double>::quiet_NaN();
    try {
      score = cv_score(data, h, w, kernel);
    } catch (const InfeasibleBandwidth&) {
    }
    sel.table.emplace_back(h, score);
    if (score < best) {
      best = score;
      sel.h = h;
    }
  }
  if (std::isnan(sel.h))
    throw InfeasibleBandwidth("every CV grid bandwidth is infeasible");
  return sel;
}

DataDrivenBandwidth
cv_bandwidth_rule(double delta, std::size_t grid_size, WeightFunction w, Kernel kernel)
{
  return [=](const Dataset& data) {
    const double h = select_cv_bandwidth(data, delta, grid_size, w, kernel).h;
    return std::function<double(double)>([h](double) { return h; });
  };
}

} // namespace uibw
