#include "uibw/empirical_likelihood.hpp"

#include "uibw/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uibw {

namespace {

constexpr double residual_rel_tol = 1e-10;
constexpr int max_iterations = 200;
constexpr double interval_tol = 1e-9;

struct Residual
{
  double value;
  double slope;
};

// sum w_i / (1 + lambda w_i) and its derivative.
Residual
residual(std::span<const double> w, double lambda)
{
  double f = 0.0;
  double df = 0.0;
  for (const double wi : w) {
    if (wi == 0.0)
      continue;
    const double r = wi / (1.0 + lambda * wi);
    f += r;
    df -= r * r;
  }
  return { f, df };
}

} // namespace

bool
convex_hull_check(std::span<const double> w)
{
  bool pos = false;
  bool neg = false;
  for (const double wi : w) {
    pos = pos || wi > 0.0;
    neg = neg || wi < 0.0;
  }
  return pos && neg;
}

LambdaRoot
find_lambda(std::span<const double> w)
{
  if (!convex_hull_check(w))
    throw HullViolation("zero is not interior to the convex hull of the EL weights");

  const auto [min_it, max_it] = std::minmax_element(w.begin(), w.end());
  const double n = static_cast<double>(w.size());
  double abs_sum = 0.0;
  for (const double wi : w)
    abs_sum += std::abs(wi);
  const double tol = residual_rel_tol * abs_sum;

  // p_i <= 1 at the optimum, i.e. 1 + lambda w_i >= 1/n for all i.
  double lo = (1.0 / n - 1.0) / *max_it;
  double hi = (1.0 / n - 1.0) / *min_it;

  double lambda = 0.0;
  double best = 0.0;
  double best_abs = std::numeric_limits<double>::infinity();
  int iter = 0;
  for (; iter < max_iterations; ++iter) {
    const auto [f, df] = residual(w, lambda);
    if (std::abs(f) < best_abs) {
      best_abs = std::abs(f);
      best = lambda;
    }
    if (f == 0.0)
      break;
    if (f > 0.0)
      lo = lambda;
    else
      hi = lambda;

    double next = lambda - f / df;
    if (!(next > lo && next < hi))
      next = 0.5 * (lo + hi);
    const double step = std::abs(next - lambda);
    const double scale = std::max({ std::abs(lo), std::abs(hi), 1e-300 });
    if (std::abs(f) <= tol && step <= 4.0 * std::numeric_limits<double>::epsilon() * scale)
      break;
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * scale)
      break;
    lambda = next;
  }
  return { best, iter + 1 };
}

double
solve_lambda(std::span<const double> w)
{
  return find_lambda(w).lambda;
}

ELSolution
el_solution(std::span<const double> w)
{
  ELSolution sol;
  if (!convex_hull_check(w)) {
    sol.hull_ok = false;
    sol.lambda = std::numeric_limits<double>::quiet_NaN();
    sol.log_r = -std::numeric_limits<double>::infinity();
    return sol;
  }
  const auto root = find_lambda(w);
  sol.hull_ok = true;
  sol.lambda = root.lambda;
  sol.iterations = root.iterations;
  const double n = static_cast<double>(w.size());
  sol.p.resize(w.size());
  double log_r = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double v = root.lambda * w[i];
    sol.p[i] = 1.0 / (n * (1.0 + v));
    log_r -= std::log1p(v);
  }
  sol.log_r = std::min(log_r, 0.0);
  return sol;
}

double
el_log_ratio(std::span<const double> w)
{
  if (!convex_hull_check(w))
    return -std::numeric_limits<double>::infinity();
  const double lambda = solve_lambda(w);
  double log_r = 0.0;
  for (const double wi : w)
    log_r -= std::log1p(lambda * wi);
  return std::min(log_r, 0.0);
}

ELSolution
log_ratio(const Dataset& data, const Cell& cell, double theta, const Kernel& kernel)
{
  return el_solution(el_weights(data, cell, theta, kernel));
}

double
normalized_log_ratio(const Dataset& data, const Cell& cell, double centring, const Kernel& kernel)
{
  if (!(cell.h > 0.0 && cell.h < 1.0))
    throw std::invalid_argument("normalized EL statistic needs h in (0, 1)");
  const double log_r = el_log_ratio(el_weights(data, cell, centring, kernel));
  if (std::isinf(log_r))
    return std::numeric_limits<double>::infinity();
  const double log_inv_hd = -static_cast<double>(kernel.dimension()) * std::log(cell.h);
  return -log_r / log_inv_hd;
}

double
normalized_log_ratio(const Dataset& data,
                   const Cell& cell,
                   const SimulationModel& model,
                   const Kernel& kernel)
{
  return normalized_log_ratio(data, cell, centring_m(model, cell, kernel), kernel);
}

ConfidenceInterval
confidence_interval(const Dataset& data, const Cell& cell, double c, const Kernel& kernel)
{
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("critical value must lie in (0, 1)");
  const double center = weighted_proportion(data, cell, kernel);
  if (!(center > 0.0 && center < 1.0))
    throw HullViolation("no theta satisfies the convex hull condition for this cell");

  const double log_c = std::log(c);
  auto inside = [&](double theta) {
    return el_log_ratio(el_weights(data, cell, theta, kernel)) >= log_c;
  };
  // `in` satisfies R_n >= c, `out` does not; shrink until they meet.
  auto edge = [&](double in, double out) {
    while (std::abs(out - in) > interval_tol) {
      const double mid = 0.5 * (in + out);
      if (inside(mid))
        in = mid;
      else
        out = mid;
    }
    return in;
  };
  return { edge(center, 0.0), edge(center, 1.0), c };
}

} // namespace uibw
