#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace uibw::quad {

//! Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

//! Builds an n-point Gauss-Legendre rule by Newton iteration on P_n.
inline GaussLegendreRule
make_gauss_legendre(std::size_t n)
{
  if (n == 0)
    throw std::invalid_argument("Gauss-Legendre rule needs at least one node");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (std::size_t k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        const auto kd = static_cast<double>(k);
        p0 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p2) / kd;
      }
      dp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
      const double step = p0 / dp;
      x -= step;
      if (std::abs(step) <= 1e-15)
        break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

//! Shared 64-point rule; exact for polynomials up to degree 127.
inline const GaussLegendreRule&
default_rule()
{
  static const GaussLegendreRule rule = make_gauss_legendre(64);
  return rule;
}

template<class F>
double
integrate(F&& f, double a, double b, const GaussLegendreRule& rule = default_rule())
{
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

namespace detail {
template<class F>
double
adaptive_step(F& f, double a, double b, double whole, double abs_tol, int depth)
{
  const double mid = 0.5 * (a + b);
  const double left = integrate(f, a, mid);
  const double right = integrate(f, mid, b);
  if (depth <= 0 || std::abs(left + right - whole) <= abs_tol)
    return left + right;
  return adaptive_step(f, a, mid, left, 0.5 * abs_tol, depth - 1) +
         adaptive_step(f, mid, b, right, 0.5 * abs_tol, depth - 1);
}
} // namespace detail

//! Composite Gauss-Legendre with interval bisection until two successive
//! levels agree to `abs_tol`.
template<class F>
double
integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-10, int max_depth = 30)
{
  if (a == b)
    return 0.0;
  const double whole = integrate(f, a, b);
  return detail::adaptive_step(f, a, b, whole, abs_tol, max_depth);
}

//! Tensor-product rule over the cube [lo, hi]^d. `f` receives a
//! `const std::vector<double>&` point.
template<class F>
double
integrate_cube(F&& f, int d, double lo, double hi, const GaussLegendreRule& rule = default_rule())
{
  if (d < 1)
    throw std::invalid_argument("cube dimension must be positive");
  const std::size_t m = rule.nodes.size();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> point(static_cast<std::size_t>(d), mid + half * rule.nodes[0]);
  double sum = 0.0;
  while (true) {
    double w = 1.0;
    for (std::size_t k = 0; k < idx.size(); ++k)
      w *= rule.weights[idx[k]];
    sum += w * f(point);

    std::size_t axis = 0;
    while (axis < idx.size()) {
      if (++idx[axis] < m) {
        point[axis] = mid + half * rule.nodes[idx[axis]];
        break;
      }
      idx[axis] = 0;
      point[axis] = mid + half * rule.nodes[0];
      ++axis;
    }
    if (axis == idx.size())
      break;
  }
  return sum * std::pow(half, d);
}

} // namespace uibw::quad
