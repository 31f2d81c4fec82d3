#pragma once

// Independent reference computations used by the unit and acceptance
// tests. Nothing here calls into the library's numerical routines.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

//! Composite Simpson rule with `panels` (even) subintervals.
inline double
simpson(const std::function<double(double)>& f, double a, double b, int panels = 20000)
{
  const double step = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int k = 1; k < panels; ++k)
    sum += f(a + k * step) * (k % 2 == 1 ? 4.0 : 2.0);
  return sum * step / 3.0;
}

//! max sum_i log(n p_i) over {p >= 0, sum p = 1, sum p_i w_i = 0} by a
//! feasible-start primal Newton method with equality constraints.
//! Returns nullopt if no strictly positive feasible point exists.
inline std::optional<double>
el_primal_max(const std::vector<double>& w)
{
  const std::size_t n = w.size();
  double pos_mean = 0.0, neg_mean = 0.0;
  std::size_t n_pos = 0, n_neg = 0, n_zero = 0;
  for (const double wi : w) {
    if (wi > 0) {
      pos_mean += wi;
      ++n_pos;
    } else if (wi < 0) {
      neg_mean -= wi;
      ++n_neg;
    } else {
      ++n_zero;
    }
  }
  if (n_pos == 0 || n_neg == 0)
    return std::nullopt;
  pos_mean /= static_cast<double>(n_pos);
  neg_mean /= static_cast<double>(n_neg);

  // Strictly feasible start: balance the positive and negative mass.
  const double rest = 1.0 - static_cast<double>(n_zero) / static_cast<double>(n);
  const double mass_pos = rest * neg_mean / (pos_mean + neg_mean);
  const double mass_neg = rest * pos_mean / (pos_mean + neg_mean);
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (w[i] > 0)
      p[i] = mass_pos / static_cast<double>(n_pos);
    else if (w[i] < 0)
      p[i] = mass_neg / static_cast<double>(n_neg);
    else
      p[i] = 1.0 / static_cast<double>(n);
  }

  auto objective = [&](const std::vector<double>& q) {
    double s = 0.0;
    for (const double qi : q)
      s += std::log(static_cast<double>(n) * qi);
    return s;
  };

  for (int iter = 0; iter < 500; ++iter) {
    // Solve (A D A^T) nu = -A p with D = diag(p^2), rows of A: 1 and w.
    double m11 = 0, m12 = 0, m22 = 0, r1 = 0, r2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = p[i] * p[i];
      m11 += d;
      m12 += d * w[i];
      m22 += d * w[i] * w[i];
      r1 -= p[i];
      r2 -= p[i] * w[i];
    }
    const double det = m11 * m22 - m12 * m12;
    const double nu1 = (r1 * m22 - m12 * r2) / det;
    const double nu2 = (m11 * r2 - m12 * r1) / det;
    std::vector<double> dp(n);
    double decrement = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dp[i] = p[i] + p[i] * p[i] * (nu1 + nu2 * w[i]);
      decrement += dp[i] * dp[i] / (p[i] * p[i]);
    }
    if (decrement < 1e-24)
      break;
    double step = 1.0;
    bool accepted = false;
    const double f0 = objective(p);
    while (step > 1e-16) {
      std::vector<double> q(n);
      bool positive = true;
      for (std::size_t i = 0; i < n; ++i) {
        q[i] = p[i] + step * dp[i];
        positive = positive && q[i] > 0.0;
      }
      if (positive && objective(q) >= f0 + 0.25 * step * decrement) {
        p = std::move(q);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      break;
  }
  return objective(p);
}

//! Leave-one-out CV by literally deleting observation i and refitting.
//! Returns nullopt when a weighted point has an empty window.
inline std::optional<double>
cv_brute(const std::vector<double>& y,
         const std::vector<double>& z,
         double h,
         const std::function<double(double)>& weight,
         const std::function<double(double)>& kernel)
{
  const std::size_t n = y.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (weight(z[i]) == 0.0)
      continue;
    std::vector<double> y_rest, z_rest;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) {
        y_rest.push_back(y[j]);
        z_rest.push_back(z[j]);
      }
    }
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < y_rest.size(); ++j) {
      const double k = kernel((z[i] - z_rest[j]) / h);
      num += k * y_rest[j];
      den += k;
    }
    if (den <= 0.0)
      return std::nullopt;
    total += std::pow(y[i] - num / den, 2) * weight(z[i]);
  }
  return total / static_cast<double>(n);
}

//! Self-convolution of the standard Epanechnikov kernel.
inline double
epanechnikov_conv(double u)
{
  const double a = std::abs(u);
  if (a >= 2.0)
    return 0.0;
  return 3.0 / 160.0 * std::pow(2.0 - a, 3) * (a * a + 6.0 * a + 4.0);
}

//! LSCV criterion with the integral of fhat^2 in closed form.
inline double
lscv_closed_form(const std::vector<double>& xs, double h)
{
  const auto m = static_cast<double>(xs.size());
  auto k = [](double u) { return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0; };
  double integral = 0.0;
  double loo = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j)
    for (std::size_t l = 0; l < xs.size(); ++l) {
      const double u = (xs[j] - xs[l]) / h;
      integral += epanechnikov_conv(u);
      if (j != l)
        loo += k(u);
    }
  integral /= m * m * h;
  loo /= (m - 1.0) * h;
  return integral - 2.0 * loo / m;
}

//! Index of the minimum; ties go to the first occurrence.
inline std::size_t
argmin_first(const std::vector<std::optional<double>>& scores)
{
  std::size_t best = scores.size();
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (scores[k] && *scores[k] < best_value) {
      best_value = *scores[k];
      best = k;
    }
  }
  return best;
}

} // namespace oracle
