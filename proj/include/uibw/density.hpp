#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace uibw {

//! Standard Epanechnikov kernel 0.75 (1 - u^2) on [-1, 1].
double epanechnikov_std(double u) noexcept;

struct DensityEstimate
{
  std::vector<double> grid;
  std::vector<double> values;
  double bandwidth;
};

//! Parzen-Rosenblatt estimate (1/(m h)) sum_j K_E((x - x_j)/h) on `grid`.
DensityEstimate pr_density(std::span<const double> xs, double h, std::span<const double> grid);

//! Least-squares CV criterion: integral of fhat^2 minus (2/m) sum_j
//! fhat_{-j}(x_j). The integral is computed piecewise between kernel
//! breakpoints over [min x - h, max x + h].
double lscv_score(std::span<const double> xs, double h);

//! Argmin of lscv_score over `candidates`; ties go to the smaller h.
double lscv_bandwidth(std::span<const double> xs, std::span<const double> candidates);

//! 40 geometric candidates spanning [range/m, range].
std::vector<double> default_density_candidates(std::span<const double> xs);

//! `points` equally spaced abscissas over [min x - h, max x + h].
std::vector<double> density_grid(std::span<const double> xs, double h, std::size_t points);

//! Trapezoid integral of an estimate over its grid.
double trapezoid_mass(const DensityEstimate& est);

} // namespace uibw
