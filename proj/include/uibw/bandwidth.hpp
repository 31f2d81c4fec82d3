#pragma once

#include "uibw/kernels.hpp"
#include "uibw/model.hpp"

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace uibw {

//! Raised when a bandwidth leaves some weighted point with an empty
//! leave-one-out window.
class InfeasibleBandwidth : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

struct BandwidthGrid
{
  double h_lo;
  double h_hi;
  std::vector<double> points;
};

//! `count` geometrically spaced points from lo to hi inclusive. A single
//! point is placed at the geometric midpoint sqrt(lo * hi).
BandwidthGrid geometric_grid(double lo, double hi, std::size_t count);

//! (n^{-1/5-delta}, n^{-1/5+delta}) for 0 <= delta < 1/5.
std::pair<double, double> rate_bandwidth_interval(std::size_t n, double delta);

using WeightFunction = std::function<double(double)>;

//! Indicator of [lo, hi]; the default CV weight is the evaluation region.
WeightFunction indicator_weight(double lo = 0.25, double hi = 0.75);

//! CV(h) = (1/n) sum_i [Y_i - r_{n,-i}(Z_i)]^2 w(Z_i). Throws
//! InfeasibleBandwidth if a point with w > 0 has no neighbours.
double cv_score(const Dataset& data, double h, const WeightFunction& w, const Kernel& kernel);

struct CvSelection
{
  double h;
  //! (h, CV(h)) for every grid point; NaN marks an infeasible h.
  std::vector<std::pair<double, double>> table;
};

//! Grid search for the CV minimizer over `grid_size` geometric points in
//! [n^{-1+delta}, n^{-delta}]; ties go to the smaller h. Throws
//! InfeasibleBandwidth when no grid point is feasible.
CvSelection select_cv_bandwidth(const Dataset& data,
                                double delta,
                                std::size_t grid_size,
                                const WeightFunction& w,
                                const Kernel& kernel);

//! Data-driven bandwidth rule: dataset -> (z -> h).
using DataDrivenBandwidth = std::function<std::function<double(double)>(const Dataset&)>;

//! Global CV rule wrapped in the data-driven interface.
DataDrivenBandwidth cv_bandwidth_rule(double delta,
                                      std::size_t grid_size,
                                      WeightFunction w,
                                      Kernel kernel);

} // namespace uibw
