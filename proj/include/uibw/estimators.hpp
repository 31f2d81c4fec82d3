#pragma once

#include "uibw/kernels.hpp"
#include "uibw/model.hpp"

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace uibw {

//! Raised when a kernel estimate has an empty window.
class UndefinedEstimate : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

//! One member g of the function class together with its coefficients
//! (c_g, d_g). The summand of W_n is (c_g(z) g(Y) + d_g(z)) K((Z - z)/h).
struct FunctionClassEntry
{
  std::function<double(double)> g;
  std::function<double(double)> c_g;
  std::function<double(double)> d_g;
  //! E(g(Y) | Z = u) under a known model; required in simulation mode.
  std::function<double(double)> conditional_mean;
  //! Delta^2(g, z) = E((c_g(z) g(Y) + d_g(z))^2 | Z = z) when known.
  std::optional<std::function<double(double)>> delta_sq;
};

//! g = 1_{[0, t]}, c_g = 1, d_g = 0 under the simulation model.
FunctionClassEntry indicator_entry(const SimulationModel& model, double t);

//! g = Id, c_g = 1, d_g = 0 under the simulation model; Delta^2 = 2/z^2.
FunctionClassEntry identity_entry(const SimulationModel& model);

//! Throws if c_g or d_g is not finite somewhere on the grid.
void check_bounded(const FunctionClassEntry& entry, std::span<const double> z_grid);

//! Expectation of one summand, E[(c_g(z) g(Y) + d_g(z)) K((Z - z)/h)],
//! by quadrature against the model.
double expected_summand(const SimulationModel& model,
                        const FunctionClassEntry& entry,
                        double h,
                        double z,
                        const Kernel& kernel);

//! W_n(g, h, z) in simulation mode: the centring term comes from the model.
double w_process(const Dataset& data,
                 const FunctionClassEntry& entry,
                 double h,
                 double z,
                 double f_z_value,
                 const Kernel& kernel,
                 const SimulationModel& model);

//! W_n(g, h, z) in data mode: `expected_summand` is the caller's value of
//! E[(c_g(z) g(Y) + d_g(z)) K((Z - z)/h)] for a single observation; n times
//! it is subtracted from the sum.
double w_process(const Dataset& data,
                 const FunctionClassEntry& entry,
                 double h,
                 double z,
                 double f_z_value,
                 const Kernel& kernel,
                 double expected_summand);

//! Nadaraya-Watson estimate of E(Y | Z = z). Throws UndefinedEstimate when
//! no observation falls in the window.
double nw_regression(const Dataset& data, double h, double z, const Kernel& kernel);

//! w_i = K((Z_i - z)/h) (1_{[0,t]}(Y_i) - theta) for every observation.
std::vector<double> el_weights(const Dataset& data, const Cell& cell, double theta, const Kernel& kernel);

//! X_n = sum w_i, S_n = sum w_i^2 / f_Z(z), U_n = X_n^2 / (f_Z(z) S_n).
struct ELMoments
{
  double x;
  double s;
  double u;
};

ELMoments xn_sn_un(const Dataset& data,
                   const Cell& cell,
                   double theta,
                   double f_z_value,
                   const Kernel& kernel);

//! Kernel-weighted share of responses in [0, t]; NaN for an empty window.
double weighted_proportion(const Dataset& data, const Cell& cell, const Kernel& kernel);

struct DeviationPoint
{
  double z;
  double h;
  double w;
  double normalizer;
};

struct DeviationStat
{
  double value = 0.0;
  std::vector<DeviationPoint> per_point;
};

//! Maximum over the (z, h) grid of |W_n| / sqrt(2 n h^d log(h^{-d})).
DeviationStat sup_deviation(const Dataset& data,
                            const FunctionClassEntry& entry,
                            std::span<const double> z_grid,
                            std::span<const double> h_grid,
                            const SimulationModel& model,
                            const Kernel& kernel);

} // namespace uibw
