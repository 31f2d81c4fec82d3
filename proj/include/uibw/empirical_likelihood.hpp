#pragma once

#include "uibw/kernels.hpp"
#include "uibw/model.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace uibw {

//! Raised when zero is not interior to the convex hull of the weights,
//! so the EL ratio has an empty feasible set.
class HullViolation : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

//! True iff both strictly positive and strictly negative weights occur.
bool convex_hull_check(std::span<const double> w);

struct LambdaRoot
{
  double lambda;
  int iterations;
};

//! Root of sum_i w_i / (1 + lambda w_i) = 0 on the set where every
//! 1 + lambda w_i >= 1/n. Bisection-safeguarded Newton from lambda = 0,
//! stopping once |sum| <= 1e-10 sum |w_i|. Throws HullViolation.
LambdaRoot find_lambda(std::span<const double> w);

double solve_lambda(std::span<const double> w);

//! Optimum of the EL program for one theta.
struct ELSolution
{
  double lambda = 0.0;
  //! log R_n; -infinity when the hull condition fails.
  double log_r = 0.0;
  std::vector<double> p;
  bool hull_ok = false;
  int iterations = 0;

  double minus_two_log_r() const noexcept { return -2.0 * log_r; }
};

//! EL solution for precomputed constraint weights. Zero weights keep
//! p_i = 1/n and add nothing to log R_n.
ELSolution el_solution(std::span<const double> w);

//! log R_n only, skipping the p vector. -infinity on hull failure.
double el_log_ratio(std::span<const double> w);

ELSolution log_ratio(const Dataset& data, const Cell& cell, double theta, const Kernel& kernel);

//! -log R_n(m(C,h,z)) / log(h^{-d}) with m from the model; +infinity when
//! the hull condition fails.
double normalized_log_ratio(const Dataset& data,
                          const Cell& cell,
                          const SimulationModel& model,
                          const Kernel& kernel);

//! Same statistic for an already computed centring value.
double normalized_log_ratio(const Dataset& data, const Cell& cell, double centring, const Kernel& kernel);

struct ConfidenceInterval
{
  double lo;
  double hi;
  double c;

  bool contains(double theta) const noexcept { return theta >= lo && theta <= hi; }
};

//! {theta : R_n(theta) >= c}. Endpoints are bracketed between the weighted
//! sample proportion and 0 (resp. 1) and located by bisection to 1e-8.
//! Throws HullViolation if every in-window response is on the same side of
//! C, and std::invalid_argument unless 0 < c < 1.
ConfidenceInterval confidence_interval(const Dataset& data,
                                       const Cell& cell,
                                       double c,
                                       const Kernel& kernel);

} // namespace uibw
