#pragma once

#include <span>
#include <string>
#include <string_view>

namespace uibw {

enum class KernelShape
{
  uniform,
  epanechnikov,
  triweight
};

//! Tensor-product kernel supported on the cube [-1/2, 1/2]^d and
//! integrating to one. Standard [-1, 1] profiles are rescaled onto the
//! half-width cube, so e.g. the Epanechnikov factor is 1.5 (1 - 4u^2).
//!
//! Immutable after construction; the squared L2 norm is computed once by
//! quadrature and cached.
class Kernel
{
public:
  explicit Kernel(KernelShape shape, int dimension = 1);

  //! Accepts "uniform", "epanechnikov" or "triweight".
  static Kernel from_name(std::string_view name, int dimension = 1);

  int dimension() const noexcept { return dimension_; }
  KernelShape shape() const noexcept { return shape_; }
  const std::string& name() const noexcept { return name_; }

  //! One-dimensional factor; zero outside [-1/2, 1/2].
  double profile(double u) const noexcept;

  double operator()(std::span<const double> u) const;

  //! Shortcut for d = 1; throws if the kernel is multivariate.
  double operator()(double u) const;

  //! Value at the origin, K(0).
  double peak() const noexcept;

  //! Squared Lebesgue L2 norm, the integral of K^2.
  double l2_norm_sq() const noexcept { return l2_norm_sq_; }

private:
  KernelShape shape_;
  int dimension_;
  std::string name_;
  double l2_norm_sq_ = 0.0;
};

double eval_kernel(const Kernel& k, std::span<const double> u);
double l2_norm_sq(const Kernel& k);

//! Quadrature of K^power over the support cube (power 1 gives the mass).
double kernel_moment(const Kernel& k, int power);

} // namespace uibw
