#include "uibw/kernels.hpp"

#include "uibw/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace uibw {

namespace {

constexpr int max_dimension = 4;

std::string
shape_name(KernelShape shape)
{
  switch (shape) {
    case KernelShape::uniform:
      return "uniform";
    case KernelShape::epanechnikov:
      return "epanechnikov";
    case KernelShape::triweight:
      return "triweight";
  }
  return "unknown";
}

} // namespace

Kernel::Kernel(KernelShape shape, int dimension)
  : shape_(shape)
  , dimension_(dimension)
  , name_(shape_name(shape))
{
  if (dimension < 1 || dimension > max_dimension)
    throw std::invalid_argument("kernel dimension must lie in [1, 4]");
  l2_norm_sq_ = kernel_moment(*this, 2);
}

Kernel
Kernel::from_name(std::string_view name, int dimension)
{
  if (name == "uniform")
    return Kernel(KernelShape::uniform, dimension);
  if (name == "epanechnikov")
    return Kernel(KernelShape::epanechnikov, dimension);
  if (name == "triweight")
    return Kernel(KernelShape::triweight, dimension);
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

double
Kernel::profile(double u) const noexcept
{
  if (!(std::abs(u) <= 0.5))
    return 0.0;
  const double s = 1.0 - 4.0 * u * u;
  switch (shape_) {
    case KernelShape::uniform:
      return 1.0;
    case KernelShape::epanechnikov:
      return 1.5 * s;
    case KernelShape::triweight:
      return (35.0 / 16.0) * s * s * s;
  }
  return 0.0;
}

double
Kernel::operator()(std::span<const double> u) const
{
  if (static_cast<int>(u.size()) != dimension_)
    throw std::invalid_argument("point dimension does not match kernel dimension");
  double value = 1.0;
  for (const double ui : u) {
    value *= profile(ui);
    if (value == 0.0)
      return 0.0;
  }
  return value;
}

double
Kernel::operator()(double u) const
{
  if (dimension_ != 1)
    throw std::invalid_argument("scalar evaluation of a multivariate kernel");
  return profile(u);
}

double
Kernel::peak() const noexcept
{
  return std::pow(profile(0.0), dimension_);
}

double
eval_kernel(const Kernel& k, std::span<const double> u)
{
  return k(u);
}

double
l2_norm_sq(const Kernel& k)
{
  return k.l2_norm_sq();
}

double
kernel_moment(const Kernel& k, int power)
{
  // Constant 1 on a cube of unit volume.
  if (k.shape() == KernelShape::uniform)
    return 1.0;
  if (k.dimension() == 1) {
    return quad::integrate_adaptive(
      [&](double u) { return std::pow(k.profile(u), power); }, -0.5, 0.5, 1e-10);
  }
  return quad::integrate_cube(
    [&](const std::vector<double>& u) { return std::pow(k(u), power); },
    k.dimension(),
    -0.5,
    0.5);
}

} // namespace uibw
