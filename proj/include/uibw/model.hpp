#pragma once

#include "uibw/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace uibw {

//! Paired observations (Y_i, Z_i) with scalar response and covariate.
class Dataset
{
public:
  //! Throws std::invalid_argument on unequal lengths or fewer than two rows.
  Dataset(std::vector<double> y, std::vector<double> z);

  std::size_t size() const noexcept { return y_.size(); }
  const std::vector<double>& y() const noexcept { return y_; }
  const std::vector<double>& z() const noexcept { return z_; }

private:
  std::vector<double> y_;
  std::vector<double> z_;
};

//! Reads a `y,z` CSV with header line.
Dataset read_dataset_csv(const std::filesystem::path& path);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);

//! Z ~ Uniform[0, 1]; given Z = z, Y is exponential with mean 1/z.
//! Evaluation region H = [0.25, 0.75].
class SimulationModel
{
public:
  double support_lo() const noexcept { return 0.0; }
  double support_hi() const noexcept { return 1.0; }
  double region_lo() const noexcept { return 0.25; }
  double region_hi() const noexcept { return 0.75; }

  double covariate_density(double z) const noexcept;

  //! P(Y <= t | Z = z). Throws for z <= 0.
  double conditional_cdf(double t, double z) const;

  //! E(Y | Z = z) = 1/z.
  double conditional_mean(double z) const;

  //! E(Y^2 | Z = z) = 2/z^2.
  double conditional_second_moment(double z) const;

  //! Draws n pairs from the stream keyed by (seed, stream). Z by direct
  //! uniform draw, Y by exponential inverse CDF.
  Dataset sample(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0) const;
};

//! Evaluation cell: class C = [0, t], point z, bandwidth h.
struct Cell
{
  double t;
  double z;
  double h;
};

Dataset sample(const SimulationModel& model, std::size_t n, std::uint64_t seed);

//! r(C, z) = P(Y in [0, t] | Z = z).
double true_prob(const SimulationModel& model, double t, double z);

//! sigma^2(C, z) = r (1 - r).
double true_sigma2(const SimulationModel& model, double t, double z);

//! Smoothed target m(C, h, z) = E[1_C(Y) K((Z - z)/h)] / E[K((Z - z)/h)],
//! integrated against f_Z over the part of the kernel window inside the
//! covariate support. Throws std::domain_error if the denominator vanishes
//! (below 1e-12). The kernel must be univariate.
double centring_m(const SimulationModel& model, const Cell& cell, const Kernel& kernel);

} // namespace uibw
