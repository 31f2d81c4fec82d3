#include "uibw/model.hpp"

#include "uibw/quadrature.hpp"
#include "uibw/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace uibw {

namespace {

constexpr double quad_tol = 1e-10;

double
parse_double(std::string_view text, std::size_t line_no)
{
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::runtime_error("line " + std::to_string(line_no) + ": cannot parse '" +
                             std::string(text) + "' as a number");
  return value;
}

} // namespace

Dataset::Dataset(std::vector<double> y, std::vector<double> z)
  : y_(std::move(y))
  , z_(std::move(z))
{
  if (y_.size() != z_.size())
    throw std::invalid_argument("dataset columns y and z have different lengths");
  if (y_.size() < 2)
    throw std::invalid_argument("dataset needs at least two observations");
}

Dataset
read_dataset_csv(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open dataset '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != "y,z")
    throw std::runtime_error(path.string() + ": expected header 'y,z'");

  std::vector<double> y;
  std::vector<double> z;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r")
      continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error(path.string() + ": line " + std::to_string(line_no) +
                               " has no comma");
    const std::string_view view(line);
    y.push_back(parse_double(view.substr(0, comma), line_no));
    z.push_back(parse_double(view.substr(comma + 1), line_no));
  }
  return Dataset(std::move(y), std::move(z));
}

void
write_dataset_csv(const std::filesystem::path& path, const Dataset& data)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write dataset '" + path.string() + "'");
  out << "y,z\n";
  char buf[64];
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", data.y()[i], data.z()[i]);
    out << buf;
  }
}

double
SimulationModel::covariate_density(double z) const noexcept
{
  return (z >= support_lo() && z <= support_hi()) ? 1.0 : 0.0;
}

double
SimulationModel::conditional_cdf(double t, double z) const
{
  if (!(z > 0.0))
    throw std::invalid_argument("conditional law requires z > 0");
  if (t <= 0.0)
    return 0.0;
  return -std::expm1(-z * t);
}

double
SimulationModel::conditional_mean(double z) const
{
  if (!(z > 0.0))
    throw std::invalid_argument("conditional law requires z > 0");
  return 1.0 / z;
}

double
SimulationModel::conditional_second_moment(double z) const
{
  if (!(z > 0.0))
    throw std::invalid_argument("conditional law requires z > 0");
  return 2.0 / (z * z);
}

Dataset
SimulationModel::sample(std::size_t n, std::uint64_t seed, std::uint64_t stream) const
{
  if (n < 2)
    throw std::invalid_argument("sample size must be at least 2");
  StreamRng rng{ seed, stream };
  std::vector<double> y(n);
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = rng.uniform_open();
    y[i] = -std::log1p(-rng.uniform_open()) / z[i];
  }
  return Dataset(std::move(y), std::move(z));
}

Dataset
sample(const SimulationModel& model, std::size_t n, std::uint64_t seed)
{
  return model.sample(n, seed);
}

double
true_prob(const SimulationModel& model, double t, double z)
{
  return model.conditional_cdf(t, z);
}

double
true_sigma2(const SimulationModel& model, double t, double z)
{
  const double p = model.conditional_cdf(t, z);
  return p * (1.0 - p);
}

double
centring_m(const SimulationModel& model, const Cell& cell, const Kernel& kernel)
{
  if (!(cell.h > 0.0))
    throw std::invalid_argument("bandwidth must be positive");
  const double lo = std::max(cell.z - 0.5 * cell.h, model.support_lo());
  const double hi = std::min(cell.z + 0.5 * cell.h, model.support_hi());
  if (!(hi > lo))
    throw std::domain_error("kernel window does not meet the covariate support");

  auto weight = [&](double u) {
    return kernel((u - cell.z) / cell.h) * model.covariate_density(u);
  };
  const double den = quad::integrate_adaptive(weight, lo, hi, quad_tol);
  if (den < 1e-12)
    throw std::domain_error("centring denominator vanishes on the kernel window");
  const double num = quad::integrate_adaptive(
    [&](double u) { return weight(u) * model.conditional_cdf(cell.t, u); }, lo, hi, quad_tol);
  return std::clamp(num / den, 0.0, 1.0);
}

} // namespace uibw
