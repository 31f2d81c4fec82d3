#include "oracles.hpp"

#include "uibw/estimators.hpp"
#include "uibw/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

using namespace uibw;

namespace {

// Five hand-picked points around z = 0.5; with h = 0.2 the Epanechnikov
// weights are 1.125, 1.44, 0.54, 0, 1.485.
Dataset
hand_five()
{
  return Dataset({ 0.3, 1.2, 2.5, 0.8, 4.0 }, { 0.45, 0.52, 0.58, 0.30, 0.49 });
}

Dataset
permuted(const Dataset& d, std::uint64_t seed)
{
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 gen(seed);
  std::shuffle(idx.begin(), idx.end(), gen);
  std::vector<double> y, z;
  for (const auto i : idx) {
    y.push_back(d.y()[i]);
    z.push_back(d.z()[i]);
  }
  return Dataset(std::move(y), std::move(z));
}

} // namespace

TEST_CASE("w_process examples")
{
  const SimulationModel model;
  const Kernel epa(KernelShape::epanechnikov);

  FunctionClassEntry zero = indicator_entry(model, 1.0);
  zero.c_g = [](double) { return 0.0; };
  zero.d_g = [](double) { return 0.0; };
  CHECK(w_process(model.sample(50, 1), zero, 0.2, 0.5, 1.0, epa, model) == 0.0);

  const Dataset far({ 0.5, 0.7 }, { 0.05, 0.95 });
  CHECK(w_process(far, indicator_entry(model, 1.0), 0.2, 0.5, 1.0, epa, 0.0) == 0.0);

  // Direct sum with the expectation from an independent Simpson integral.
  const double t = 1.0, z = 0.5, h = 0.2;
  const double e = oracle::simpson(
    [&](double u) {
      const double s = (u - z) / h;
      return 1.5 * (1.0 - 4.0 * s * s) * (1.0 - std::exp(-u * t));
    },
    z - h / 2,
    z + h / 2);
  const double expected = (1.125 * 1.0) - 5.0 * e;
  const double got = w_process(hand_five(), indicator_entry(model, t), h, z, 1.0, epa, model);
  CHECK(std::abs(got - expected) < 1e-9);

  // f_Z scaling and error path.
  const double scaled = w_process(hand_five(), indicator_entry(model, t), h, z, 4.0, epa, model);
  CHECK(std::abs(scaled - expected / 2.0) < 1e-9);
  CHECK_THROWS_AS(w_process(hand_five(), indicator_entry(model, t), h, z, 0.0, epa, model),
                  std::invalid_argument);
}

TEST_CASE("w_process has mean zero and variance n h ||K||^2 Delta^2")
{
  const SimulationModel model;
  const Kernel epa(KernelShape::epanechnikov);
  const auto entry = identity_entry(model);
  const std::size_t n = 20000;
  const double h = 0.1, z = 0.5;
  double s = 0.0, s2 = 0.0;
  const int reps = 300;
  for (int r = 0; r < reps; ++r) {
    const double w = w_process(model.sample(n, 77, r), entry, h, z, 1.0, epa, model);
    s += w;
    s2 += w * w;
  }
  const double mean = s / reps;
  const double sd = std::sqrt(s2 / reps - mean * mean);
  const double theory = std::sqrt(n * h * epa.l2_norm_sq() * (*entry.delta_sq)(z));
  CHECK(std::abs(mean) < 4.0 * theory / std::sqrt(reps));
  CHECK(sd / theory > 0.85);
  CHECK(sd / theory < 1.15);
}

TEST_CASE("nw_regression examples and errors")
{
  const Kernel uniform(KernelShape::uniform);
  const Kernel epa(KernelShape::epanechnikov);
  const Dataset constant({ 3.5, 3.5, 3.5, 3.5 }, { 0.1, 0.4, 0.45, 0.8 });
  CHECK(std::abs(nw_regression(constant, 0.5, 0.4, epa) - 3.5) < 1e-15);

  const Dataset single({ 7.0, 1.0, 2.0 }, { 0.5, 0.9, 0.05 });
  CHECK(nw_regression(single, 0.2, 0.5, epa) == 7.0);

  const Dataset four({ 1.0, 2.0, 3.0, 10.0 }, { 0.1, 0.2, 0.35, 0.9 });
  CHECK(std::abs(nw_regression(four, 0.5, 0.25, uniform) - 2.0) < 1e-15);

  CHECK_THROWS_AS(nw_regression(four, 0.1, 0.6, uniform), UndefinedEstimate);
}

TEST_CASE("el_weights and xn_sn_un on the hand dataset")
{
  const Kernel epa(KernelShape::epanechnikov);
  const Kernel uniform(KernelShape::uniform);
  const Cell cell{ 1.0, 0.5, 0.2 };
  const auto w = el_weights(hand_five(), cell, 0.3, epa);
  const std::array<double, 5> expected{ 0.7875, -0.432, -0.162, 0.0, -0.4455 };
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(std::abs(w[i] - expected[i]) < 1e-14);

  const auto mom = xn_sn_un(hand_five(), cell, 0.3, 2.0, epa);
  const double x = -0.252;
  const double sumsq = 0.62015625 + 0.186624 + 0.026244 + 0.19847025;
  CHECK(std::abs(mom.x - x) < 1e-14);
  CHECK(std::abs(mom.s - sumsq / 2.0) < 1e-14);
  CHECK(std::abs(mom.u - x * x / sumsq) < 1e-14);

  const Dataset all_in({ 0.1, 0.5, 0.9 }, { 0.45, 0.5, 0.55 });
  for (const double wi : el_weights(all_in, { 1.0, 0.5, 0.2 }, 0.0, uniform))
    CHECK(wi == 1.0);
  CHECK(el_weights(hand_five(), cell, 0.3, epa)[3] == 0.0);
}

TEST_CASE("xn_sn_un special cases")
{
  const Kernel epa(KernelShape::epanechnikov);
  const Dataset one_in({ 0.5, 3.0, 3.0 }, { 0.5, 0.05, 0.95 });
  const auto mom = xn_sn_un(one_in, { 1.0, 0.5, 0.2 }, 0.25, 1.7, epa);
  CHECK(std::abs(mom.u - 1.0) < 1e-14);

  const Cell cell{ 1.0, 0.5, 0.2 };
  const double theta = weighted_proportion(hand_five(), cell, epa);
  const auto centred = xn_sn_un(hand_five(), cell, theta, 1.0, epa);
  CHECK(std::abs(centred.x) < 1e-14);
  CHECK(centred.u < 1e-26);

  const Dataset none_in({ 0.5, 3.0 }, { 0.05, 0.95 });
  CHECK_THROWS_AS(xn_sn_un(none_in, cell, 0.3, 1.0, epa), UndefinedEstimate);
}

TEST_CASE("estimator properties on random data")
{
  const SimulationModel model;
  const Kernel epa(KernelShape::epanechnikov);
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset d = model.sample(40 + trial * 7, 1000 + trial);
    const Cell cell{ 1.0 + unif(gen), 0.25 + 0.5 * unif(gen), 0.1 + 0.3 * unif(gen) };
    const double f = 0.5 + unif(gen);

    // X_n affine and strictly decreasing in theta.
    const double x0 = xn_sn_un(d, cell, 0.0, f, epa).x;
    const double x1 = xn_sn_un(d, cell, 1.0, f, epa).x;
    const double th = unif(gen);
    const auto mom = xn_sn_un(d, cell, th, f, epa);
    CHECK(x1 < x0);
    CHECK(std::abs(mom.x - (x0 + th * (x1 - x0))) < 1e-12 * (1.0 + std::abs(x0)));

    // U_n >= 0 and S_n f = sum w^2.
    CHECK(mom.u >= 0.0);
    const auto w = el_weights(d, cell, th, epa);
    const double sumsq = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    CHECK(std::abs(mom.s * f - sumsq) <= 1e-12 * sumsq);

    // NW within the response range.
    const double r = nw_regression(d, cell.h, cell.z, epa);
    const auto [lo, hi] = std::minmax_element(d.y().begin(), d.y().end());
    CHECK(r >= *lo);
    CHECK(r <= *hi);

    // Permutation invariance.
    const Dataset p = permuted(d, trial);
    CHECK(std::abs(nw_regression(p, cell.h, cell.z, epa) - r) < 1e-12 * (1.0 + std::abs(r)));
    CHECK(std::abs(xn_sn_un(p, cell, th, f, epa).u - mom.u) < 1e-10 * (1.0 + mom.u));
    const auto e = indicator_entry(model, cell.t);
    const double wn = w_process(d, e, cell.h, cell.z, f, epa, model);
    CHECK(std::abs(w_process(p, e, cell.h, cell.z, f, epa, model) - wn) < 1e-10 * (1.0 + std::abs(wn)));
  }
}

TEST_CASE("sup_deviation")
{
  const SimulationModel model;
  const Kernel epa(KernelShape::epanechnikov);
  const Dataset d = model.sample(500, 3);
  const auto entry = indicator_entry(model, 1.5);

  const std::array<double, 1> z1{ 0.5 };
  const std::array<double, 1> h1{ 0.3 };
  const auto single = sup_deviation(d, entry, z1, h1, model, epa);
  const double w = w_process(d, entry, 0.3, 0.5, 1.0, epa, model);
  CHECK(single.per_point.size() == 1);
  CHECK(std::abs(single.value - std::abs(w) / std::sqrt(2.0 * 500 * 0.3 * std::log(1 / 0.3))) < 1e-14);

  FunctionClassEntry zero = entry;
  zero.c_g = [](double) { return 0.0; };
  CHECK(sup_deviation(d, zero, z1, h1, model, epa).value == 0.0);

  const std::array<double, 3> zs{ 0.3, 0.5, 0.7 };
  const std::array<double, 2> hs{ 0.2, 0.4 };
  const auto grid = sup_deviation(d, entry, zs, hs, model, epa);
  CHECK(grid.per_point.size() == 6);
  double best = 0.0;
  for (const auto& pt : grid.per_point) {
    CHECK(pt.normalizer > 0.0);
    best = std::max(best, std::abs(pt.w) / pt.normalizer);
  }
  CHECK(grid.value == best);

  const std::array<double, 1> bad_h{ 1.0 };
  CHECK_THROWS_AS(sup_deviation(d, entry, z1, bad_h, model, epa), std::invalid_argument);
  CHECK_THROWS_AS(sup_deviation(d, entry, {}, h1, model, epa), std::invalid_argument);

  FunctionClassEntry unbounded = entry;
  unbounded.c_g = [](double) { return INFINITY; };
  CHECK_THROWS_AS(sup_deviation(d, unbounded, z1, h1, model, epa), std::invalid_argument);
}
