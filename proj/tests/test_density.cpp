#include "oracles.hpp"

#include "uibw/density.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace uibw;

TEST_CASE("Parzen-Rosenblatt examples")
{
  const std::vector<double> one{ 0.0 };
  const std::vector<double> at{ 0.0, 5.0 };
  const auto est = pr_density(one, 1.0, at);
  CHECK(est.values[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(est.values[1] == 0.0);
  CHECK(est.bandwidth == 1.0);
  CHECK_THROWS_AS(pr_density(one, 0.0, at), std::invalid_argument);
  CHECK_THROWS_AS(pr_density(std::vector<double>{}, 1.0, at), std::invalid_argument);
}

TEST_CASE("density properties")
{
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal(1.0, 0.5);
  std::vector<double> a(120), b(80);
  for (auto& x : a)
    x = normal(gen);
  for (auto& x : b)
    x = normal(gen) + 0.7;
  std::vector<double> both = a;
  both.insert(both.end(), b.begin(), b.end());

  const double h = 0.3;
  const auto grid = density_grid(both, h, 400);
  const auto fa = pr_density(a, h, grid);
  const auto fb = pr_density(b, h, grid);
  const auto fab = pr_density(both, h, grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(fab.values[k] >= 0.0);
    CHECK(std::abs(fab.values[k] - (120.0 * fa.values[k] + 80.0 * fb.values[k]) / 200.0) < 1e-13);
  }
  const double mass = trapezoid_mass(fab);
  CHECK(mass > 0.95);
  CHECK(mass < 1.05);

  std::vector<double> shifted = both, shifted_grid = grid;
  for (auto& x : shifted)
    x += 2.5;
  for (auto& x : shifted_grid)
    x += 2.5;
  const auto fs = pr_density(shifted, h, shifted_grid);
  for (std::size_t k = 0; k < grid.size(); ++k)
    CHECK(std::abs(fs.values[k] - fab.values[k]) < 1e-12);
}

TEST_CASE("LSCV against the closed form")
{
  std::mt19937_64 gen(17);
  std::exponential_distribution<double> expo(1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xs(10 + trial * 5);
    for (auto& x : xs)
      x = expo(gen);
    for (const double h : { 0.05, 0.2, 0.6, 2.0 })
      CHECK(std::abs(lscv_score(xs, h) - oracle::lscv_closed_form(xs, h)) < 1e-10);

    const auto cands = default_density_candidates(xs);
    CHECK(cands.size() == 40);
    std::vector<std::optional<double>> scores;
    for (const double c : cands)
      scores.push_back(oracle::lscv_closed_form(xs, c));
    CHECK(lscv_bandwidth(xs, cands) == cands[oracle::argmin_first(scores)]);
  }
}

TEST_CASE("LSCV edge cases")
{
  const std::vector<double> xs{ 0.1, 0.4, 0.45, 1.3 };
  const std::vector<double> single{ 0.25 };
  CHECK(lscv_bandwidth(xs, single) == 0.25);
  const std::vector<double> dup{ 0.25, 0.25, 0.5 };
  CHECK(lscv_bandwidth(xs, dup) == (lscv_score(xs, 0.25) <= lscv_score(xs, 0.5) ? 0.25 : 0.5));
  CHECK_THROWS_AS(lscv_score(std::vector<double>{ 1.0, 2.0 }, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(lscv_bandwidth(xs, std::vector<double>{}), std::invalid_argument);
}
