#pragma once

#include "uibw/kernels.hpp"
#include "uibw/model.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace uibw {

//! Monte Carlo study settings. Defaults reproduce the reference design:
//! n in {50, 100, 500, 1000}, 100 replications, delta = 1/20 and a
//! 5 (z) x 5 (t) x 2 (h) grid of 50 cells.
struct StudyConfig
{
  std::vector<std::size_t> sizes{ 50, 100, 500, 1000 };
  std::size_t reps = 100;
  double delta = 0.05;
  std::size_t grid_z = 5;
  std::size_t grid_t = 5;
  std::size_t grid_h = 2;
  std::uint64_t seed = 42;
  std::string kernel = "epanechnikov";
  double eps = 0.1;
  std::filesystem::path out = "study.csv";
  std::optional<std::filesystem::path> svg_dir;
  //! 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
  //! Wall-clock timing breaks byte-for-byte reproducibility, so runtime_ms
  //! is written as 0 unless this is set.
  bool record_timing = false;
  std::size_t density_points = 256;

  void validate() const;
};

//! Applies one `key=value` setting (keys as the CLI flags, with '-' or
//! '_'). Throws std::invalid_argument for unknown keys or bad values.
void apply_study_setting(StudyConfig& config, std::string_view key, std::string_view value);

//! Reads `key=value` lines ('#' starts a comment) on top of `base`.
StudyConfig load_study_config(const std::filesystem::path& path, StudyConfig base = {});

//! Parses "50,100,500".
std::vector<std::size_t> parse_size_list(std::string_view text);

struct StudyRow
{
  std::size_t n = 0;
  std::size_t rep = 0;
  //! Max over cells of -log R_n(m) / log(h^{-d}); +infinity when every
  //! cell violates the hull condition.
  double sup_stat = 0.0;
  std::size_t hull_failures = 0;
  double runtime_ms = 0.0;

  bool flagged() const;
};

//! Cells and their centring values for one sample size. z and t are
//! uniform over H and [1, 2] (endpoints included), h geometric over
//! [h_n, hbar_n]; a single point on an axis sits at the midpoint.
struct StudyPlan
{
  std::size_t n = 0;
  std::vector<Cell> cells;
  std::vector<double> centrings;
};

StudyPlan make_study_plan(std::size_t n, const StudyConfig& config);

StudyRow run_replication(std::size_t n, std::size_t rep, const StudyConfig& config);
StudyRow run_replication(const StudyPlan& plan, std::size_t rep, const StudyConfig& config);

struct SizeSummary
{
  std::size_t n = 0;
  std::size_t finite = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
};

//! Linear-interpolation quantile of sorted values (type 7).
double quantile_sorted(const std::vector<double>& sorted, double q);

std::vector<SizeSummary> summarize(const std::vector<StudyRow>& rows);

struct StudyResult
{
  std::vector<StudyRow> rows;
  std::vector<SizeSummary> summaries;
};

//! All (n, rep) rows ordered by n then rep. No I/O.
StudyResult simulate(const StudyConfig& config);

//! simulate() plus the study CSV, the per-n summary CSV, per-n density
//! curves and, if requested, an SVG figure. Throws std::runtime_error with
//! the offending path on I/O failure.
StudyResult run_study(const StudyConfig& config);

void write_study_csv(std::ostream& out, const std::vector<StudyRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SizeSummary>& summaries);

struct CalibrationResult
{
  double coverage = 0.0;
  //! -2 log R_n(m(C,h,z)) per replication.
  std::vector<double> statistics;
};

//! chi-square(1) 0.95 quantile.
inline constexpr double chi2_1_q95 = 3.841459;

//! Share of replications with -2 log R_n(m(C,h,z)) <= 3.841459.
CalibrationResult calibration_study(std::size_t n,
                                    std::size_t reps,
                                    const Cell& cell,
                                    std::uint64_t seed,
                                    const std::string& kernel = "epanechnikov",
                                    unsigned threads = 0);

struct CoverageResult
{
  //! Replications whose intervals cover m(C,h,z) at every cell.
  std::size_t covered_reps = 0;
  std::size_t reps = 0;
  //! Cells missed, summed over replications.
  std::size_t missed_cells = 0;
};

//! Builds I_n(C,h,z,c) with c = h^{d+eps} at every study cell of size n
//! and checks that it contains m(C,h,z).
CoverageResult interval_coverage(std::size_t n, std::size_t reps, const StudyConfig& config);

struct TrendConfig
{
  std::vector<std::size_t> sizes{ 1000, 10000, 100000 };
  std::uint64_t seed = 11;
  double delta = 0.05;
  std::size_t grid_z = 101;
  std::size_t grid_h = 5;
  std::size_t reps = 1;
  std::string kernel = "epanechnikov";
  unsigned threads = 0;
};

struct TrendRow
{
  std::size_t n = 0;
  //! Mean over replications of the normalized sup of |W_n| for g = Id.
  double sup = 0.0;
  //! Delta(G) ||K||_2.
  double target = 0.0;
  double ratio = 0.0;
};

std::vector<TrendRow> sup_w_trend(const TrendConfig& config);

//! Writes one SVG line chart of the given density curves.
void write_density_svg(const std::filesystem::path& path,
                       const std::vector<std::pair<std::size_t, std::vector<std::pair<double, double>>>>& curves,
                       const std::string& title);

unsigned resolve_threads(unsigned requested);

//! Runs fn(i) for i in [0, count) on up to `threads` workers. Callers write
//! into slot i only, so results do not depend on scheduling.
template<class F>
void
parallel_for(std::size_t count, unsigned threads, F&& fn)
{
  const unsigned workers =
    static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr error;
  std::atomic<bool> failed{ false };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count)
          return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true))
            error = std::current_exception();
          return;
        }
      }
    });
  }
  pool.clear();
  if (error)
    std::rethrow_exception(error);
}

} // namespace uibw
