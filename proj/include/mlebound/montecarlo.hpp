#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "mlebound/bounds.hpp"
#include "mlebound/models.hpp"
#include "mlebound/test_function.hpp"

namespace mlebound {

struct SimulationConfig {
  ModelSpec model;
  double theta0 = 2.0;
  long n = 10;
  long trials = 10000;
  std::uint64_t seed = 42;
  TestFunction h = paper_test_function();
  long chunk_size = 4096;
  double epsilon_frac = 0.5;  // eps = epsilon_frac * |theta0|
  unsigned threads = 0;       // 0: hardware concurrency

  void validate() const;
};

/// Bound columns attached to a simulation row.
struct ReferenceBounds {
  std::optional<BoundBreakdown> new_bound;
  std::optional<double> ar_bound;
};

/// Closed-form bound when one exists for the model at eps = theta0/2,
/// otherwise the exponential-family bound with the exact MSE; the earlier
/// bound where a closed-form instance exists.
ReferenceBounds reference_bounds(const ExpFamilyModel& m, double theta0, long n,
                                 double epsilon_frac, const TestFunction& h);

struct SimulationResult {
  SimulationConfig config;
  double empirical_distance = 0.0;
  double standard_error = 0.0;
  double expected_h = 0.0;  // E h(Z)
  // Compensated sums over trials of h(W), h(W)^2, W, W^2 with
  // W = sqrt(n i(theta0)) (theta_hat - theta0).
  double sum_h = 0.0;
  double sum_h2 = 0.0;
  double sum_w = 0.0;
  double sum_w2 = 0.0;
  // Largest |D(theta_hat) - mean T| / max(1, |mean T|) seen over trials.
  double max_mle_residual = 0.0;
  std::optional<double> bound_new;
  std::optional<double> bound_ar;
  std::optional<BoundBreakdown> new_breakdown;
  std::chrono::duration<double> elapsed{0.0};

  double mean_h() const { return sum_h / static_cast<double>(config.trials); }
};

/// Draws `trials` samples of size n, evaluates the MLE per trial and
/// estimates |E h(W) - E h(Z)|. Bit-reproducible for a fixed config,
/// independent of the thread count.
SimulationResult run_simulation(const SimulationConfig& config);

/// Sample sizes of the exponential table.
const std::vector<long>& table1_sizes();

/// Seed used for row `n` of the table given the user seed.
std::uint64_t table1_row_seed(std::uint64_t seed, long n);

/// Exp(1/2) non-canonical rows n = 10 .. 1e5 with h(x) = 1/(x^2+2).
std::vector<SimulationResult> table1(long trials, std::uint64_t seed,
                                     unsigned threads = 0);

struct Table1BoundRow {
  long n;
  double new_bound;
  double ar_bound;
};

/// Bound columns only (no simulation).
std::vector<Table1BoundRow> table1_bounds();

}  // namespace mlebound
