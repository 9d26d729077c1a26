#include "mlebound/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlebound/error.hpp"
#include "mlebound/moments.hpp"
#include "mlebound/parallel.hpp"
#include "mlebound/random.hpp"

namespace mlebound {

namespace {

struct ChunkSums {
  CompensatedSum h, h2, w, w2;
  double max_residual = 0.0;
};

double epsilon_for(double theta0, double frac) {
  const double scale = std::fabs(theta0);
  return scale > 0.0 ? frac * scale : frac;
}

}  // namespace

void SimulationConfig::validate() const {
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (n < 1) throw DomainError("n must be >= 1");
  if (chunk_size < 1) throw DomainError("chunk_size must be >= 1");
  if (!(epsilon_frac > 0.0)) throw DomainError("epsilon fraction must be positive");
  if (!h.h) throw DomainError("simulation needs an evaluable test function");
}

ReferenceBounds reference_bounds(const ExpFamilyModel& m, double theta0, long n,
                                 double epsilon_frac, const TestFunction& h) {
  ReferenceBounds out;
  const bool paper_eps = epsilon_frac == 0.5;
  const double eps = epsilon_for(theta0, epsilon_frac);

  auto generic = [&]() -> std::optional<BoundBreakdown> {
    const auto mse = mse_exact(m, theta0, n);
    if (!mse || !m.param_space.contains_ball(theta0, eps)) return std::nullopt;
    return expfam_bound(m, theta0, n, eps, h, *mse);
  };

  switch (m.family) {
    case ModelFamily::ExpNonCanonical:
      out.new_bound = exp_noncanonical_bound(n, h);
      if (paper_eps) out.ar_bound = ar_bound_exp_noncanonical(n, h);
      break;
    case ModelFamily::ExpCanonical:
      if (n >= 3) {
        out.new_bound = paper_eps ? std::optional(exp_canonical_bound(n, h)) : generic();
        if (out.new_bound) out.ar_bound = out.new_bound->total;
      }
      break;
    case ModelFamily::GeneralizedGamma:
    case ModelFamily::WeibullScale:
      out.new_bound = paper_eps
                          ? gg_bound(n, {theta0, m.shape_d, m.shape_p}, h)
                          : generic();
      break;
    default:
      out.new_bound = generic();
      if (out.new_bound && is_canonical(m)) {
        const auto mse = mse_exact(m, theta0, n);
        out.ar_bound = ar_bound_canonical_expfam(m, theta0, n, eps, h, *mse).total;
      }
      break;
  }
  return out;
}

SimulationResult run_simulation(const SimulationConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const ExpFamilyModel model = make_model(config.model);
  const double theta0 = config.theta0;
  if (!model.param_space.contains(theta0)) {
    throw DomainError("theta0 outside the parameter space of " + model.name);
  }
  const long n = config.n;
  const double info = fisher_info(model, theta0);
  const double standardizer = std::sqrt(static_cast<double>(n) * info);
  const auto& h = config.h.h;

  auto chunk = [&](long index, long first, long count) {
    CounterRng rng = CounterRng::stream(config.seed, static_cast<std::uint64_t>(index));
    ChunkSums s;
    for (long t = 0; t < count; ++t) {
      double sum_t = 0.0;
      for (long i = 0; i < n; ++i) sum_t += model.T(sample_model(model, theta0, rng));
      const double mean_t = sum_t / static_cast<double>(n);
      double est;
      try {
        est = mle_from_mean_t(model, mean_t);
      } catch (const std::exception& e) {
        throw std::runtime_error("MLE failed at trial " + std::to_string(first + t) +
                                 ": " + e.what());
      }
      const double residual = std::fabs(d_value(model, est) - mean_t) /
                              std::max(1.0, std::fabs(mean_t));
      s.max_residual = std::max(s.max_residual, residual);
      const double w = standardizer * (est - theta0);
      const double hw = h(w);
      s.h.add(hw);
      s.h2.add(hw * hw);
      s.w.add(w);
      s.w2.add(w * w);
    }
    return s;
  };

  const auto parts =
      run_chunks<ChunkSums>(config.trials, config.chunk_size, config.threads, chunk);

  CompensatedSum h_sum, h2_sum, w_sum, w2_sum;
  double max_residual = 0.0;
  for (const auto& p : parts) {
    h_sum.add(p.h.value());
    h2_sum.add(p.h2.value());
    w_sum.add(p.w.value());
    w2_sum.add(p.w2.value());
    max_residual = std::max(max_residual, p.max_residual);
  }

  SimulationResult r;
  r.config = config;
  r.sum_h = h_sum.value();
  r.sum_h2 = h2_sum.value();
  r.sum_w = w_sum.value();
  r.sum_w2 = w2_sum.value();
  r.max_mle_residual = max_residual;
  r.expected_h = expected_h_of_z(config.h);
  const double nt = static_cast<double>(config.trials);
  const double mean = r.sum_h / nt;
  r.empirical_distance = std::fabs(mean - r.expected_h);
  if (config.trials > 1) {
    const double var = std::max(0.0, (r.sum_h2 - nt * mean * mean) / (nt - 1.0));
    r.standard_error = std::sqrt(var / nt);
  }

  auto refs = reference_bounds(model, theta0, n, config.epsilon_frac, config.h);
  r.new_breakdown = refs.new_bound;
  if (refs.new_bound) r.bound_new = refs.new_bound->total;
  r.bound_ar = refs.ar_bound;
  r.elapsed = std::chrono::steady_clock::now() - start;
  return r;
}

const std::vector<long>& table1_sizes() {
  static const std::vector<long> sizes = {10, 100, 1000, 10000, 100000};
  return sizes;
}

std::uint64_t table1_row_seed(std::uint64_t seed, long n) {
  return CounterRng::mix(seed ^ CounterRng::mix(static_cast<std::uint64_t>(n)));
}

std::vector<SimulationResult> table1(long trials, std::uint64_t seed,
                                     unsigned threads) {
  if (trials < 1000) throw DomainError("table1 requires at least 1000 trials");
  std::vector<SimulationResult> rows;
  for (long n : table1_sizes()) {
    SimulationConfig cfg;
    cfg.model.id = "exp-noncanonical";
    cfg.theta0 = 2.0;
    cfg.n = n;
    cfg.trials = trials;
    cfg.seed = table1_row_seed(seed, n);
    cfg.h = paper_test_function();
    cfg.threads = threads;
    rows.push_back(run_simulation(cfg));
  }
  return rows;
}

std::vector<Table1BoundRow> table1_bounds() {
  const TestFunction h = paper_test_function();
  std::vector<Table1BoundRow> rows;
  for (long n : table1_sizes()) {
    rows.push_back({n, exp_noncanonical_bound(n, h).total,
                    ar_bound_exp_noncanonical(n, h)});
  }
  return rows;
}

}  // namespace mlebound
