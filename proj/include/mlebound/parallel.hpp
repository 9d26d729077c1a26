#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mlebound {

/// Kahan-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Splits `trials` into fixed-size chunks and evaluates
/// fn(chunk_index, first_trial, count) for each, possibly on several threads.
/// Results come back indexed by chunk so the caller's fold order never
/// depends on scheduling. The exception from the lowest failing chunk is
/// rethrown after all workers stop.
template <class Result, class ChunkFn>
std::vector<Result> run_chunks(long trials, long chunk_size, unsigned threads,
                               ChunkFn fn) {
  const long chunks = (trials + chunk_size - 1) / chunk_size;
  std::vector<Result> results(static_cast<std::size_t>(chunks));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(chunks));
  std::atomic<long> next{0};

  auto worker = [&] {
    for (;;) {
      const long c = next.fetch_add(1);
      if (c >= chunks) return;
      const long first = c * chunk_size;
      const long count = std::min(chunk_size, trials - first);
      try {
        results[static_cast<std::size_t>(c)] = fn(c, first, count);
      } catch (...) {
        errors[static_cast<std::size_t>(c)] = std::current_exception();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<long>(static_cast<long>(threads), std::max(1L, chunks)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace mlebound
