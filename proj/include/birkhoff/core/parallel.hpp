#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace birkhoff {

/// How a sampling job is split. The number of chains fixes the random
/// streams used and therefore the output; workers only affects scheduling.
struct ChainPlan {
  std::size_t chains = 1;
  unsigned workers = 0;  // 0: hardware concurrency

  unsigned effective_workers() const {
    unsigned w = workers ? workers : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(chains, 1)));
  }
};

/// Share of `total` items assigned to chain `chain` out of `chains`.
inline std::size_t chain_share(std::size_t total, std::size_t chains, std::size_t chain) {
  return total / chains + (chain < total % chains ? 1 : 0);
}

/// Runs fn(chain) for chain in [0, chains) on up to plan.workers threads.
/// If any chain throws, the exception of the lowest-numbered failing chain
/// is rethrown after all threads have joined.
template <class Fn>
void for_each_chain(const ChainPlan& plan, Fn&& fn) {
  const std::size_t chains = plan.chains;
  std::vector<std::exception_ptr> errors(chains);
  const unsigned workers = plan.effective_workers();
  if (workers <= 1) {
    for (std::size_t c = 0; c < chains; ++c) {
      try {
        fn(c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chains; c = next++) {
          try {
            fn(c);
          } catch (...) {
            errors[c] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace birkhoff
