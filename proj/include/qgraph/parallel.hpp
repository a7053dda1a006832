#pragma once

#include <cstdint>
#include <functional>

namespace qgraph {

// 0 means: QGRAPH_THREADS if set, else the hardware concurrency.
int resolve_threads(int requested);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work is handed out
// in index order; callers write results into slot i so that the outcome does
// not depend on the worker count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

// SplitMix64 used as a counter-based generator: draw i of stream s is
// mix(seed + (s * 2^32 + i + 1) * golden_gamma).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}
  std::uint64_t at(std::uint64_t counter) const;
  std::uint64_t next() { return at(counter_++); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t seed_, stream_, counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace qgraph
