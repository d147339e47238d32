#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace srdt {

// Worker count: hardware concurrency, capped by SRDT_THREADS when set.
unsigned worker_count();

// Runs body(i) for i in [0, count). Callers write results into slot i and
// reduce in index order afterwards, so output does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Independent generator keyed by (seed, index, tag).
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index,
                          std::uint64_t tag);

// Uniform double in [0,1) from the top 53 bits.
double uniform01(std::mt19937_64& rng);

// Unbiased uniform integer in [0, k).
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t k);

// Inverse-CDF draw from a finite distribution.
int sample_discrete(std::mt19937_64& rng, const double* probs, std::size_t n);

}  // namespace srdt
