#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "srdt/prob.hpp"
#include "srdt/typical.hpp"

namespace srdt {

// Population N, marked B, draws K, relative deviation epsilon.
struct HypergeomParams {
  std::uint64_t N = 1;
  std::uint64_t B = 1;
  std::uint64_t K = 1;
  double epsilon = 1.0;

  void validate() const;
};

struct HypergeomStats {
  double mean = 0.0;
  double variance = 0.0;
};

// P(C = j) = C(B,j) C(N-B,K-j) / C(N,K) for j in [j_min, j_max], kept as
// exact integers over a common denominator.
struct HypergeomPmf {
  std::uint64_t j_min = 0;
  std::vector<boost::multiprecision::cpp_int> numerators;
  boost::multiprecision::cpp_int denominator;

  std::vector<double> probabilities() const;
  bool sums_to_one() const;  // exact
};

HypergeomPmf hypergeom_pmf(const HypergeomParams& params);
HypergeomStats hypergeom_stats(const HypergeomParams& params);
// Moments by direct summation of the exact pmf.
HypergeomStats hypergeom_stats_by_summation(const HypergeomParams& params);

// Var(C) / (epsilon^2 E(C)^2).
double concentration_bound(const HypergeomParams& params);

// Exponential forms with K = 2^{n rate_tilde} and information I:
//   center_minus = 2^{n[rate_tilde - info - 2 eps_n]}, bound_minus = 2^{-n[...]}/eps^2
// and the same with +2 eps_n.
struct ExponentialForm {
  double center_minus = 0.0;
  double center_plus = 0.0;
  double bound_minus = 0.0;
  double bound_plus = 0.0;
};
ExponentialForm exponential_bound(double epsilon, int n, double rate_tilde,
                                  double info, double eps_n);

// Draws k distinct values from [0, n) (Floyd's algorithm).
std::vector<std::uint64_t> sample_without_replacement(std::mt19937_64& rng,
                                                      std::uint64_t n,
                                                      std::uint64_t k);
std::uint64_t sample_hypergeometric(std::mt19937_64& rng, std::uint64_t N,
                                    std::uint64_t B, std::uint64_t K);

struct IntersectionSamples {
  std::uint64_t N = 0, B = 0, K = 0;
  Seq s0, s1;  // the fixed typical pair
  std::vector<std::uint64_t> counts;
  // Same count under the per-letter bank of codec-sim (K codewords drawn
  // i.i.d. from P(S1hat|S0) position by position): expected C = K * hit.
  double per_letter_hit = 0.0;
  double per_letter_mean = 0.0;
};

// `joint` is over (S0, S1, S1hat). Population: s1hat^n jointly typical with
// the fixed s0^n; marked: those also jointly typical with s1^n. Each trial
// draws K = round(2^{n codebook_rate}) population members without
// replacement and counts the marked ones.
IntersectionSamples simulate_intersection(const JointPmf& joint,
                                          const TypicalityParams& params,
                                          double codebook_rate, int trials,
                                          std::uint64_t seed);

}  // namespace srdt
