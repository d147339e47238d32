#include "srdt/lemma1.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_set>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "srdt/errors.hpp"
#include "srdt/parallel.hpp"

namespace srdt {

namespace mp = boost::multiprecision;
using mp::cpp_int;

namespace {

double ratio(const cpp_int& num, const cpp_int& den) {
  // cpp_int -> double overflows for big binomials; go through a wide float.
  mp::cpp_bin_float_50 q = mp::cpp_bin_float_50(num) / mp::cpp_bin_float_50(den);
  return q.convert_to<double>();
}

cpp_int binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  cpp_int r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

void HypergeomParams::validate() const {
  if (!(B >= 1 && B <= N)) throw ArgumentError("need 1 <= B <= N");
  if (!(K >= 1 && K <= N)) throw ArgumentError("need 1 <= K <= N");
  if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be > 0");
}

std::vector<double> HypergeomPmf::probabilities() const {
  std::vector<double> p;
  p.reserve(numerators.size());
  for (const auto& x : numerators) p.push_back(ratio(x, denominator));
  return p;
}

bool HypergeomPmf::sums_to_one() const {
  cpp_int s = 0;
  for (const auto& x : numerators) s += x;
  return s == denominator;
}

HypergeomPmf hypergeom_pmf(const HypergeomParams& p) {
  p.validate();
  HypergeomPmf out;
  const std::uint64_t rest = p.N - p.B;
  out.j_min = p.K > rest ? p.K - rest : 0;
  const std::uint64_t j_max = std::min(p.B, p.K);
  out.denominator = binomial(p.N, p.K);
  // Walk C(B,j) up and C(N-B,K-j) down incrementally.
  cpp_int cb = binomial(p.B, out.j_min);
  cpp_int cr = binomial(rest, p.K - out.j_min);
  for (std::uint64_t j = out.j_min; j <= j_max; ++j) {
    out.numerators.push_back(cb * cr);
    if (j == j_max) break;
    cb = cb * (p.B - j) / (j + 1);
    // C(r, m-1) = C(r, m) * m / (r - m + 1) with m = K - j.
    std::uint64_t m = p.K - j;
    cr = cr * m / (rest - m + 1);
  }
  return out;
}

HypergeomStats hypergeom_stats(const HypergeomParams& p) {
  p.validate();
  const double N = static_cast<double>(p.N), B = static_cast<double>(p.B),
               K = static_cast<double>(p.K);
  HypergeomStats s;
  s.mean = B * K / N;
  s.variance = p.N == 1 ? 0.0 : s.mean * ((N - B) / N) * ((N - K) / (N - 1.0));
  return s;
}

HypergeomStats hypergeom_stats_by_summation(const HypergeomParams& p) {
  HypergeomPmf pmf = hypergeom_pmf(p);
  cpp_int m1 = 0, m2 = 0;
  for (std::size_t i = 0; i < pmf.numerators.size(); ++i) {
    cpp_int j = pmf.j_min + i;
    m1 += j * pmf.numerators[i];
    m2 += j * j * pmf.numerators[i];
  }
  // Var = (m2 den - m1^2) / den^2, exact before rounding.
  HypergeomStats s;
  s.mean = ratio(m1, pmf.denominator);
  s.variance = ratio(m2 * pmf.denominator - m1 * m1, pmf.denominator * pmf.denominator);
  return s;
}

double concentration_bound(const HypergeomParams& p) {
  HypergeomStats s = hypergeom_stats(p);
  if (!(s.mean > 0.0)) throw ArgumentError("concentration bound needs a positive mean");
  return s.variance / (p.epsilon * p.epsilon * s.mean * s.mean);
}

ExponentialForm exponential_bound(double epsilon, int n, double rate_tilde,
                                  double info, double eps_n) {
  if (!(epsilon > 0.0) || n < 1) throw ArgumentError("need epsilon > 0 and n >= 1");
  ExponentialForm f;
  double e_minus = n * (rate_tilde - info - 2.0 * eps_n);
  double e_plus = n * (rate_tilde - info + 2.0 * eps_n);
  f.center_minus = std::exp2(e_minus);
  f.center_plus = std::exp2(e_plus);
  f.bound_minus = std::exp2(-e_minus) / (epsilon * epsilon);
  f.bound_plus = std::exp2(-e_plus) / (epsilon * epsilon);
  return f;
}

std::vector<std::uint64_t> sample_without_replacement(std::mt19937_64& rng,
                                                      std::uint64_t n,
                                                      std::uint64_t k) {
  if (k > n) throw ArgumentError("cannot draw more items than the population");
  std::unordered_set<std::uint64_t> chosen;
  std::vector<std::uint64_t> out;
  out.reserve(k);
  for (std::uint64_t j = n - k; j < n; ++j) {
    std::uint64_t t = uniform_index(rng, j + 1);
    if (chosen.insert(t).second) {
      out.push_back(t);
    } else {
      chosen.insert(j);
      out.push_back(j);
    }
  }
  return out;
}

std::uint64_t sample_hypergeometric(std::mt19937_64& rng, std::uint64_t N,
                                    std::uint64_t B, std::uint64_t K) {
  std::uint64_t c = 0;
  for (auto v : sample_without_replacement(rng, N, K)) c += v < B ? 1 : 0;
  return c;
}

IntersectionSamples simulate_intersection(const JointPmf& joint,
                                          const TypicalityParams& params,
                                          double codebook_rate, int trials,
                                          std::uint64_t seed) {
  params.validate();
  if (joint.labels() != LabelSet{"S0", "S1", "S1hat"})
    throw ArgumentError("simulate_intersection expects labels S0, S1, S1hat");
  if (trials < 0) throw ArgumentError("trials must be >= 0");
  const int n = params.n;
  const int m0 = joint.sizes()[0], m1 = joint.sizes()[1], mh = joint.sizes()[2];
  JointPmf p01 = joint.marginal({"S0", "S1"});
  JointPmf p0h = joint.marginal({"S0", "S1hat"});

  const std::uint64_t n_hat = checked_power(mh, n);
  const std::uint64_t n_pair = checked_power(m0 * m1, n);
  (void)n_pair;

  // Typical pairs, then keep those with a nonempty marked set.
  std::vector<Seq> pairs = typical_set(p01, params);
  std::vector<Seq> hats;
  hats.reserve(n_hat);
  for (std::uint64_t c = 0; c < n_hat; ++c) hats.push_back(seq_from_code(c, mh, n));

  struct Split {
    Seq s0, s1;
    std::vector<std::uint64_t> marked, unmarked;
  };
  // Visit typical pairs in a seeded random order; keep the first whose
  // marked set is nonempty.
  auto pick = substream(seed, 0, 0x1e33a1);
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[uniform_index(pick, i)]);
  std::optional<Split> found;
  for (std::size_t idx : order) {
    Split sp;
    sp.s0.resize(n);
    sp.s1.resize(n);
    for (int i = 0; i < n; ++i) {
      sp.s0[i] = pairs[idx][i] / m1;
      sp.s1[i] = pairs[idx][i] % m1;
    }
    for (std::uint64_t c = 0; c < n_hat; ++c) {
      if (!is_jointly_typical({&sp.s0, &hats[c]}, p0h, params.delta)) continue;
      if (is_jointly_typical({&sp.s0, &sp.s1, &hats[c]}, joint, params.delta))
        sp.marked.push_back(c);
      else
        sp.unmarked.push_back(c);
    }
    if (!sp.marked.empty()) {
      found = std::move(sp);
      break;
    }
  }
  if (!found)
    throw DegenerateInputError("no typical (s0, s1) pair with a jointly typical s1hat");
  const Split& sp = *found;

  IntersectionSamples out;
  out.s0 = sp.s0;
  out.s1 = sp.s1;
  out.B = sp.marked.size();
  out.N = out.B + sp.unmarked.size();
  double k = std::round(std::exp2(n * codebook_rate));
  out.K = static_cast<std::uint64_t>(std::clamp(k, 1.0, static_cast<double>(out.N)));
  {
    JointPmf p0 = joint.marginal({"S0"});
    double hit = 0.0;
    for (auto c : sp.marked) {
      double pr = 1.0;
      for (int i = 0; i < n; ++i) {
        double ps0 = p0.probs()[sp.s0[i]];
        pr *= ps0 > 0.0 ? p0h.at({sp.s0[i], hats[c][i]}) / ps0 : 0.0;
      }
      hit += pr;
    }
    out.per_letter_hit = hit;
    out.per_letter_mean = hit * static_cast<double>(out.K);
  }
  out.counts.assign(static_cast<std::size_t>(trials), 0);
  parallel_for(out.counts.size(), [&](std::size_t t) {
    auto rng = substream(seed, t, 0x1e33a2);
    out.counts[t] = sample_hypergeometric(rng, out.N, out.B, out.K);
  });
  return out;
}

}  // namespace srdt
