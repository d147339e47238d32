#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "srdt/errors.hpp"
#include "srdt/lemma1.hpp"
#include "srdt/parallel.hpp"

using namespace srdt;

namespace {

long double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double c = 1.0L;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Moments from the pmf C(B,j) C(N-B,K-j) / C(N,K).
std::pair<long double, long double> enum_moments(int N, int B, int K) {
  long double m1 = 0, m2 = 0, tot = choose(N, K);
  for (int j = 0; j <= std::min(B, K); ++j) {
    long double p = choose(B, j) * choose(N - B, K - j) / tot;
    m1 += j * p;
    m2 += static_cast<long double>(j) * j * p;
  }
  return {m1, m2 - m1 * m1};
}

// Typicality counted letter by letter, independent of the library.
bool typical_counts(const std::vector<const Seq*>& seqs, const JointPmf& pmf, double delta) {
  int n = static_cast<int>(seqs[0]->size());
  std::vector<int> counts(pmf.size(), 0);
  for (int i = 0; i < n; ++i) {
    std::vector<int> sym;
    for (auto* s : seqs) sym.push_back((*s)[i]);
    ++counts[pmf.flat(sym)];
  }
  for (std::size_t a = 0; a < pmf.size(); ++a) {
    double p = pmf.probs()[a];
    if (p == 0.0 && counts[a] > 0) return false;
    if (std::abs(double(counts[a]) / n - p) > delta + 1e-12) return false;
  }
  return true;
}

JointPmf dsbs_with_uniform_hat(double p) {
  ChannelKernel hat({"S0"}, {2}, {"S1hat"}, {2}, {{0.5, 0.5}, {0.5, 0.5}});
  return extend_joint(make_dsbs(p), hat);
}

}  // namespace

TEST_CASE("moments") {
  auto s = hypergeom_stats({20, 5, 8, 1.0});
  auto [m, v] = enum_moments(20, 5, 8);
  CHECK(s.mean == doctest::Approx(2.0));
  CHECK(s.mean == doctest::Approx(double(m)).epsilon(1e-12));
  CHECK(s.variance == doctest::Approx(0.947368).epsilon(1e-6));
  CHECK(s.variance == doctest::Approx(double(v)).epsilon(1e-12));
  auto e = hypergeom_stats_by_summation({20, 5, 8, 1.0});
  CHECK(e.mean == doctest::Approx(s.mean).epsilon(1e-12));
  CHECK(e.variance == doctest::Approx(s.variance).epsilon(1e-12));

  auto full = hypergeom_stats({30, 7, 30, 1.0});
  CHECK(full.mean == doctest::Approx(7.0));
  CHECK(full.variance == doctest::Approx(0.0));
  auto marked = hypergeom_stats({30, 30, 9, 1.0});
  CHECK(marked.mean == doctest::Approx(9.0));
  CHECK(marked.variance == doctest::Approx(0.0));
  auto one = hypergeom_stats({1, 1, 1, 1.0});
  CHECK(one.variance == 0.0);

  auto big = hypergeom_stats({1000, 50, 100, 1.0});
  auto [bm, bv] = enum_moments(1000, 50, 100);
  CHECK(big.mean == doctest::Approx(5.0));
  CHECK(big.variance == doctest::Approx(double(bv)).epsilon(1e-10));
  auto bs = hypergeom_stats_by_summation({1000, 50, 100, 1.0});
  CHECK(bs.variance == doctest::Approx(big.variance).epsilon(1e-12));
}

TEST_CASE("pmf is exact") {
  for (auto prm : {HypergeomParams{20, 5, 8, 1}, HypergeomParams{1000, 50, 100, 1},
                   HypergeomParams{40, 35, 30, 1}}) {
    auto pmf = hypergeom_pmf(prm);
    CHECK(pmf.sums_to_one());
    auto p = pmf.probabilities();
    double z = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      int j = static_cast<int>(pmf.j_min + i);
      double o = double(choose(prm.B, j) * choose(prm.N - prm.B, prm.K - j) / choose(prm.N, prm.K));
      CHECK(p[i] == doctest::Approx(o).epsilon(1e-10));
      z += p[i];
    }
    CHECK(z == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(hypergeom_pmf({40, 35, 30, 1}).j_min == 25);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS((HypergeomParams{10, 0, 3, 1}).validate(), ArgumentError);
  CHECK_THROWS_AS((HypergeomParams{10, 11, 3, 1}).validate(), ArgumentError);
  CHECK_THROWS_AS((HypergeomParams{10, 3, 11, 1}).validate(), ArgumentError);
  CHECK_THROWS_AS((HypergeomParams{10, 3, 3, 0}).validate(), ArgumentError);
}

TEST_CASE("chebyshev bound") {
  CHECK(concentration_bound({20, 5, 8, 1.0}) == doctest::Approx(0.947368 / 4).epsilon(1e-6));
  CHECK(concentration_bound({20, 5, 8, 1.0}) == doctest::Approx(0.236842).epsilon(1e-6));
  CHECK(concentration_bound({20, 5, 8, 1e6}) < 1e-12);
  CHECK(concentration_bound({20, 5, 20, 1.0}) == 0.0);
}

TEST_CASE("exponential form") {
  auto f = exponential_bound(0.5, 10, 0.6, 0.3, 0.01);
  double e_minus = 10 * (0.6 - 0.3 - 0.02), e_plus = 10 * (0.6 - 0.3 + 0.02);
  CHECK(f.center_minus == doctest::Approx(std::pow(2.0, e_minus)).epsilon(1e-12));
  CHECK(f.center_plus == doctest::Approx(std::pow(2.0, e_plus)).epsilon(1e-12));
  CHECK(f.bound_minus == doctest::Approx(std::pow(2.0, -e_minus) / 0.25).epsilon(1e-12));
  CHECK(f.bound_plus == doctest::Approx(std::pow(2.0, -e_plus) / 0.25).epsilon(1e-12));
}

TEST_CASE("samplers") {
  auto rng = substream(1, 2, 3);
  for (int rep = 0; rep < 50; ++rep) {
    auto s = sample_without_replacement(rng, 30, 12);
    std::set<std::uint64_t> u(s.begin(), s.end());
    CHECK(u.size() == 12);
    CHECK(*u.rbegin() < 30);
  }
  CHECK(sample_without_replacement(rng, 5, 5).size() == 5);
  CHECK_THROWS_AS(sample_without_replacement(rng, 5, 6), ArgumentError);
  double sum = 0.0;
  const int T = 20000;
  for (int t = 0; t < T; ++t) sum += double(sample_hypergeometric(rng, 20, 5, 8));
  double se = std::sqrt(0.947368 / T);
  CHECK(std::abs(sum / T - 2.0) <= 3 * se);
}

TEST_CASE("intersection with every codeword marked") {
  auto joint = dsbs_with_uniform_hat(0.25);
  auto s = simulate_intersection(joint, {5, 1.0}, 0.6, 50, 3);
  CHECK(s.N == 32);
  CHECK(s.B == s.N);
  CHECK(s.K == 8);
  for (auto c : s.counts) CHECK(c == s.K);
}

TEST_CASE("single draw") {
  auto joint = dsbs_with_uniform_hat(0.25);
  auto s = simulate_intersection(joint, {6, 0.3}, 0.0, 4000, 5);
  CHECK(s.K == 1);
  double mean = 0.0;
  for (auto c : s.counts) {
    CHECK(c <= 1);
    mean += double(c);
  }
  mean /= double(s.counts.size());
  double q = double(s.B) / double(s.N);
  CHECK(std::abs(mean - q) <= 3 * std::sqrt(q * (1 - q) / 4000) + 1e-12);
}

TEST_CASE("dsbs moment comparison at n = 8") {
  auto joint = dsbs_with_uniform_hat(0.25);
  auto params = TypicalityParams::with_default_delta(8);
  auto s = simulate_intersection(joint, params, 0.75, 10000, 7);
  CHECK(s.K == 64);
  // Recount N and B for the reported pair by brute force.
  auto m0h = joint.marginal({"S0", "S1hat"});
  std::uint64_t N = 0, B = 0;
  for (std::uint64_t c = 0; c < 256; ++c) {
    Seq h = seq_from_code(c, 2, 8);
    if (!typical_counts({&s.s0, &h}, m0h, params.delta)) continue;
    ++N;
    if (typical_counts({&s.s0, &s.s1, &h}, joint, params.delta)) ++B;
  }
  CHECK(s.N == N);
  CHECK(s.B == B);
  auto st = hypergeom_stats({N, B, s.K, 1.0});
  double mean = 0.0;
  for (auto c : s.counts) mean += double(c);
  mean /= double(s.counts.size());
  CHECK(std::abs(mean - st.mean) <= 3 * std::sqrt(st.variance) / 100 + 1e-12);
  // Per-letter bank: each draw is a Bern(1/2) string, marked with chance B/2^n.
  CHECK(s.per_letter_hit == doctest::Approx(double(B) / 256).epsilon(1e-12));
  CHECK(s.per_letter_mean == doctest::Approx(64.0 * double(B) / 256).epsilon(1e-12));
}

TEST_CASE("degenerate intersection input") {
  // P(S0 != S1) = 0 but the tolerance is too tight for n = 3 on a
  // 1/3-2/3 law: no sequence is typical.
  JointPmf j({"S0", "S1", "S1hat"}, {2, 2, 2},
             {1.0 / 6, 1.0 / 6, 0, 0, 0, 0, 1.0 / 3, 1.0 / 3});
  CHECK_THROWS_AS(simulate_intersection(j, {3, 0.01}, 0.5, 10, 1), DegenerateInputError);
}

TEST_CASE("determinism") {
  auto joint = dsbs_with_uniform_hat(0.25);
  auto a = simulate_intersection(joint, {6, 0.3}, 0.5, 200, 9);
  auto b = simulate_intersection(joint, {6, 0.3}, 0.5, 200, 9);
  CHECK(a.counts == b.counts);
  CHECK(a.s0 == b.s0);
}
