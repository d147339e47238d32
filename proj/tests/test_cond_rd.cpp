#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "srdt/cond_rd.hpp"
#include "srdt/errors.hpp"
#include "srdt/prob.hpp"

using namespace srdt;

namespace {

double h2(double a) {
  if (a <= 0.0 || a >= 1.0) return 0.0;
  return -a * std::log2(a) - (1 - a) * std::log2(1 - a);
}

// Grid oracle for binary S0, S1, S1hat. Given S0 = s, the kernel has two free
// parameters (P(1|s,0), P(1|s,1)); both are enumerated at `steps` per unit.
// Rate and distortion split over s, so per-s Pareto fronts are combined under
// the shared budget. Every returned value is attained by a grid kernel.
struct Front {
  std::vector<std::pair<double, double>> pts;  // (distortion, min rate), sorted

  double rate_at(double budget) const {
    auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(budget + 1e-15, 1e300));
    if (it == pts.begin()) return INFINITY;
    return std::prev(it)->second;
  }
};

Front front_for(double q0, double q1, const DistortionMeasure& d, int steps) {
  // q0, q1: P(S1 = 0 | S0 = s), P(S1 = 1 | S0 = s)
  std::vector<std::pair<double, double>> raw;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      double a = double(i) / steps, b = double(j) / steps;  // P(hat=1 | s1)
      double pj[2][2] = {{q0 * (1 - a), q0 * a}, {q1 * (1 - b), q1 * b}};
      double ph[2] = {pj[0][0] + pj[1][0], pj[0][1] + pj[1][1]};
      double ps[2] = {q0, q1};
      double mi = 0.0, dist = 0.0;
      for (int s1 = 0; s1 < 2; ++s1)
        for (int h = 0; h < 2; ++h) {
          double p = pj[s1][h];
          if (p > 0.0) mi += p * std::log2(p / (ps[s1] * ph[h]));
          dist += p * d(s1, h);
        }
      raw.emplace_back(dist, std::max(mi, 0.0));
    }
  std::sort(raw.begin(), raw.end());
  Front f;
  double best = INFINITY;
  for (auto& [dist, r] : raw) {
    best = std::min(best, r);
    f.pts.emplace_back(dist, best);
  }
  return f;
}

double grid_oracle(const JointPmf& src, const DistortionMeasure& d, double budget,
                   int steps = 200) {
  double p0 = src.at({0, 0}) + src.at({0, 1});
  double p1 = 1.0 - p0;
  Front f0 = front_for(src.at({0, 0}) / p0, src.at({0, 1}) / p0, d, steps);
  Front f1 = front_for(src.at({1, 0}) / p1, src.at({1, 1}) / p1, d, steps);
  double best = INFINITY;
  for (auto& [e0, r0] : f0.pts) {
    double rest = budget - p0 * e0;
    if (rest < -1e-15) break;
    best = std::min(best, p0 * r0 + p1 * f1.rate_at(rest / p1));
  }
  return best;
}

}  // namespace

TEST_CASE("dsbs closed form") {
  CHECK(dsbs_cond_rd(0.25, 0.25) == 0.0);
  CHECK(dsbs_cond_rd(0.25, 0.05) == doctest::Approx(0.524881).epsilon(1e-6));
  CHECK(dsbs_cond_rd(0.25, 0.05) == doctest::Approx(h2(0.25) - h2(0.05)).epsilon(1e-14));
  CHECK(dsbs_cond_rd(0.0, 0.1) == 0.0);
  CHECK(dsbs_cond_rd(0.0, 0.0) == 0.0);
  CHECK(dsbs_cond_rd(0.3, 0.9) == 0.0);
  CHECK_THROWS_AS(dsbs_cond_rd(0.6, 0.1), ArgumentError);
  CHECK_THROWS_AS(dsbs_cond_rd(0.2, -0.1), ArgumentError);
}

TEST_CASE("conditional rd examples") {
  auto src = make_dsbs(0.25);
  auto ham = DistortionMeasure::hamming(2);
  CHECK(conditional_rd(src, ham, 0.25) <= 1e-6);
  double mid = conditional_rd(src, ham, 0.1);
  CHECK(mid == doctest::Approx(0.342282).epsilon(1e-3));
  double oracle = grid_oracle(src, ham, 0.1);
  CHECK(mid <= oracle + 1e-9);
  CHECK(oracle - mid <= 2e-3);
  double lossless = conditional_rd(src, ham, 0.0);
  CHECK(lossless == doctest::Approx(h2(0.25)).epsilon(1e-6));
  CHECK(grid_oracle(src, ham, 0.0) == doctest::Approx(lossless).epsilon(1e-9));
  CHECK_THROWS_AS(conditional_rd(src, ham, -0.01), ArgumentError);
}

TEST_CASE("grid oracle on asymmetric sources") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  DistortionMeasure skew({{0.0, 1.0}, {2.0, 0.0}});
  for (int rep = 0; rep < 4; ++rep) {
    std::vector<double> p(4);
    double z = 0.0;
    for (auto& x : p) z += (x = u(rng));
    for (auto& x : p) x /= z;
    JointPmf src({"S0", "S1"}, {2, 2}, p);
    for (const auto& d : {DistortionMeasure::hamming(2), skew}) {
      double hi = slack_distortion(src, {"S0"}, {"S1"}, "S1", d);
      for (double frac : {0.0, 0.2, 0.5, 0.8}) {
        double budget = frac * hi;
        double v = conditional_rd(src, d, budget);
        double o = grid_oracle(src, d, budget);
        CHECK(v <= o + 1e-9);
        CHECK(o - v <= 5e-3);
      }
    }
  }
}

TEST_CASE("solver witness meets its budget") {
  auto src = make_dsbs(0.3);
  auto ham = DistortionMeasure::hamming(2);
  auto r = solve_conditional_rd(src, {"S0"}, {"S1"}, "S1", ham, 0.12, "S1hat");
  CHECK(r.distortion <= 0.12 + 1e-9);
  CHECK(r.kernel_rate == doctest::Approx(r.value).epsilon(1e-6));
  auto joint = extend_joint(src, r.kernel);
  CHECK(mutual_information(joint, {"S1hat"}, {"S1"}, {"S0"}) ==
        doctest::Approx(r.kernel_rate).epsilon(1e-9));
  CHECK(min_expected_distortion(src, {"S0"}, {"S1"}, "S1", ham) == 0.0);
  CHECK(slack_distortion(src, {"S0"}, {"S1"}, "S1", ham) == doctest::Approx(0.3));
}

TEST_CASE("monotone, convex, zero past slack") {
  auto ham = DistortionMeasure::hamming(2);
  for (double p : {0.1, 0.25, 0.4}) {
    auto src = make_dsbs(p);
    std::vector<double> vals;
    for (int i = 0; i <= 10; ++i) vals.push_back(conditional_rd(src, ham, p * i / 10.0));
    for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] <= vals[i - 1] + 1e-9);
    for (std::size_t i = 1; i + 1 < vals.size(); ++i)
      CHECK(vals[i] <= 0.5 * (vals[i - 1] + vals[i + 1]) + 1e-3);
    CHECK(conditional_rd(src, ham, p) <= 1e-6);
    CHECK(conditional_rd(src, ham, p + 0.05) <= 1e-6);
  }
}

TEST_CASE("dsbs oracle agreement spot checks") {
  auto ham = DistortionMeasure::hamming(2);
  for (double p : {0.05, 0.2, 0.45})
    for (double d1 : {0.0, 0.01, p / 2, p - 0.01}) {
      double v = conditional_rd(make_dsbs(p), ham, d1);
      CHECK(std::abs(v - std::max(h2(p) - h2(d1), 0.0)) <= 1e-3);
    }
}
