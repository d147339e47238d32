#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>
#include <random>

#include "srdt/errors.hpp"
#include "srdt/fme.hpp"

#include "property_suites.hpp"

using namespace srdt;

namespace {

const std::string kDir = std::string(SRDT_DATA_DIR) + "/systems";

Rational eval(const LinRow& r, const std::vector<Rational>& x, const std::vector<Rational>& c) {
  Rational v = r.offset;
  for (std::size_t i = 0; i < x.size(); ++i) v += r.vars[i] * x[i];
  for (std::size_t k = 0; k < c.size(); ++k) v += r.consts[k] * c[k];
  return v;
}

bool satisfies(const LinIneqSystem& s, const std::vector<Rational>& x,
               const std::vector<Rational>& c) {
  for (const auto& r : s.inequalities)
    if (eval(r, x, c) < 0) return false;
  for (const auto& r : s.equalities)
    if (eval(r, x, c) != 0) return false;
  return true;
}

// Does some value of variable j extend x (x[j] ignored)? Each row bounds
// x[j] on one side; the answer is whether the bounds leave an interval.
bool extendable(const LinIneqSystem& s, std::vector<Rational> x, std::size_t j,
                const std::vector<Rational>& c) {
  x[j] = 0;
  std::optional<Rational> lo, hi;
  for (const auto& r : s.inequalities) {
    Rational rest = eval(r, x, c), a = r.vars[j];
    if (a == 0) {
      if (rest < 0) return false;
    } else if (a > 0) {
      Rational b = -rest / a;
      if (!lo || b > *lo) lo = b;
    } else {
      Rational b = -rest / a;
      if (!hi || b < *hi) hi = b;
    }
  }
  return !lo || !hi || *lo <= *hi;
}

LinIneqSystem random_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-2, 2);
  LinIneqSystem s;
  s.variables = {"x", "y", "z"};
  s.constants = {"a"};
  for (int i = 0; i < 6; ++i) {
    LinRow r;
    for (int k = 0; k < 3; ++k) r.vars.push_back(coef(rng));
    r.consts.push_back(coef(rng));
    r.offset = coef(rng);
    s.inequalities.push_back(r);
  }
  return s;
}

}  // namespace

TEST_CASE("two-row elimination") {
  auto s = parse_system("constants: a b\nvariables: x y\nx + y >= a\nb - y >= 0\n");
  auto e = fm_eliminate(s, "y");
  REQUIRE(e.variables == std::vector<std::string>{"x"});
  REQUIRE(e.inequalities.size() == 1);
  const auto& r = e.inequalities[0];
  // x - a + b >= 0
  CHECK(r.vars[0] > 0);
  CHECK(r.consts[0] == -r.vars[0]);
  CHECK(r.consts[1] == r.vars[0]);
  CHECK(r.offset == 0);
  CHECK(e.equalities.empty());
}

TEST_CASE("parse and format") {
  auto s = parse_system("# comment\nconstants: a\nDelta <= 1/2*R1\nR = R0 + R1\nR0 - a >= 0\n");
  CHECK(s.variables == std::vector<std::string>{"Delta", "R1", "R", "R0"});
  CHECK(s.inequalities.size() == 2);
  CHECK(s.equalities.size() == 1);
  CHECK(s.inequalities[0].vars[1] == Rational(1, 2));
  auto back = parse_system(format_system(s));
  CHECK(back.variables == s.variables);
  CHECK(back.constants == s.constants);
  CHECK(systems_equivalent(s, back, 20, 1));
  CHECK_THROWS_AS(parse_system("x >= = 1\n"), ArgumentError);
  CHECK_THROWS_AS(fm_eliminate(s, "nope"), ArgumentError);
  CHECK_THROWS_AS(load_system(kDir + "/missing.sys"), ArgumentError);
}

TEST_CASE("projection with no variables is the identity") {
  auto s = load_system(kDir + "/eq92.sys");
  auto p = fm_project(s, {});
  CHECK(p.variables == s.variables);
  CHECK(p.inequalities == s.inequalities);
  CHECK(p.equalities == s.equalities);
}

TEST_CASE("helper elimination reproduces the target region") {
  auto s = load_system(kDir + "/eq92.sys");
  auto p = fm_project(s, {"R00", "R01", "R10", "R11"});
  auto target = load_system(kDir + "/eq14.sys");
  CHECK(p.variables == target.variables);
  auto rep = compare_systems(p, target, 200, 5);
  CAPTURE(rep.first_disagreement);
  CHECK(rep.equivalent);
  CHECK(rep.disagreements == 0);
  CHECK(rep.samples == 200);
}

TEST_CASE("encryption elimination") {
  auto s = load_system(kDir + "/eq114.sys");
  auto p = fm_project(s, {"Rt0", "Rt1", "R00", "R01", "R10", "R11"});
  CHECK(systems_equivalent(p, load_system(kDir + "/eq115.sys"), 200, 6));
}

TEST_CASE("gray-wyner elimination") {
  auto s = load_system(kDir + "/eq147.sys");
  auto p = fm_project(s, {"R0", "Rb0"});
  CHECK(systems_equivalent(p, load_system(kDir + "/thm5.sys"), 200, 7));
}

TEST_CASE("oracle detects a loosened region") {
  auto target = load_system(kDir + "/eq14.sys");
  CHECK(systems_equivalent(target, target, 50, 1));
  auto loose = parse_system(
      "constants: a b\nvariables: R R1 Delta\nR + R1 >= a + b\nDelta <= b\n"
      "Delta <= R1 + 1/10\nR >= 0\nR1 >= 0\n");
  auto p = fm_project(load_system(kDir + "/eq92.sys"), {"R00", "R01", "R10", "R11"});
  auto rep = compare_systems(p, loose, 50, 2);
  CHECK_FALSE(rep.equivalent);
  CHECK(rep.disagreements > 0);
}

TEST_CASE("aliased constants") {
  auto a = parse_system("constants: a\nvariables: x\nx >= a\n");
  auto b = parse_system("constants: q\nvariables: x\nx >= q\n");
  CHECK(systems_equivalent(a, b, 20, 3, {{"q", "a"}}));
  auto c = parse_system("constants: a\nvariables: y\ny >= a\n");
  CHECK_THROWS_AS(systems_equivalent(a, c, 5, 1), ArgumentError);
}

TEST_CASE("projection soundness on random systems") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> val(-16, 16);
  int feasible = 0;
  for (int rep = 0; rep < 60; ++rep) {
    auto s = random_system(rng);
    std::size_t j = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
    auto e = fm_eliminate(s, s.variables[j]);
    for (int k = 0; k < 200; ++k) {
      std::vector<Rational> x(3), c = {Rational(std::abs(val(rng)), 4)};
      for (auto& v : x) v = Rational(val(rng), 4);
      std::vector<Rational> xr;
      for (std::size_t i = 0; i < 3; ++i)
        if (i != j) xr.push_back(x[i]);
      bool proj = satisfies(e, xr, c);
      bool ext = extendable(s, x, j, c);
      feasible += ext;
      CHECK(proj == ext);
    }
  }
  CHECK(feasible > 100);
}

TEST_CASE("order independence") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    auto t = props::fm_order_independence(seed, kDir, 30);
    CAPTURE(t.first);
    CHECK(t.failures == 0);
  }
}

TEST_CASE("projection runtime") {
  auto t0 = std::chrono::steady_clock::now();
  auto p = fm_project(load_system(kDir + "/eq114.sys"), {"Rt0", "Rt1", "R00", "R01", "R10", "R11"});
  auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(dt < 2.0);
  CHECK(p.variables == std::vector<std::string>{"R", "R1", "Delta"});
}
