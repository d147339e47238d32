#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace srdt {

using Rational = boost::multiprecision::cpp_rational;

// sum_i vars[i]*x_i + sum_k consts[k]*c_k + offset  (>= 0 or == 0)
struct LinRow {
  std::vector<Rational> vars;
  std::vector<Rational> consts;
  Rational offset;

  bool operator==(const LinRow& o) const {
    return vars == o.vars && consts == o.consts && offset == o.offset;
  }
};

// Linear system over rate variables and nonnegative symbolic constants.
struct LinIneqSystem {
  std::vector<std::string> variables;
  std::vector<std::string> constants;
  std::vector<LinRow> inequalities;
  std::vector<LinRow> equalities;

  std::size_t var_index(const std::string& name) const;
  bool has_variable(const std::string& name) const;
};

// Text format: optional "constants:" and "variables:" header lines, then one
// relation per line ("R00 + R10 - b >= 0", "Delta <= 1/2*R1", "R = R0 + R1").
// '#' starts a comment. Without a variables header, every non-constant name
// is a variable, in order of first appearance.
LinIneqSystem parse_system(const std::string& text);
LinIneqSystem load_system(const std::string& path);
std::string format_row(const LinIneqSystem& sys, const LinRow& row,
                       const char* relation);
std::string format_system(const LinIneqSystem& sys);

LinIneqSystem fm_eliminate(const LinIneqSystem& sys, const std::string& var);
LinIneqSystem fm_project(const LinIneqSystem& sys,
                         const std::vector<std::string>& vars);

struct EquivalenceReport {
  bool equivalent = true;
  int samples = 0;
  long long points_checked = 0;
  int disagreements = 0;
  std::string first_disagreement;
};

// Semantic comparison over random constant assignments. `alias` renames
// constants of `b` to constants of `a`.
EquivalenceReport compare_systems(
    const LinIneqSystem& a, const LinIneqSystem& b, int samples,
    std::uint64_t seed, const std::map<std::string, std::string>& alias = {},
    int points_per_sample = 1000);

bool systems_equivalent(const LinIneqSystem& a, const LinIneqSystem& b,
                        int samples, std::uint64_t seed,
                        const std::map<std::string, std::string>& alias = {});

}  // namespace srdt
