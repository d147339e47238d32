#include "srdt/fme.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "srdt/errors.hpp"

namespace srdt {

std::size_t LinIneqSystem::var_index(const std::string& name) const {
  auto it = std::find(variables.begin(), variables.end(), name);
  if (it == variables.end()) throw ArgumentError("unknown variable " + name);
  return static_cast<std::size_t>(it - variables.begin());
}

bool LinIneqSystem::has_variable(const std::string& name) const {
  return std::find(variables.begin(), variables.end(), name) != variables.end();
}

// ------------------------------------------------------------------ parsing

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_names(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

Rational parse_number(const std::string& tok) {
  auto slash = tok.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_number(tok.substr(0, slash));
    Rational den = parse_number(tok.substr(slash + 1));
    if (den == 0) throw ArgumentError("system: division by zero in " + tok);
    return num / den;
  }
  auto dot = tok.find('.');
  if (dot == std::string::npos) return Rational(boost::multiprecision::cpp_int(tok));
  std::string whole = tok.substr(0, dot), frac = tok.substr(dot + 1);
  boost::multiprecision::cpp_int scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  boost::multiprecision::cpp_int w(whole.empty() ? "0" : whole);
  boost::multiprecision::cpp_int f(frac.empty() ? "0" : frac);
  return Rational(w * scale + f, scale);
}

using Terms = std::vector<std::pair<std::string, Rational>>;  // "" = constant term

Terms parse_expr(const std::string& s, const std::string& line) {
  Terms terms;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto fail = [&](const std::string& why) {
    throw ArgumentError("system: " + why + " in line: " + line);
  };
  bool first = true;
  skip();
  if (i == s.size()) fail("empty side");
  while (i < s.size()) {
    Rational sign = 1;
    bool saw_op = false;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      saw_op = true;
      ++i;
      skip();
    }
    if (!first && !saw_op) fail("missing operator");
    first = false;
    Rational coef = 1;
    bool have_num = false;
    if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.' || s[j] == '/'))
        ++j;
      coef = parse_number(s.substr(i, j - i));
      have_num = true;
      i = j;
      skip();
      if (i < s.size() && s[i] == '*') {
        ++i;
        skip();
        if (i >= s.size() || !is_name_start(s[i])) fail("expected name after '*'");
      }
    }
    std::string name;
    if (i < s.size() && is_name_start(s[i])) {
      std::size_t j = i;
      while (j < s.size() && is_name_char(s[j])) ++j;
      name = s.substr(i, j - i);
      i = j;
      skip();
      if (i < s.size() && s[i] == '*') {
        ++i;
        skip();
        std::size_t k = i;
        while (k < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[k])) || s[k] == '.' || s[k] == '/'))
          ++k;
        if (k == i) fail("expected number after '*'");
        coef *= parse_number(s.substr(i, k - i));
        i = k;
      }
    } else if (!have_num) {
      fail("unexpected character");
    }
    terms.emplace_back(name, sign * coef);
    skip();
  }
  return terms;
}

struct RawRow {
  Terms lhs, rhs;
  int relation;  // 1: >=, -1: <=, 0: =
  std::string line;
};

}  // namespace

LinIneqSystem parse_system(const std::string& text) {
  LinIneqSystem sys;
  bool have_vars_header = false;
  std::vector<RawRow> raws;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("constants:", 0) == 0) {
      for (auto& n : split_names(line.substr(10))) sys.constants.push_back(n);
      continue;
    }
    if (line.rfind("variables:", 0) == 0) {
      have_vars_header = true;
      for (auto& n : split_names(line.substr(10))) sys.variables.push_back(n);
      continue;
    }
    RawRow r;
    r.line = line;
    std::size_t pos;
    if ((pos = line.find(">=")) != std::string::npos) {
      r.relation = 1;
    } else if ((pos = line.find("<=")) != std::string::npos) {
      r.relation = -1;
    } else if ((pos = line.find('=')) != std::string::npos) {
      r.relation = 0;
    } else {
      throw ArgumentError("system: no relation in line: " + line);
    }
    std::size_t width = r.relation == 0 ? 1 : 2;
    std::string rest = line.substr(pos + width);
    if (rest.find_first_of("<>=") != std::string::npos)
      throw ArgumentError("system: more than one relation in line: " + line);
    r.lhs = parse_expr(line.substr(0, pos), line);
    r.rhs = parse_expr(rest, line);
    raws.push_back(std::move(r));
  }
  auto check_unique = [](const std::vector<std::string>& names) {
    std::vector<std::string> s = names;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw ArgumentError("system: duplicate name in header");
  };
  check_unique(sys.constants);
  check_unique(sys.variables);
  for (const auto& c : sys.constants)
    if (sys.has_variable(c))
      throw ArgumentError("system: " + c + " declared as variable and constant");

  auto is_const = [&](const std::string& n) {
    return std::find(sys.constants.begin(), sys.constants.end(), n) !=
           sys.constants.end();
  };
  if (!have_vars_header) {
    for (const auto& r : raws)
      for (const auto* side : {&r.lhs, &r.rhs})
        for (const auto& [name, c] : *side)
          if (!name.empty() && !is_const(name) && !sys.has_variable(name))
            sys.variables.push_back(name);
  }
  for (const auto& r : raws) {
    LinRow row;
    row.vars.assign(sys.variables.size(), 0);
    row.consts.assign(sys.constants.size(), 0);
    row.offset = 0;
    auto add = [&](const Terms& t, const Rational& sgn) {
      for (const auto& [name, c] : t) {
        if (name.empty()) {
          row.offset += sgn * c;
        } else if (is_const(name)) {
          auto k = std::find(sys.constants.begin(), sys.constants.end(), name) -
                   sys.constants.begin();
          row.consts[k] += sgn * c;
        } else if (sys.has_variable(name)) {
          row.vars[sys.var_index(name)] += sgn * c;
        } else {
          throw ArgumentError("system: undeclared name " + name + " in line: " +
                              r.line);
        }
      }
    };
    Rational s = r.relation == -1 ? Rational(-1) : Rational(1);
    add(r.lhs, s);
    add(r.rhs, -s);
    if (r.relation == 0)
      sys.equalities.push_back(std::move(row));
    else
      sys.inequalities.push_back(std::move(row));
  }
  return sys;
}

LinIneqSystem load_system(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ArgumentError("cannot read system file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_system(ss.str());
}

std::string format_row(const LinIneqSystem& sys, const LinRow& row,
                       const char* relation) {
  std::string out;
  auto term = [&](const Rational& c, const std::string& name) {
    if (c == 0) return;
    Rational a = abs(c);
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    if (name.empty()) {
      out += a.str();
    } else {
      if (a != 1) out += a.str() + "*";
      out += name;
    }
  };
  for (std::size_t i = 0; i < row.vars.size(); ++i) term(row.vars[i], sys.variables[i]);
  for (std::size_t k = 0; k < row.consts.size(); ++k) term(row.consts[k], sys.constants[k]);
  term(row.offset, "");
  if (out.empty()) out = "0";
  return out + " " + relation + " 0";
}

std::string format_system(const LinIneqSystem& sys) {
  std::string out = "constants:";
  for (const auto& c : sys.constants) out += " " + c;
  out += "\nvariables:";
  for (const auto& v : sys.variables) out += " " + v;
  out += "\n";
  for (const auto& r : sys.equalities) out += format_row(sys, r, "=") + "\n";
  for (const auto& r : sys.inequalities) out += format_row(sys, r, ">=") + "\n";
  return out;
}

// -------------------------------------------------------------- elimination

namespace {

LinRow scaled_sum(const LinRow& a, const Rational& sa, const LinRow& b,
                  const Rational& sb) {
  LinRow r;
  r.vars.resize(a.vars.size());
  r.consts.resize(a.consts.size());
  for (std::size_t i = 0; i < a.vars.size(); ++i) r.vars[i] = sa * a.vars[i] + sb * b.vars[i];
  for (std::size_t k = 0; k < a.consts.size(); ++k)
    r.consts[k] = sa * a.consts[k] + sb * b.consts[k];
  r.offset = sa * a.offset + sb * b.offset;
  return r;
}

void drop_column(LinRow& r, std::size_t j) {
  r.vars.erase(r.vars.begin() + static_cast<std::ptrdiff_t>(j));
}

const Rational* leading(const LinRow& r) {
  for (const auto& v : r.vars)
    if (v != 0) return &v;
  for (const auto& v : r.consts)
    if (v != 0) return &v;
  if (r.offset != 0) return &r.offset;
  return nullptr;
}

void scale(LinRow& r, const Rational& s) {
  for (auto& v : r.vars) v *= s;
  for (auto& v : r.consts) v *= s;
  r.offset *= s;
}

bool var_free(const LinRow& r) {
  return std::all_of(r.vars.begin(), r.vars.end(), [](const Rational& v) { return v == 0; });
}

// Constant-only row that holds for every nonnegative constant assignment.
bool tautology(const LinRow& r) {
  if (!var_free(r)) return false;
  if (r.offset < 0) return false;
  return std::all_of(r.consts.begin(), r.consts.end(),
                     [](const Rational& v) { return v >= 0; });
}

// `a` implies `b` syntactically: same variable part, and b's constant part is
// no tighter for every nonnegative assignment.
bool dominates(const LinRow& a, const LinRow& b) {
  if (a.vars != b.vars) return false;
  for (std::size_t k = 0; k < a.consts.size(); ++k)
    if (a.consts[k] > b.consts[k]) return false;
  return a.offset <= b.offset;
}

std::vector<LinRow> simplify_inequalities(std::vector<LinRow> rows) {
  std::vector<LinRow> kept;
  for (auto& r : rows) {
    if (tautology(r)) continue;
    const Rational* lead = leading(r);
    if (lead != nullptr) scale(r, 1 / abs(*lead));
    kept.push_back(std::move(r));
  }
  std::vector<LinRow> out;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < kept.size() && !redundant; ++j) {
      if (i == j || !dominates(kept[j], kept[i])) continue;
      // Mutual domination means equal rows; keep the first copy.
      redundant = !(dominates(kept[i], kept[j]) && i < j);
    }
    if (!redundant) out.push_back(kept[i]);
  }
  return out;
}

}  // namespace

LinIneqSystem fm_eliminate(const LinIneqSystem& sys, const std::string& var) {
  const std::size_t j = sys.var_index(var);
  LinIneqSystem out = sys;

  // Substitute out one equality that mentions var.
  for (std::size_t e = 0; e < out.equalities.size(); ++e) {
    if (out.equalities[e].vars[j] == 0) continue;
    LinRow eq = out.equalities[e];
    out.equalities.erase(out.equalities.begin() + static_cast<std::ptrdiff_t>(e));
    Rational c = eq.vars[j];
    for (auto* group : {&out.inequalities, &out.equalities})
      for (auto& r : *group)
        if (r.vars[j] != 0) r = scaled_sum(r, 1, eq, -r.vars[j] / c);
    break;
  }

  std::vector<LinRow> lower, upper, rest;
  for (auto& r : out.inequalities) {
    if (r.vars[j] > 0)
      lower.push_back(r);
    else if (r.vars[j] < 0)
      upper.push_back(r);
    else
      rest.push_back(r);
  }
  for (const auto& lo : lower)
    for (const auto& up : upper)
      rest.push_back(scaled_sum(lo, -up.vars[j], up, lo.vars[j]));

  for (auto& r : rest) drop_column(r, j);
  std::vector<LinRow> eqs;
  for (auto& r : out.equalities) {
    drop_column(r, j);
    const Rational* lead = leading(r);
    if (lead == nullptr) continue;
    scale(r, 1 / *lead);
    if (std::find(eqs.begin(), eqs.end(), r) == eqs.end()) eqs.push_back(r);
  }
  out.variables.erase(out.variables.begin() + static_cast<std::ptrdiff_t>(j));
  out.inequalities = simplify_inequalities(std::move(rest));
  out.equalities = std::move(eqs);
  return out;
}

LinIneqSystem fm_project(const LinIneqSystem& sys,
                         const std::vector<std::string>& vars) {
  for (const auto& v : vars) sys.var_index(v);
  LinIneqSystem out = sys;
  for (const auto& v : vars) out = fm_eliminate(out, v);
  return out;
}

}  // namespace srdt
