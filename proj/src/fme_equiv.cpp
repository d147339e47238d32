#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "srdt/errors.hpp"
#include "srdt/fme.hpp"
#include "srdt/parallel.hpp"

// Semantic comparison of two systems. Deliberately does not call the
// elimination code: each concrete polyhedron is handled by brute-force
// vertex and ray enumeration in exact integer arithmetic.

namespace srdt {

namespace {

using i128 = __int128;
using boost::multiprecision::cpp_int;

constexpr long long kQ = 64;     // constants are drawn as k/kQ
constexpr long long kKmax = 4 * kQ;

// Concrete row: sum_i a[i]*y[i] + c >= 0 with integers, y = kQ * x.
struct IRow {
  std::vector<long long> a;
  long long c;
};

struct Concrete {
  std::vector<IRow> rows;
  bool infeasible = false;  // a 0 >= positive row was found
};

long long to_ll(const cpp_int& v) {
  if (v > cpp_int(INT64_MAX / 4) || v < -cpp_int(INT64_MAX / 4))
    throw CapacityError("systems_equivalent: coefficient overflow");
  return static_cast<long long>(v);
}

IRow concretize(const LinRow& r, const std::vector<std::size_t>& var_map,
                const std::vector<long long>& kvals) {
  // Multiply the row by kQ so constants k/kQ become integers k.
  std::vector<Rational> a(var_map.size());
  for (std::size_t i = 0; i < r.vars.size(); ++i) a[var_map[i]] = r.vars[i];
  Rational c = r.offset * kQ;
  for (std::size_t k = 0; k < r.consts.size(); ++k) c += r.consts[k] * kvals[k];
  cpp_int l = 1;
  auto fold = [&](const Rational& q) {
    cpp_int d = boost::multiprecision::denominator(q);
    l = l / boost::multiprecision::gcd(l, d) * d;
  };
  for (const auto& q : a) fold(q);
  fold(c);
  IRow out;
  for (const auto& q : a)
    out.a.push_back(to_ll(boost::multiprecision::numerator(q) * (l / boost::multiprecision::denominator(q))));
  out.c = to_ll(boost::multiprecision::numerator(c) * (l / boost::multiprecision::denominator(c)));
  return out;
}

long long gcd_all(const IRow& r, bool with_c) {
  long long g = 0;
  for (long long v : r.a) g = std::gcd(g, v < 0 ? -v : v);
  if (with_c) g = std::gcd(g, r.c < 0 ? -r.c : r.c);
  return g;
}

// Keep only the tightest row per direction.
Concrete prune(std::vector<IRow> rows) {
  Concrete out;
  std::vector<IRow> kept;
  for (auto& r : rows) {
    long long g = gcd_all(r, false);
    if (g == 0) {
      if (r.c < 0) out.infeasible = true;
      continue;
    }
    long long h = gcd_all(r, true);
    for (auto& v : r.a) v /= h;
    r.c /= h;
    g /= h;
    bool replaced = false;
    for (auto& k : kept) {
      long long gk = gcd_all(k, false);
      bool same = true;
      for (std::size_t i = 0; i < r.a.size() && same; ++i)
        same = (i128)r.a[i] * gk == (i128)k.a[i] * g;
      if (!same) continue;
      // threshold -c/g: the row with the smaller c/g is tighter
      if ((i128)r.c * gk < (i128)k.c * g) k = r;
      replaced = true;
      break;
    }
    if (!replaced) kept.push_back(r);
  }
  out.rows = std::move(kept);
  return out;
}

i128 det(std::vector<std::vector<i128>> m) {
  // Bareiss fraction-free elimination.
  const std::size_t n = m.size();
  if (n == 0) return 1;
  i128 sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

// Integer basis of the nullspace of the rows (as row vectors).
std::vector<std::vector<i128>> nullspace(const std::vector<IRow>& rows, std::size_t d) {
  std::vector<std::vector<cpp_int>> m;
  for (const auto& r : rows) {
    std::vector<cpp_int> v(r.a.begin(), r.a.end());
    m.push_back(v);
  }
  std::vector<std::vector<Rational>> a(m.size(), std::vector<Rational>(d));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) a[i][j] = Rational(m[i][j]);
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < d && row < a.size(); ++col) {
    std::size_t p = row;
    while (p < a.size() && a[p][col] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    Rational inv = 1 / a[row][col];
    for (auto& v : a[row]) v *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == row || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (std::size_t j = 0; j < d; ++j) a[i][j] -= f * a[row][j];
    }
    pivot_col.push_back(static_cast<int>(col));
    ++row;
  }
  std::vector<std::vector<i128>> basis;
  for (std::size_t free = 0; free < d; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), (int)free) != pivot_col.end()) continue;
    std::vector<Rational> v(d, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -a[r][free];
    cpp_int l = 1;
    for (const auto& q : v) {
      cpp_int den = boost::multiprecision::denominator(q);
      l = l / boost::multiprecision::gcd(l, den) * den;
    }
    std::vector<i128> iv;
    for (const auto& q : v)
      iv.push_back(static_cast<i128>(to_ll(boost::multiprecision::numerator(q) *
                                           (l / boost::multiprecision::denominator(q)))));
    basis.push_back(iv);
  }
  return basis;
}

struct Vertex {
  std::vector<i128> num;
  i128 den;  // > 0
};

struct Geometry {
  bool empty = true;
  std::vector<Vertex> vertices;
  std::vector<std::vector<i128>> rays;
  std::vector<std::vector<i128>> lineality;
};

void for_each_subset(std::size_t m, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& f) {
  if (k > m) return;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Geometry analyze(const Concrete& cs, std::size_t d) {
  Geometry g;
  if (cs.infeasible) return g;
  std::vector<IRow> rows = cs.rows;
  g.lineality = nullspace(rows, d);
  // Restrict to the orthogonal complement of the lineality space.
  for (const auto& n : g.lineality) {
    IRow r;
    for (auto v : n) r.a.push_back(static_cast<long long>(v));
    r.c = 0;
    rows.push_back(r);
    for (auto& v : r.a) v = -v;
    rows.push_back(r);
  }
  const std::size_t m = rows.size();
  auto feasible_point = [&](const std::vector<i128>& num, i128 den) {
    for (const auto& r : rows) {
      i128 s = (i128)r.c * den;
      for (std::size_t i = 0; i < d; ++i) s += (i128)r.a[i] * num[i];
      if (s < 0) return false;
    }
    return true;
  };
  if (d == 0) {
    g.empty = false;
    g.vertices.push_back({{}, 1});
    return g;
  }
  std::set<std::vector<i128>> seen;
  for_each_subset(m, d, [&](const std::vector<std::size_t>& s) {
    std::vector<std::vector<i128>> mat(d, std::vector<i128>(d));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) mat[i][j] = rows[s[i]].a[j];
    i128 dt = det(mat);
    if (dt == 0) return;
    std::vector<i128> num(d);
    for (std::size_t col = 0; col < d; ++col) {
      auto mc = mat;
      for (std::size_t i = 0; i < d; ++i) mc[i][col] = -(i128)rows[s[i]].c;
      num[col] = det(mc);
    }
    if (dt < 0) {
      dt = -dt;
      for (auto& v : num) v = -v;
    }
    if (!feasible_point(num, dt)) return;
    i128 gg = dt;
    for (auto v : num) {
      i128 av = v < 0 ? -v : v;
      while (av != 0) {
        i128 t = gg % av;
        gg = av;
        av = t;
      }
    }
    if (gg > 1) {
      dt /= gg;
      for (auto& v : num) v /= gg;
    }
    std::vector<i128> key = num;
    key.push_back(dt);
    if (seen.insert(key).second) g.vertices.push_back({num, dt});
  });
  g.empty = g.vertices.empty();
  if (g.empty) return g;
  // Extreme rays of the recession cone {r : A r >= 0}.
  for_each_subset(m, d - 1, [&](const std::vector<std::size_t>& s) {
    std::vector<i128> r(d);
    bool nonzero = false;
    for (std::size_t col = 0; col < d; ++col) {
      std::vector<std::vector<i128>> mat;
      for (std::size_t i : s) {
        std::vector<i128> row;
        for (std::size_t j = 0; j < d; ++j)
          if (j != col) row.push_back(rows[i].a[j]);
        mat.push_back(row);
      }
      i128 v = det(mat);
      r[col] = (col % 2 == 0) ? v : -v;
      nonzero = nonzero || v != 0;
    }
    if (!nonzero) return;
    for (int sgn : {1, -1}) {
      bool ok = true;
      for (const auto& row : rows) {
        i128 t = 0;
        for (std::size_t j = 0; j < d; ++j) t += (i128)row.a[j] * r[j] * sgn;
        if (t < 0) {
          ok = false;
          break;
        }
      }
      if (ok) {
        std::vector<i128> ray = r;
        for (auto& v : ray) v *= sgn;
        g.rays.push_back(ray);
      }
    }
  });
  return g;
}

// Is a*y + c >= 0 valid on the polyhedron?
bool implied(const Geometry& g, const IRow& row) {
  if (g.empty) return true;
  const std::size_t d = row.a.size();
  for (const auto& n : g.lineality) {
    i128 t = 0;
    for (std::size_t j = 0; j < d; ++j) t += (i128)row.a[j] * n[j];
    if (t != 0) return false;
  }
  for (const auto& r : g.rays) {
    i128 t = 0;
    for (std::size_t j = 0; j < d; ++j) t += (i128)row.a[j] * r[j];
    if (t < 0) return false;
  }
  for (const auto& v : g.vertices) {
    i128 t = (i128)row.c * v.den;
    for (std::size_t j = 0; j < d; ++j) t += (i128)row.a[j] * v.num[j];
    if (t < 0) return false;
  }
  return true;
}

bool member(const Concrete& cs, const std::vector<long long>& y) {
  if (cs.infeasible) return false;
  for (const auto& r : cs.rows) {
    i128 s = r.c;
    for (std::size_t j = 0; j < y.size(); ++j) s += (i128)r.a[j] * y[j];
    if (s < 0) return false;
  }
  return true;
}

Concrete build(const LinIneqSystem& sys, const std::vector<std::size_t>& var_map,
               const std::vector<long long>& kvals) {
  std::vector<IRow> rows;
  for (const auto& r : sys.inequalities) rows.push_back(concretize(r, var_map, kvals));
  for (const auto& r : sys.equalities) {
    IRow a = concretize(r, var_map, kvals);
    rows.push_back(a);
    for (auto& v : a.a) v = -v;
    a.c = -a.c;
    rows.push_back(a);
  }
  return prune(std::move(rows));
}

std::string describe(const std::vector<std::string>& names,
                     const std::vector<long long>& kvals) {
  std::ostringstream os;
  for (std::size_t k = 0; k < names.size(); ++k)
    os << (k ? ", " : "") << names[k] << "=" << kvals[k] << "/" << kQ;
  return os.str();
}

}  // namespace

EquivalenceReport compare_systems(const LinIneqSystem& a, const LinIneqSystem& b,
                                  int samples, std::uint64_t seed,
                                  const std::map<std::string, std::string>& alias,
                                  int points_per_sample) {
  std::vector<std::string> va = a.variables, vb = b.variables;
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  if (va != vb)
    throw ArgumentError("systems_equivalent: variable sets differ");
  const std::size_t d = a.variables.size();

  std::vector<std::string> cnames = a.constants;
  auto const_slot = [&](const std::string& n) {
    auto it = std::find(cnames.begin(), cnames.end(), n);
    if (it == cnames.end()) {
      cnames.push_back(n);
      return cnames.size() - 1;
    }
    return static_cast<std::size_t>(it - cnames.begin());
  };
  std::vector<std::size_t> bconst;
  for (const auto& c : b.constants) {
    auto it = alias.find(c);
    bconst.push_back(const_slot(it == alias.end() ? c : it->second));
  }
  std::vector<std::size_t> amap(d), bmap(d);
  for (std::size_t i = 0; i < d; ++i) {
    amap[i] = i;
    bmap[i] = a.var_index(b.variables[i]);
  }

  struct SampleResult {
    int disagreements = 0;
    long long points = 0;
    std::string note;
  };
  std::vector<SampleResult> results(samples > 0 ? samples : 0);
  parallel_for(results.size(), [&](std::size_t s) {
    auto rng = substream(seed, s, 0x464d45);
    std::vector<long long> kv(cnames.size());
    for (auto& k : kv) k = static_cast<long long>(uniform_index(rng, kKmax + 1));
    std::vector<long long> ka(a.constants.size()), kb(b.constants.size());
    for (std::size_t k = 0; k < ka.size(); ++k) ka[k] = kv[k];
    for (std::size_t k = 0; k < kb.size(); ++k) kb[k] = kv[bconst[k]];
    Concrete ca = build(a, amap, ka), cb = build(b, bmap, kb);
    Geometry ga = analyze(ca, d), gb = analyze(cb, d);
    SampleResult& res = results[s];
    auto flag = [&](const std::string& why) {
      ++res.disagreements;
      if (res.note.empty()) res.note = why + " at " + describe(cnames, kv);
    };
    for (std::size_t i = 0; i < ca.rows.size(); ++i)
      if (!implied(gb, ca.rows[i])) flag("row of first system not implied by second");
    for (std::size_t i = 0; i < cb.rows.size(); ++i)
      if (!implied(ga, cb.rows[i])) flag("row of second system not implied by first");
    if (ga.empty != gb.empty) flag("feasibility differs");

    // Membership agreement on lattice points y = kQ*x.
    std::vector<const Vertex*> anchors;
    for (const auto& v : ga.vertices) anchors.push_back(&v);
    for (const auto& v : gb.vertices) anchors.push_back(&v);
    long long span = 0;
    for (auto k : kv) span += k;
    const long long lo = -2 * kQ, hi = 2 * span + 2 * kQ;
    std::vector<long long> y(d);
    for (int p = 0; p < points_per_sample; ++p) {
      if (p % 2 == 0 || anchors.empty()) {
        for (auto& v : y) v = lo + static_cast<long long>(uniform_index(rng, hi - lo + 1));
      } else {
        const Vertex* v = anchors[uniform_index(rng, anchors.size())];
        for (std::size_t j = 0; j < d; ++j)
          y[j] = static_cast<long long>(v->num[j] / v->den) - 2 +
                 static_cast<long long>(uniform_index(rng, 5));
      }
      ++res.points;
      if (member(ca, y) != member(cb, y)) flag("membership differs");
    }
  });

  EquivalenceReport rep;
  rep.samples = samples;
  for (const auto& r : results) {
    rep.points_checked += r.points;
    rep.disagreements += r.disagreements;
    if (rep.first_disagreement.empty()) rep.first_disagreement = r.note;
  }
  rep.equivalent = rep.disagreements == 0;
  return rep;
}

bool systems_equivalent(const LinIneqSystem& a, const LinIneqSystem& b, int samples,
                        std::uint64_t seed,
                        const std::map<std::string, std::string>& alias) {
  return compare_systems(a, b, samples, seed, alias).equivalent;
}

}  // namespace srdt
