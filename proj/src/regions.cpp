#include "srdt/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "srdt/errors.hpp"
#include "srdt/parallel.hpp"

namespace srdt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LabelSet source_labels(Model m) {
  switch (m) {
    case Model::HELPER_A:
    case Model::HELPER_B: return {"S0", "S1"};
    case Model::GW_A: return {"S1", "S2"};
    case Model::GW_B: return {"S0", "S1", "S2"};
  }
  return {};
}

void check_source(Model m, const JointPmf& source) {
  if (source.labels() != source_labels(m))
    throw ArgumentError("source labels do not match model " + model_name(m));
}

double expected_distortion(const JointPmf& joint, const std::string& s,
                           const std::string& hat, const DistortionMeasure& d) {
  JointPmf m = joint.marginal({s, hat});
  if (d.source_size() != m.sizes()[0] || d.recon_size() != m.sizes()[1])
    throw ArgumentError("distortion table does not match " + s + "/" + hat);
  double e = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.probs()[i] == 0.0) continue;
    auto sym = m.unflat(i);
    e += m.probs()[i] * d(sym[0], sym[1]);
  }
  return e;
}

void require_label(const JointPmf& j, const std::string& l) {
  if (!j.has(l)) throw ArgumentError("auxiliary kernels do not produce " + l);
}

void check_p(double p) {
  if (!(p >= 0.0 && p <= 0.5)) throw ArgumentError("p must lie in [0, 1/2]");
}

double pos(double x) { return x > 0.0 ? x : 0.0; }

ChannelKernel copy_kernel(const std::string& from, const std::string& to) {
  return ChannelKernel::deterministic({from}, {2}, {to}, {2},
                                      [](const std::vector<int>& s) { return s; });
}

}  // namespace

std::string model_name(Model m) {
  switch (m) {
    case Model::HELPER_A: return "HELPER_A";
    case Model::HELPER_B: return "HELPER_B";
    case Model::GW_A: return "GW_A";
    case Model::GW_B: return "GW_B";
  }
  return "?";
}

Model parse_model(const std::string& name) {
  if (name == "HELPER_A") return Model::HELPER_A;
  if (name == "HELPER_B") return Model::HELPER_B;
  if (name == "GW_A") return Model::GW_A;
  if (name == "GW_B") return Model::GW_B;
  throw ArgumentError("unknown model: " + name);
}

bool is_gw(Model m) { return m == Model::GW_A || m == Model::GW_B; }

void RateTuple::validate() const {
  if (R2.has_value() != is_gw(model) || D2.has_value() != is_gw(model))
    throw ArgumentError("R2/D2 must be given exactly for GW models");
  auto bad = [](double x) { return !(x >= 0.0); };
  if (bad(R) || bad(R1) || bad(D1) || bad(delta) || (R2 && bad(*R2)) ||
      (D2 && bad(*D2)))
    throw ArgumentError("rates, distortions and delta must be >= 0");
}

double AchievablePoint::violation(const RateTuple& t) const {
  if (t.model != model) throw ArgumentError("target model differs from point");
  double v = pos(d1_achieved - t.D1);
  if (d2_achieved) v += pos(*d2_achieved - t.D2.value_or(kInf));
  switch (model) {
    case Model::HELPER_A:
      v += pos(r_min - t.R) + pos(r1_min - t.R1) + pos(t.delta - delta_max);
      break;
    case Model::GW_A:
      v += pos(r_min - t.R) + pos(r1_min - t.R1) +
           pos(r2_min.value_or(0.0) - t.R2.value_or(0.0)) +
           pos(t.delta - delta_max);
      break;
    case Model::HELPER_B:
      v += pos(r1_min - (t.R + t.R1)) + pos(t.delta - delta_max) +
           pos(t.delta - t.R1);
      break;
    case Model::GW_B: {
      double h = constants.at("h"), a = constants.at("a");
      double c1 = constants.at("c1"), c2 = constants.at("c2");
      double R2 = t.R2.value_or(0.0);
      v += pos(h + a + c1 - t.R - t.R1) + pos(h + a + c2 - t.R - R2) +
           pos(t.delta + c1 - t.R1) + pos(t.delta + c2 - R2) +
           pos(a - t.R) + pos(t.delta - h);
      break;
    }
  }
  return v;
}

bool AchievablePoint::dominates(const RateTuple& t, double tol) const {
  if (t.model != model) return false;
  auto ok = [tol](double lhs, double rhs) { return lhs >= rhs - tol; };
  bool dist = ok(t.D1, d1_achieved) &&
              (!d2_achieved || ok(t.D2.value_or(kInf), *d2_achieved));
  if (!dist) return false;
  double R2 = t.R2.value_or(0.0);
  switch (model) {
    case Model::HELPER_A:
      return ok(t.R, r_min) && ok(t.R1, r1_min) && ok(delta_max, t.delta);
    case Model::GW_A:
      return ok(t.R, r_min) && ok(t.R1, r1_min) &&
             ok(R2, r2_min.value_or(0.0)) && ok(delta_max, t.delta);
    case Model::HELPER_B:
      return ok(t.R + t.R1, r1_min) && ok(delta_max, t.delta) &&
             ok(t.R1, t.delta);
    case Model::GW_B: {
      double h = constants.at("h"), a = constants.at("a");
      double c1 = constants.at("c1"), c2 = constants.at("c2");
      return ok(t.R + t.R1, h + a + c1) && ok(t.R + R2, h + a + c2) &&
             ok(t.R1, t.delta + c1) && ok(R2, t.delta + c2) && ok(t.R1, c1) &&
             ok(R2, c2) && ok(t.R, a) && ok(h, t.delta);
    }
  }
  return false;
}

AchievablePoint achievable_point(Model model, const JointPmf& source,
                                 const std::vector<ChannelKernel>& aux,
                                 const std::vector<DistortionMeasure>& d) {
  check_source(model, source);
  std::size_t need_d = is_gw(model) ? 2 : 1;
  if (d.size() != need_d) throw ArgumentError("wrong number of distortion measures");
  JointPmf j = source;
  try {
    for (const auto& k : aux) j = extend_joint(j, k);
  } catch (const LabelError& e) {
    throw ArgumentError(e.what());
  }
  const LabelSet src = source_labels(model);
  AchievablePoint pt;
  pt.model = model;
  pt.witness = aux;
  require_label(j, "S1hat");
  if (model != Model::HELPER_B) require_label(j, "U");
  if (is_gw(model)) require_label(j, "S2hat");

  switch (model) {
    case Model::HELPER_A:
      pt.r_min = mutual_information(j, {"U"}, src);
      pt.r1_min = mutual_information(j, {"S1hat"}, src, {"U"});
      pt.delta_max = entropy(j, src, {"U"});
      break;
    case Model::HELPER_B: {
      double a = mutual_information(j, {"S1hat"}, {"S1"}, {"S0"});
      double b = entropy(j, {"S0"});
      pt.constants = {{"a", a}, {"b", b}};
      pt.r_min = 0.0;
      pt.r1_min = a + b;
      pt.delta_max = b;
      break;
    }
    case Model::GW_A:
      pt.r_min = mutual_information(j, {"U"}, src);
      pt.r1_min = mutual_information(j, {"S1hat"}, src, {"U"});
      pt.r2_min = mutual_information(j, {"S2hat"}, src, {"U"});
      pt.delta_max = entropy(j, src, {"U"});
      break;
    case Model::GW_B: {
      double h = entropy(j, {"S0"});
      double a = mutual_information(j, {"U"}, {"S1", "S2"}, {"S0"});
      double c1 = mutual_information(j, {"S1hat"}, {"S1", "S2"}, {"U", "S0"});
      double c2 = mutual_information(j, {"S2hat"}, {"S1", "S2"}, {"U", "S0"});
      pt.constants = {{"h", h}, {"a", a}, {"c1", c1}, {"c2", c2}};
      pt.r_min = a;
      pt.r1_min = h + c1;
      pt.r2_min = h + c2;
      pt.delta_max = h;
      break;
    }
  }
  pt.d1_achieved = expected_distortion(j, "S1", "S1hat", d[0]);
  if (is_gw(model)) pt.d2_achieved = expected_distortion(j, "S2", "S2hat", d[1]);
  return pt;
}

// ---------------------------------------------------------------------------
// membership_search

namespace {

struct Candidate {
  double violation = kInf;
  std::vector<ChannelKernel> kernels;
  std::optional<AchievablePoint> point;
};

class Searcher {
 public:
  Searcher(Model model, const JointPmf& source,
           const std::vector<DistortionMeasure>& d, const RateTuple& target,
           const SearchConfig& cfg)
      : model_(model), source_(source), d_(d), target_(target), cfg_(cfg) {
    src_ = source_labels(model);
    n_src_ = source.size();
    k_ = cfg.u_cardinality > 0 ? cfg.u_cardinality
                               : static_cast<int>(n_src_) + 3;
  }

  int evaluations = 0;

  Candidate evaluate(const ChannelKernel* u) {
    ++evaluations;
    Candidate c;
    JointPmf j = source_;
    LabelSet side;
    if (u) {
      j = extend_joint(j, *u);
      c.kernels.push_back(*u);
      side.push_back("U");
    }
    LabelSet rd_src = src_;
    if (model_ == Model::GW_B) {
      side.push_back("S0");
      rd_src = {"S1", "S2"};
    } else if (model_ == Model::HELPER_B) {
      side = {"S0"};
      rd_src = {"S1"};
    }
    const int n_hat = is_gw(model_) ? 2 : 1;
    JointPmf ext = j;
    try {
      for (int i = 0; i < n_hat; ++i) {
        std::string tgt = i == 0 ? "S1" : "S2";
        double budget = i == 0 ? target_.D1 : target_.D2.value_or(kInf);
        budget = std::min(budget, 1e300);
        auto r = solve_conditional_rd(j, side, rd_src, tgt, d_[i], budget,
                                      tgt + "hat", cfg_.rd);
        c.kernels.push_back(r.kernel);
        ext = extend_joint(ext, r.kernel);
      }
    } catch (const ConvergenceError&) {
      return c;
    }
    c.point = achievable_point(model_, source_, c.kernels, d_);
    c.violation = c.point->violation(target_);
    return c;
  }

  ChannelKernel kernel_from_rows(std::vector<std::vector<double>> rows) const {
    return ChannelKernel(src_, source_.sizes(), {"U"}, {k_}, std::move(rows));
  }

  ChannelKernel kernel_from_logits(const std::vector<double>& L) const {
    std::vector<std::vector<double>> rows(n_src_, std::vector<double>(k_));
    for (std::size_t i = 0; i < n_src_; ++i) {
      double mx = -kInf;
      for (int u = 0; u < k_; ++u) mx = std::max(mx, L[i * k_ + u]);
      double z = 0.0;
      for (int u = 0; u < k_; ++u) z += rows[i][u] = std::exp(L[i * k_ + u] - mx);
      for (int u = 0; u < k_; ++u) rows[i][u] /= z;
    }
    return kernel_from_rows(std::move(rows));
  }

  std::vector<double> logits_from_kernel(const ChannelKernel& k) const {
    std::vector<double> L(n_src_ * k_);
    for (std::size_t i = 0; i < n_src_; ++i)
      for (int u = 0; u < k_; ++u)
        L[i * k_ + u] = std::log(std::max(k.rows[i][u], 1e-9));
    return L;
  }

  // Structured starting kernels, each tagged with a name.
  std::vector<std::pair<std::string, ChannelKernel>> structured() const {
    std::vector<std::pair<std::string, ChannelKernel>> out;
    auto rows_of = [&](auto f) {
      std::vector<std::vector<double>> rows(n_src_, std::vector<double>(k_, 0.0));
      for (std::size_t i = 0; i < n_src_; ++i) f(source_.unflat(i), i, rows[i]);
      return rows;
    };
    out.emplace_back("constant", kernel_from_rows(rows_of(
        [](const std::vector<int>&, std::size_t, std::vector<double>& r) { r[0] = 1.0; })));
    if (static_cast<std::size_t>(k_) >= n_src_) {
      out.emplace_back("copy", kernel_from_rows(rows_of(
          [](const std::vector<int>&, std::size_t i, std::vector<double>& r) { r[i] = 1.0; })));
    }
    if (static_cast<std::size_t>(k_) > n_src_) {
      out.emplace_back("copy-or-constant", kernel_from_rows(rows_of(
          [this](const std::vector<int>&, std::size_t i, std::vector<double>& r) {
            r[i] = 0.5;
            r[n_src_] += 0.5;
          })));
    }
    for (std::size_t c = 0; c < src_.size(); ++c) {
      if (source_.sizes()[c] > k_) continue;
      out.emplace_back("copy:" + src_[c], kernel_from_rows(rows_of(
          [c](const std::vector<int>& s, std::size_t, std::vector<double>& r) {
            r[s[c]] = 1.0;
          })));
    }
    // U = (T, S_T) over the non-S0 components for GW models.
    if (is_gw(model_)) {
      std::size_t c1 = source_.index_of("S1"), c2 = source_.index_of("S2");
      int m1 = source_.sizes()[c1], m2 = source_.sizes()[c2];
      if (m1 + m2 <= k_) {
        out.emplace_back("time-share", kernel_from_rows(rows_of(
            [=](const std::vector<int>& s, std::size_t, std::vector<double>& r) {
              r[s[c1]] += 0.5;
              r[m1 + s[c2]] += 0.5;
            })));
      }
    }
    return out;
  }

  std::optional<SearchWitness> run() {
    if (model_ == Model::HELPER_B) {
      auto c = evaluate(nullptr);
      return accept(c, "cond-rd");
    }
    std::vector<std::pair<std::string, std::vector<double>>> starts;
    for (auto& [name, k] : structured()) {
      auto c = evaluate(&k);
      if (auto w = accept(c, name)) return w;
      starts.emplace_back(name, logits_from_kernel(k));
    }
    for (int r = 0; r < cfg_.restarts; ++r) {
      auto rng = substream(cfg_.seed, static_cast<std::uint64_t>(r), 0x5eed);
      std::normal_distribution<double> g(0.0, 2.0);
      std::vector<double> L(n_src_ * k_);
      for (auto& x : L) x = g(rng);
      starts.emplace_back("random:" + std::to_string(r), std::move(L));
    }
    for (std::size_t s = 0; s < starts.size(); ++s) {
      auto rng = substream(cfg_.seed, s, 0xc11b);
      if (auto w = climb(starts[s].first, starts[s].second, rng)) return w;
    }
    return std::nullopt;
  }

 private:
  std::optional<SearchWitness> accept(const Candidate& c, const std::string& origin) {
    if (!c.point) return std::nullopt;
    // Exact re-check through a fresh evaluation.
    AchievablePoint p = achievable_point(model_, source_, c.kernels, d_);
    if (!p.dominates(target_, 1e-9)) return std::nullopt;
    return SearchWitness{c.kernels, p, origin, evaluations};
  }

  std::optional<SearchWitness> climb(const std::string& name, std::vector<double> L,
                                     std::mt19937_64& rng) {
    ChannelKernel k = kernel_from_logits(L);
    Candidate best = evaluate(&k);
    if (auto w = accept(best, name)) return w;
    std::normal_distribution<double> g(0.0, 1.0);
    double sigma = 1.0;
    for (int it = 0; it < cfg_.iterations; ++it) {
      std::vector<double> trial = L;
      if (uniform01(rng) < 0.5) {
        std::size_t row = uniform_index(rng, n_src_);
        for (int u = 0; u < k_; ++u) trial[row * k_ + u] += sigma * g(rng);
      } else {
        for (auto& x : trial) x += 0.5 * sigma * g(rng);
      }
      ChannelKernel tk = kernel_from_logits(trial);
      Candidate c = evaluate(&tk);
      if (c.violation < best.violation) {
        L = std::move(trial);
        best = std::move(c);
        sigma = std::min(sigma * 1.3, 4.0);
        if (auto w = accept(best, name)) return w;
      } else {
        sigma = std::max(sigma * 0.92, 0.01);
      }
    }
    return std::nullopt;
  }

  Model model_;
  const JointPmf& source_;
  const std::vector<DistortionMeasure>& d_;
  RateTuple target_;
  SearchConfig cfg_;
  LabelSet src_;
  std::size_t n_src_ = 0;
  int k_ = 0;
};

}  // namespace

std::optional<SearchWitness> membership_search(
    Model model, const JointPmf& source, const std::vector<DistortionMeasure>& d,
    const RateTuple& target, const SearchConfig& config) {
  check_source(model, source);
  if (target.model != model) throw ArgumentError("target model differs");
  target.validate();
  if (d.size() != (is_gw(model) ? 2u : 1u))
    throw ArgumentError("wrong number of distortion measures");
  // Budgets below the smallest attainable distortion admit no kernel.
  LabelSet side = model == Model::HELPER_B ? LabelSet{"S0"} : LabelSet{};
  LabelSet src = source.labels();
  if (model == Model::HELPER_B) src = {"S1"};
  if (target.D1 < min_expected_distortion(source, side, src, "S1", d[0]) - 1e-12)
    return std::nullopt;
  if (is_gw(model) &&
      *target.D2 < min_expected_distortion(source, {}, source.labels(), "S2", d[1]) - 1e-12)
    return std::nullopt;
  Searcher s(model, source, d, target, config);
  return s.run();
}

// ---------------------------------------------------------------------------
// Closed forms

bool helper_a_lossless(const JointPmf& source, double R, double R1, double delta) {
  check_source(Model::HELPER_A, source);
  if (!(R >= 0.0 && R1 >= 0.0 && delta >= 0.0))
    throw ArgumentError("rates and delta must be >= 0");
  double h1 = entropy(source, {"S1"});
  double h01 = entropy(source, {"S0"}, {"S1"});
  return R + R1 >= h1 - 1e-9 && delta <= h01 + std::min(R1, h1) + 1e-9;
}

std::vector<ChannelKernel> helper_a_lossless_construction(const JointPmf& source,
                                                          double R1) {
  check_source(Model::HELPER_A, source);
  if (!(R1 >= 0.0)) throw ArgumentError("R1 must be >= 0");
  double h1 = entropy(source, {"S1"});
  double theta = h1 > 0.0 ? std::min(R1 / h1, 1.0) : 1.0;
  int m0 = source.sizes()[0], m1 = source.sizes()[1];
  // u < m1: U = S1 (T = 0); u = m1: U constant (T = 1).
  std::vector<std::vector<double>> rows(source.size(), std::vector<double>(m1 + 1, 0.0));
  for (int s0 = 0; s0 < m0; ++s0)
    for (int s1 = 0; s1 < m1; ++s1) {
      auto& r = rows[s0 * m1 + s1];
      r[s1] += 1.0 - theta;
      r[m1] += theta;
    }
  ChannelKernel u({"S0", "S1"}, {m0, m1}, {"U"}, {m1 + 1}, std::move(rows));
  ChannelKernel hat = ChannelKernel::deterministic(
      {"S1"}, {m1}, {"S1hat"}, {m1}, [](const std::vector<int>& s) { return s; });
  return {u, hat};
}

bool helper_b_region(const JointPmf& source, const DistortionMeasure& d,
                     const RateTuple& target, bool with_secrecy) {
  check_source(Model::HELPER_B, source);
  if (target.model != Model::HELPER_B) throw ArgumentError("target must be HELPER_B");
  target.validate();
  double h0 = entropy(source, {"S0"});
  double budget = std::min(target.D1, 1e300);
  double rd = conditional_rd(source, d, budget);
  bool ok = target.R + target.R1 >= h0 + rd - 1e-6;
  if (with_secrecy) ok = ok && target.delta <= std::min(h0, target.R1) + 1e-6;
  return ok;
}

double helper_b_dsbs_sum_rate(double p, double D1) {
  check_p(p);
  return 1.0 + dsbs_cond_rd(p, D1);
}

bool helper_b_dsbs(double p, const RateTuple& t, bool with_secrecy) {
  check_p(p);
  if (t.model != Model::HELPER_B) throw ArgumentError("target must be HELPER_B");
  t.validate();
  bool ok = t.R + t.R1 >= helper_b_dsbs_sum_rate(p, t.D1) - 1e-9;
  if (with_secrecy) ok = ok && t.delta <= std::min(1.0, t.R1) + 1e-9;
  return ok;
}

JointPmf make_gw_a_source(double p) {
  return JointPmf({"S1", "S2"}, {2, 2}, make_dsbs(p).probs());
}

double gw_a_p1(double p) {
  check_p(p);
  return (1.0 - std::sqrt(1.0 - 2.0 * p)) / 2.0;
}

std::vector<GwAPoint> gw_a_binary_points(double p) {
  check_p(p);
  const double h = binary_entropy(p);
  const double p1 = gw_a_p1(p);
  const double hp1 = binary_entropy(p1);
  const LabelSet in = {"S1", "S2"};
  const std::vector<int> bin2 = {2, 2};

  auto hats = [] {
    return std::vector<ChannelKernel>{copy_kernel("S1", "S1hat"),
                                      copy_kernel("S2", "S2hat")};
  };
  auto with_u = [&](ChannelKernel u) {
    auto v = hats();
    v.insert(v.begin(), std::move(u));
    return v;
  };

  ChannelKernel uA = ChannelKernel::deterministic(
      in, bin2, {"U"}, {4},
      [](const std::vector<int>& s) { return std::vector<int>{2 * s[0] + s[1]}; });
  ChannelKernel uB(in, bin2, {"U"}, {1}, {{1.0}, {1.0}, {1.0}, {1.0}});
  // U = (T, S_T) with T uniform: u = 2T + S_T.
  std::vector<std::vector<double>> rf(4, std::vector<double>(4, 0.0));
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) {
      rf[2 * s1 + s2][s1] += 0.5;
      rf[2 * s1 + s2][2 + s2] += 0.5;
    }
  ChannelKernel uF(in, bin2, {"U"}, {4}, rf);
  // S1 = U xor N1, S2 = U xor N2 with U uniform, Nj ~ Bern(p1) independent;
  // the forward kernel is P(u|s1,s2) = P(u) P(s1|u) P(s2|u) / P(s1,s2).
  JointPmf src = make_gw_a_source(p);
  std::vector<std::vector<double>> rg(4, std::vector<double>(2, 0.0));
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) {
      double ps = src.at({s1, s2});
      double z = 0.0;
      for (int u = 0; u < 2; ++u) {
        double l1 = s1 == u ? 1.0 - p1 : p1;
        double l2 = s2 == u ? 1.0 - p1 : p1;
        z += rg[2 * s1 + s2][u] = ps > 0.0 ? 0.5 * l1 * l2 / ps : 0.5;
      }
      for (int u = 0; u < 2; ++u) rg[2 * s1 + s2][u] /= z;
    }
  ChannelKernel uG(in, bin2, {"U"}, {2}, rg);

  const double gR = 1.0 + h - 2.0 * hp1;
  return {
      {"A", 1.0 + h, 0.0, 0.0, 0.0, false, with_u(uA)},
      {"B", 0.0, 1.0, 1.0, 0.0, false, with_u(uB)},
      {"F", 1.0, h / 2.0, h / 2.0, 0.0, false, with_u(uF)},
      {"G", gR, hp1, hp1, 0.0, false, with_u(uG)},
      {"F~", 1.0, h / 2.0, h / 2.0, h, true, with_u(uF)},
      {"G~", gR, hp1, hp1, 2.0 * hp1, true, with_u(uG)},
  };
}

bool gw_a_pangloss(double p, double R, double R1) {
  check_p(p);
  return R + R1 >= 1.0 - 1e-9 && R + 2.0 * R1 >= 1.0 + binary_entropy(p) - 1e-9;
}

GwAPointCheck check_gw_a_point(double p, const GwAPoint& pt, double tol) {
  JointPmf src = make_gw_a_source(p);
  auto ev = achievable_point(Model::GW_A, src, pt.construction,
                             {DistortionMeasure::hamming(2), DistortionMeasure::hamming(2)});
  GwAPointCheck c;
  c.rate_error = std::max({std::abs(pt.R - ev.r_min), std::abs(pt.R1 - ev.r1_min),
                           std::abs(pt.R2 - *ev.r2_min)});
  c.delta_error = pt.delta_exact ? std::abs(pt.delta - ev.delta_max)
                                 : pos(pt.delta - ev.delta_max);
  c.ok = c.rate_error <= tol && c.delta_error <= tol && ev.d1_achieved <= tol &&
         *ev.d2_achieved <= tol;
  return c;
}

double gw_b_slack(double p, double R, double R1, bool with_secrecy) {
  check_p(p);
  const double h = binary_entropy(p);
  if (with_secrecy)
    return std::min(R1 - 1.0, R + 2.0 * R1 - 2.0 * (1.0 + h));
  return std::min(R + R1 - (1.0 + h), R + 2.0 * R1 - (1.0 + 2.0 * h));
}

bool gw_b_binary(double p, double R, double R1, double R2, bool with_secrecy) {
  check_p(p);
  if (std::abs(R1 - R2) > 1e-12)
    throw ArgumentError("binary GW-B closed forms need R1 = R2");
  if (!(R >= 0.0 && R1 >= 0.0)) throw ArgumentError("rates must be >= 0");
  return gw_b_slack(p, R, R1, with_secrecy) >= -1e-9;
}

std::vector<GwBCorner> gw_b_corners(double p) {
  check_p(p);
  const double h = binary_entropy(p);
  const LabelSet in = {"S0", "S1", "S2"};
  const std::vector<int> bin3 = {2, 2, 2};
  ChannelKernel u_const(in, bin3, {"U"}, {1}, std::vector<std::vector<double>>(8, {1.0}));
  ChannelKernel u_pair = ChannelKernel::deterministic(
      in, bin3, {"U"}, {4},
      [](const std::vector<int>& s) { return std::vector<int>{2 * s[1] + s[2]}; });
  auto build = [](ChannelKernel u) {
    return std::vector<ChannelKernel>{std::move(u), copy_kernel("S1", "S1hat"),
                                      copy_kernel("S2", "S2hat")};
  };
  return {
      {"A", 1.0 + h, 0.0, true, build(u_const)},
      {"B", 1.0, 2.0 * h, true, build(u_pair)},
      {"C", h, 1.0, false, build(u_const)},
      {"D", 0.0, 1.0 + 2.0 * h, false, build(u_pair)},
  };
}

}  // namespace srdt
