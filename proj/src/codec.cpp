#include "srdt/codec.hpp"

#include <algorithm>
#include <cmath>

#include "srdt/errors.hpp"
#include "srdt/parallel.hpp"

namespace srdt {

namespace {

constexpr std::uint64_t kBinTag = 0xb1;
constexpr std::uint64_t kUTag = 0xa0;
constexpr std::uint64_t kHatTag = 0xc0;  // + j
constexpr std::uint64_t kTrialTag = 0x7a;

bool has_bins(Scheme s) {
  return s == Scheme::HELPER_B || s == Scheme::HELPER_B_OTP || s == Scheme::GW_B;
}
bool has_u(Scheme s) { return !(s == Scheme::HELPER_B || s == Scheme::HELPER_B_OTP); }
int hat_count(Scheme s) { return (s == Scheme::GW_A || s == Scheme::GW_B) ? 2 : 1; }

std::string hat_label(int j) { return j == 0 ? "S1hat" : "S2hat"; }
std::string hat_key(int j) { return j == 0 ? "w1" : "w2"; }

// rows[g][o] = P(out = o | given = g); rows with no mass are uniform.
std::vector<std::vector<double>> cond_rows(const JointPmf& joint, const std::string& out,
                                           const LabelSet& given) {
  LabelSet keep = given;
  keep.push_back(out);
  JointPmf m = joint.marginal(keep);
  const int no = joint.alphabet(out);
  const std::size_t ng = m.size() / no;
  std::vector<std::vector<double>> rows(ng, std::vector<double>(no));
  for (std::size_t g = 0; g < ng; ++g) {
    double z = 0.0;
    for (int o = 0; o < no; ++o) z += m.probs()[g * no + o];
    for (int o = 0; o < no; ++o)
      rows[g][o] = z > 0.0 ? m.probs()[g * no + o] / z : 1.0 / no;
  }
  return rows;
}

// Conditioning symbols per position (flat over the given sequences).
std::vector<std::size_t> flat_given(const std::vector<const Seq*>& given,
                                    const std::vector<int>& sizes, int n) {
  std::vector<std::size_t> g(n, 0);
  for (int i = 0; i < n; ++i)
    for (std::size_t c = 0; c < given.size(); ++c)
      g[i] = g[i] * sizes[c] + (*given[c])[i];
  return g;
}

Seq draw_seq(std::mt19937_64& rng, const std::vector<std::vector<double>>& rows,
             const std::vector<std::size_t>& given) {
  Seq s(given.size());
  for (std::size_t i = 0; i < given.size(); ++i) {
    const auto& r = rows[given[i]];
    s[i] = static_cast<std::uint8_t>(sample_discrete(rng, r.data(), r.size()));
  }
  return s;
}

std::uint64_t rate_range(double rate, int n) {
  if (!(rate >= 0.0)) throw ArgumentError("rates must be >= 0");
  double e = n * rate;
  if (e > 40.0) throw CapacityError("index range 2^(n*rate) too large");
  double r = std::round(std::exp2(e));
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(r));
}

// Everything the encoder needs besides the codebook, derived once.
struct Context {
  const Codebook& cb;
  LabelSet src;
  std::vector<int> src_sizes;
  JointPmf m_src_u;
  std::vector<JointPmf> m_hat;
  JointPmf m_s0;

  explicit Context(const Codebook& c) : cb(c) {
    src = scheme_source_labels(c.scheme);
    for (const auto& l : src) src_sizes.push_back(c.joint.alphabet(l));
    LabelSet base = src;
    if (has_u(c.scheme)) {
      LabelSet su = src;
      su.push_back("U");
      m_src_u = c.joint.marginal(su);
      base = su;
    }
    for (int j = 0; j < hat_count(c.scheme); ++j) {
      LabelSet sh = base;
      sh.push_back(hat_label(j));
      m_hat.push_back(c.joint.marginal(sh));
    }
    if (has_bins(c.scheme)) m_s0 = c.joint.marginal({"S0"});
  }

  std::vector<const Seq*> ptrs(const std::vector<Seq>& s) const {
    std::vector<const Seq*> p;
    for (const auto& x : s) p.push_back(&x);
    return p;
  }

  std::vector<std::uint64_t> u_candidates(const std::vector<Seq>& s,
                                          std::uint64_t key) const {
    std::vector<std::uint64_t> out;
    auto it = cb.u_banks.find(key);
    if (it == cb.u_banks.end()) return out;
    auto p = ptrs(s);
    p.push_back(nullptr);
    for (std::size_t w = 0; w < it->second.size(); ++w) {
      p.back() = &it->second[w];
      if (is_jointly_typical(p, m_src_u, cb.delta)) out.push_back(w);
    }
    return out;
  }

  std::vector<std::uint64_t> hat_candidates(int j, const std::vector<Seq>& s,
                                            const Seq* u, std::uint64_t key) const {
    std::vector<std::uint64_t> out;
    auto it = cb.hat_banks[j].find(key);
    if (it == cb.hat_banks[j].end()) return out;
    auto p = ptrs(s);
    if (u) p.push_back(u);
    p.push_back(nullptr);
    for (std::size_t m = 0; m < it->second.size(); ++m) {
      p.back() = &it->second[m];
      if (is_jointly_typical(p, m_hat[j], cb.delta)) out.push_back(m);
    }
    return out;
  }

  std::optional<std::uint64_t> typical_s0_code(const Seq& s0) const {
    std::uint64_t code = seq_code(s0, m_s0.sizes()[0]);
    if (!cb.bins.count(code)) return std::nullopt;
    return code;
  }
};

void validate_sources(const Context& ctx, const std::vector<Seq>& s) {
  if (s.size() != ctx.src.size()) throw ArgumentError("wrong number of source sequences");
  for (std::size_t c = 0; c < s.size(); ++c) {
    if (s[c].size() != static_cast<std::size_t>(ctx.cb.n))
      throw ArgumentError("source sequence length differs from n");
    for (auto x : s[c])
      if (x >= ctx.src_sizes[c]) throw ArgumentError("source symbol outside alphabet");
  }
}

std::vector<MessageBranch> distribution(const Context& ctx, const std::vector<Seq>& s,
                                        bool public_only) {
  const Codebook& cb = ctx.cb;
  const Message err = cb.message_ranges();
  std::vector<MessageBranch> out;

  switch (cb.scheme) {
    case Scheme::HELPER_B: {
      // (w00, w01, w10, w11)
      auto code = ctx.typical_s0_code(s[0]);
      if (!code) return {{1.0, err}};
      const auto& bin = cb.bins.at(*code);
      auto cands = ctx.hat_candidates(0, s, nullptr, *code);
      if (cands.empty()) return {{1.0, {bin[0], err[1], err[2], err[3]}}};
      const std::uint64_t r11 = cb.range("w11");
      double pr = 1.0 / cands.size();
      for (auto m : cands) out.push_back({pr, {bin[0], m / r11, bin[1], m % r11}});
      return out;
    }
    case Scheme::HELPER_B_OTP: {
      // (c0, w00, w01, wt1, w10, w11); bank entry m = (wt1 * R11 + w11) * R01 + w01
      auto code = ctx.typical_s0_code(s[0]);
      if (!code) return {{1.0, err}};
      const auto& bin = cb.bins.at(*code);  // (wt0, w00, w10)
      auto cands = ctx.hat_candidates(0, s, nullptr, *code);
      if (cands.empty())
        return {{1.0, {err[0], bin[1], err[2], err[3], err[4], err[5]}}};
      const std::uint64_t r01 = cb.range("w01"), r11 = cb.range("w11");
      double pr = 1.0 / cands.size();
      for (auto m : cands) {
        std::uint64_t w01 = m % r01, rest = m / r01;
        std::uint64_t w11 = rest % r11, wt1 = rest / r11;
        out.push_back({pr, {bin[0] ^ wt1, bin[1], w01, wt1, bin[2], w11}});
      }
      return out;
    }
    case Scheme::HELPER_A:
    case Scheme::GW_A: {
      // (w, w1[, w2])
      const int nh = hat_count(cb.scheme);
      auto ucands = ctx.u_candidates(s, 0);
      if (ucands.empty()) return {{1.0, err}};
      double pu = 1.0 / ucands.size();
      for (auto w : ucands) {
        if (public_only) {
          Message m(err.size(), 0);
          m[0] = w;
          out.push_back({pu, m});
          continue;
        }
        const Seq* u = &cb.u_banks.at(0)[w];
        std::vector<std::vector<std::uint64_t>> hc(nh);
        for (int j = 0; j < nh; ++j) {
          hc[j] = ctx.hat_candidates(j, s, u, w);
          if (hc[j].empty()) hc[j] = {err[1 + j]};
        }
        if (nh == 1) {
          for (auto a : hc[0]) out.push_back({pu / hc[0].size(), {w, a}});
        } else {
          double pr = pu / (hc[0].size() * hc[1].size());
          for (auto a : hc[0])
            for (auto b : hc[1]) out.push_back({pr, {w, a, b}});
        }
      }
      return out;
    }
    case Scheme::GW_B: {
      // (wb0, w, w0, w1, w2)
      auto code = ctx.typical_s0_code(s[0]);
      if (!code) return {{1.0, err}};
      const auto& bin = cb.bins.at(*code);  // (w0, wb0)
      auto ucands = ctx.u_candidates(s, *code);
      if (ucands.empty()) return {{1.0, {bin[1], err[1], bin[0], err[3], err[4]}}};
      const std::uint64_t rw = cb.range("w");
      double pu = 1.0 / ucands.size();
      for (auto w : ucands) {
        if (public_only) {
          out.push_back({pu, {bin[1], w, bin[0], 0, 0}});
          continue;
        }
        const Seq* u = &cb.u_banks.at(*code)[w];
        std::vector<std::vector<std::uint64_t>> hc(2);
        for (int j = 0; j < 2; ++j) {
          hc[j] = ctx.hat_candidates(j, s, u, *code * rw + w);
          if (hc[j].empty()) hc[j] = {err[3 + j]};
        }
        double pr = pu / (hc[0].size() * hc[1].size());
        for (auto a : hc[0])
          for (auto b : hc[1]) out.push_back({pr, {bin[1], w, bin[0], a, b}});
      }
      return out;
    }
  }
  return out;
}

bool contains_error(const Message& m, const Message& err) {
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] >= err[i]) return true;
  return false;
}

}  // namespace

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::HELPER_A: return "HELPER_A";
    case Scheme::HELPER_B: return "HELPER_B";
    case Scheme::HELPER_B_OTP: return "HELPER_B_OTP";
    case Scheme::GW_A: return "GW_A";
    case Scheme::GW_B: return "GW_B";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::HELPER_A, Scheme::HELPER_B, Scheme::HELPER_B_OTP,
                   Scheme::GW_A, Scheme::GW_B})
    if (scheme_name(s) == name) return s;
  throw ArgumentError("unknown scheme: " + name);
}

const std::vector<std::string>& rate_names(Scheme s) {
  static const std::vector<std::string> a = {"w", "w1"};
  static const std::vector<std::string> b = {"w00", "w01", "w10", "w11"};
  static const std::vector<std::string> o = {"wt0", "wt1", "w00", "w01", "w10", "w11"};
  static const std::vector<std::string> ga = {"w", "w1", "w2"};
  static const std::vector<std::string> gb = {"w0", "wb0", "w", "w1", "w2"};
  switch (s) {
    case Scheme::HELPER_A: return a;
    case Scheme::HELPER_B: return b;
    case Scheme::HELPER_B_OTP: return o;
    case Scheme::GW_A: return ga;
    case Scheme::GW_B: return gb;
  }
  return a;
}

const std::vector<std::string>& message_names(Scheme s) {
  static const std::vector<std::string> a = {"w", "w1"};
  static const std::vector<std::string> b = {"w00", "w01", "w10", "w11"};
  static const std::vector<std::string> o = {"c0", "w00", "w01", "wt1", "w10", "w11"};
  static const std::vector<std::string> ga = {"w", "w1", "w2"};
  static const std::vector<std::string> gb = {"wb0", "w", "w0", "w1", "w2"};
  switch (s) {
    case Scheme::HELPER_A: return a;
    case Scheme::HELPER_B: return b;
    case Scheme::HELPER_B_OTP: return o;
    case Scheme::GW_A: return ga;
    case Scheme::GW_B: return gb;
  }
  return a;
}

std::size_t public_count(Scheme s) {
  switch (s) {
    case Scheme::HELPER_A:
    case Scheme::GW_A: return 1;
    case Scheme::HELPER_B: return 2;
    case Scheme::HELPER_B_OTP: return 3;
    case Scheme::GW_B: return 2;
  }
  return 0;
}

LabelSet scheme_source_labels(Scheme s) {
  switch (s) {
    case Scheme::GW_A: return {"S1", "S2"};
    case Scheme::GW_B: return {"S0", "S1", "S2"};
    default: return {"S0", "S1"};
  }
}

LabelSet secret_labels(Scheme s) {
  switch (s) {
    case Scheme::HELPER_A: return {"S0", "S1"};
    case Scheme::GW_A: return {"S1", "S2"};
    default: return {"S0"};
  }
}

int index_width(std::uint64_t range) {
  int w = 0;
  while (w < 64 && (std::uint64_t{1} << w) < range) ++w;
  return w;
}

double otp_mutual_information(const std::vector<double>& plain_pmf,
                              std::uint64_t key_range) {
  if (key_range == 0) throw ArgumentError("key range must be >= 1");
  const int width = std::max(index_width(plain_pmf.size()), index_width(key_range));
  const std::uint64_t nc = std::uint64_t{1} << width;
  const long double pk = 1.0L / key_range;
  std::vector<long double> pc(nc, 0.0L);
  for (std::uint64_t w = 0; w < plain_pmf.size(); ++w)
    for (std::uint64_t k = 0; k < key_range; ++k) pc[w ^ k] += plain_pmf[w] * pk;
  long double mi = 0.0L;
  for (std::uint64_t w = 0; w < plain_pmf.size(); ++w) {
    if (plain_pmf[w] <= 0.0) continue;
    for (std::uint64_t k = 0; k < key_range; ++k) {
      // P(c | w) = 1/key_range for c = w xor k
      long double joint = plain_pmf[w] * pk;
      mi += joint * std::log2(pk / pc[w ^ k]);
    }
  }
  return static_cast<double>(std::max(mi, 0.0L));
}

ChannelKernel dsbs_test_channel(double p, double D1) {
  if (!(p >= 0.0 && p <= 0.5)) throw ArgumentError("p must lie in [0, 1/2]");
  if (!(D1 >= 0.0)) throw ArgumentError("D1 must be >= 0");
  // P(zhat | z) for Z = S0 xor S1.
  double rows_z[2][2];
  if (D1 >= p) {
    rows_z[0][0] = rows_z[1][0] = 1.0;
    rows_z[0][1] = rows_z[1][1] = 0.0;
  } else {
    double q = (p - D1) / (1.0 - 2.0 * D1);
    for (int z = 0; z < 2; ++z) {
      double pz = z ? p : 1.0 - p;
      for (int zh = 0; zh < 2; ++zh) {
        double pzh = zh ? q : 1.0 - q;
        double back = (z == zh) ? 1.0 - D1 : D1;
        rows_z[z][zh] = pz > 0.0 ? pzh * back / pz : (z == zh ? 1.0 : 0.0);
      }
    }
  }
  std::vector<std::vector<double>> rows(4, std::vector<double>(2, 0.0));
  for (int s0 = 0; s0 < 2; ++s0)
    for (int s1 = 0; s1 < 2; ++s1)
      for (int zh = 0; zh < 2; ++zh) rows[2 * s0 + s1][s0 ^ zh] += rows_z[s0 ^ s1][zh];
  return ChannelKernel({"S0", "S1"}, {2, 2}, {"S1hat"}, {2}, rows);
}

std::vector<std::uint64_t> Codebook::message_ranges() const {
  std::vector<std::uint64_t> r;
  for (const auto& name : message_names(scheme)) {
    if (name == "c0")
      r.push_back(std::uint64_t{1} << std::max(index_width(range("wt0")),
                                               index_width(range("wt1"))));
    else
      r.push_back(range(name));
  }
  return r;
}

bool Codebook::operator==(const Codebook& o) const {
  return scheme == o.scheme && n == o.n && delta == o.delta && seed == o.seed &&
         joint.labels() == o.joint.labels() && joint.sizes() == o.joint.sizes() &&
         joint.probs() == o.joint.probs() && ranges == o.ranges && bins == o.bins &&
         bin_members == o.bin_members && u_banks == o.u_banks &&
         hat_banks == o.hat_banks;
}

Codebook build_code(Scheme scheme, const JointPmf& source,
                    const std::vector<ChannelKernel>& channel,
                    const std::map<std::string, double>& rates,
                    const TypicalityParams& params, std::uint64_t seed) {
  params.validate();
  if (source.labels() != scheme_source_labels(scheme))
    throw ArgumentError("source labels do not match scheme " + scheme_name(scheme));
  Codebook cb;
  cb.scheme = scheme;
  cb.n = params.n;
  cb.delta = params.delta;
  cb.seed = seed;
  JointPmf j = source;
  for (const auto& k : channel) j = extend_joint(j, k);
  if (has_u(scheme) && !j.has("U")) throw ArgumentError("channel must produce U");
  for (int h = 0; h < hat_count(scheme); ++h)
    if (!j.has(hat_label(h)))
      throw ArgumentError("channel must produce " + hat_label(h));
  cb.joint = j;
  for (const auto& name : rate_names(scheme)) {
    auto it = rates.find(name);
    if (it == rates.end()) throw ArgumentError("missing rate for index " + name);
    cb.ranges[name] = rate_range(it->second, params.n);
  }
  for (const auto& [name, r] : rates) {
    (void)r;
    if (!cb.ranges.count(name)) throw ArgumentError("unknown rate index " + name);
  }

  const int n = params.n;
  checked_power(static_cast<int>(source.size()), n);

  // Typical S0 sequences in code order, with their bins.
  std::vector<std::uint64_t> typical_s0;
  if (has_bins(scheme)) {
    JointPmf m0 = j.marginal({"S0"});
    const int b0 = m0.sizes()[0];
    std::vector<std::string> keys;
    if (scheme == Scheme::HELPER_B) keys = {"w00", "w10"};
    if (scheme == Scheme::HELPER_B_OTP) keys = {"wt0", "w00", "w10"};
    if (scheme == Scheme::GW_B) keys = {"w0", "wb0"};
    auto rng = substream(seed, 0, kBinTag);
    const std::uint64_t total = checked_power(b0, n);
    for (std::uint64_t c = 0; c < total; ++c) {
      Seq s = seq_from_code(c, b0, n);
      if (!is_typical(s, m0, params)) continue;
      typical_s0.push_back(c);
      std::vector<std::uint64_t> t;
      for (const auto& k : keys) t.push_back(uniform_index(rng, cb.range(k)));
      cb.bin_members[t].push_back(c);
      cb.bins.emplace(c, std::move(t));
    }
  }

  // Capacity check on bank sizes before drawing anything.
  {
    double entries = 0.0;
    const double ns0 = static_cast<double>(typical_s0.size());
    switch (scheme) {
      case Scheme::HELPER_B:
        entries = ns0 * cb.range("w01") * cb.range("w11");
        break;
      case Scheme::HELPER_B_OTP:
        entries = ns0 * cb.range("w01") * cb.range("w11") * cb.range("wt1");
        break;
      case Scheme::HELPER_A:
        entries = cb.range("w") * (1.0 + cb.range("w1"));
        break;
      case Scheme::GW_A:
        entries = cb.range("w") * (1.0 + cb.range("w1") + cb.range("w2"));
        break;
      case Scheme::GW_B:
        entries = ns0 * cb.range("w") * (1.0 + cb.range("w1") + cb.range("w2"));
        break;
    }
    if (entries > static_cast<double>(kEnumerationCap))
      throw CapacityError("codeword banks exceed the enumeration cap");
  }

  cb.hat_banks.resize(hat_count(scheme));
  const int b0 = j.has("S0") ? j.alphabet("S0") : 0;
  switch (scheme) {
    case Scheme::HELPER_B:
    case Scheme::HELPER_B_OTP: {
      auto rows = cond_rows(j, "S1hat", {"S0"});
      std::uint64_t size = cb.range("w01") * cb.range("w11");
      if (scheme == Scheme::HELPER_B_OTP) size *= cb.range("wt1");
      for (auto c : typical_s0) {
        Seq s0 = seq_from_code(c, b0, n);
        auto g = flat_given({&s0}, {b0}, n);
        auto rng = substream(seed, c, kHatTag);
        auto& bank = cb.hat_banks[0][c];
        for (std::uint64_t m = 0; m < size; ++m) bank.push_back(draw_seq(rng, rows, g));
      }
      break;
    }
    case Scheme::HELPER_A:
    case Scheme::GW_A: {
      const int bu = j.alphabet("U");
      auto urows = cond_rows(j, "U", {});
      auto urng = substream(seed, 0, kUTag);
      std::vector<std::size_t> none(n, 0);
      auto& ub = cb.u_banks[0];
      for (std::uint64_t w = 0; w < cb.range("w"); ++w) ub.push_back(draw_seq(urng, urows, none));
      for (int h = 0; h < hat_count(scheme); ++h) {
        auto rows = cond_rows(j, hat_label(h), {"U"});
        for (std::uint64_t w = 0; w < ub.size(); ++w) {
          auto g = flat_given({&ub[w]}, {bu}, n);
          auto rng = substream(seed, w, kHatTag + h);
          auto& bank = cb.hat_banks[h][w];
          for (std::uint64_t m = 0; m < cb.range(hat_key(h)); ++m)
            bank.push_back(draw_seq(rng, rows, g));
        }
      }
      break;
    }
    case Scheme::GW_B: {
      const int bu = j.alphabet("U");
      auto urows = cond_rows(j, "U", {"S0"});
      std::vector<std::vector<std::vector<double>>> hrows;
      for (int h = 0; h < 2; ++h) hrows.push_back(cond_rows(j, hat_label(h), {"U", "S0"}));
      const std::uint64_t rw = cb.range("w");
      for (auto c : typical_s0) {
        Seq s0 = seq_from_code(c, b0, n);
        auto g0 = flat_given({&s0}, {b0}, n);
        auto urng = substream(seed, c, kUTag);
        auto& ub = cb.u_banks[c];
        for (std::uint64_t w = 0; w < rw; ++w) ub.push_back(draw_seq(urng, urows, g0));
        for (int h = 0; h < 2; ++h) {
          auto rng = substream(seed, c, kHatTag + h);
          for (std::uint64_t w = 0; w < rw; ++w) {
            auto g = flat_given({&ub[w], &s0}, {bu, b0}, n);
            auto& bank = cb.hat_banks[h][c * rw + w];
            for (std::uint64_t m = 0; m < cb.range(hat_key(h)); ++m)
              bank.push_back(draw_seq(rng, hrows[h], g));
          }
        }
      }
      break;
    }
  }
  return cb;
}

std::vector<MessageBranch> message_distribution(const Codebook& cb,
                                                const std::vector<Seq>& sources,
                                                bool public_only) {
  Context ctx(cb);
  validate_sources(ctx, sources);
  return distribution(ctx, sources, public_only);
}

Message encode(const Codebook& cb, const std::vector<Seq>& sources, std::mt19937_64& rng) {
  auto d = message_distribution(cb, sources, false);
  if (d.size() == 1) return d[0].message;
  std::vector<double> p;
  for (const auto& b : d) p.push_back(b.probability);
  return d[sample_discrete(rng, p.data(), p.size())].message;
}

Decoded decode(const Codebook& cb, const Message& m) {
  const Message err = cb.message_ranges();
  if (m.size() != err.size()) throw ArgumentError("message has the wrong length");
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i] > err[i]) throw ArgumentError("message index outside its range");
  Decoded d;
  const int n = cb.n;
  const int nh = hat_count(cb.scheme);
  d.hats.assign(nh, Seq());

  auto bin_lookup = [&](const std::vector<std::uint64_t>& t) -> std::optional<std::uint64_t> {
    auto it = cb.bin_members.find(t);
    if (it == cb.bin_members.end() || it->second.empty()) {
      d.failed = true;
      return std::nullopt;
    }
    if (it->second.size() > 1) {
      d.failed = true;
      d.ambiguous = true;
      return std::nullopt;
    }
    d.s0 = seq_from_code(it->second[0], cb.joint.alphabet("S0"), n);
    return it->second[0];
  };

  switch (cb.scheme) {
    case Scheme::HELPER_B: {
      if (m[0] == err[0] || m[2] == err[2]) return d.failed = true, d;
      auto c = bin_lookup({m[0], m[2]});
      if (!c) return d;
      if (m[1] == err[1] || m[3] == err[3]) return d.failed = true, d;
      d.hats[0] = cb.hat_banks[0].at(*c)[m[1] * cb.range("w11") + m[3]];
      return d;
    }
    case Scheme::HELPER_B_OTP: {
      if (m[0] == err[0] || m[1] == err[1] || m[3] == err[3] || m[4] == err[4])
        return d.failed = true, d;
      std::uint64_t wt0 = m[0] ^ m[3];
      if (wt0 >= cb.range("wt0")) return d.failed = true, d;
      auto c = bin_lookup({wt0, m[1], m[4]});
      if (!c) return d;
      if (m[2] == err[2] || m[5] == err[5]) return d.failed = true, d;
      std::uint64_t idx = (m[3] * cb.range("w11") + m[5]) * cb.range("w01") + m[2];
      d.hats[0] = cb.hat_banks[0].at(*c)[idx];
      return d;
    }
    case Scheme::HELPER_A:
    case Scheme::GW_A: {
      if (m[0] == err[0]) return d.failed = true, d;
      for (int h = 0; h < nh; ++h) {
        if (m[1 + h] == err[1 + h]) return d.failed = true, d;
        d.hats[h] = cb.hat_banks[h].at(m[0])[m[1 + h]];
      }
      return d;
    }
    case Scheme::GW_B: {
      if (m[0] == err[0] || m[2] == err[2]) return d.failed = true, d;
      auto c = bin_lookup({m[2], m[0]});
      if (!c) return d;
      if (m[1] == err[1]) return d.failed = true, d;
      for (int h = 0; h < 2; ++h) {
        if (m[3 + h] == err[3 + h]) return d.failed = true, d;
        d.hats[h] = cb.hat_banks[h].at(*c * cb.range("w") + m[1])[m[3 + h]];
      }
      return d;
    }
  }
  return d;
}

double exact_equivocation(const Codebook& cb, const JointPmf& source) {
  Context ctx(cb);
  if (source.labels() != ctx.src || source.sizes() != ctx.src_sizes)
    throw ArgumentError("source does not match the codebook");
  const int n = cb.n;
  checked_power(static_cast<int>(source.size()), n);

  const LabelSet sec = secret_labels(cb.scheme);
  LabelSet oth;
  for (const auto& l : ctx.src)
    if (std::find(sec.begin(), sec.end(), l) == sec.end()) oth.push_back(l);
  JointPmf psec = source.marginal(sec);
  std::vector<int> sec_sizes = psec.sizes(), oth_sizes;
  for (const auto& l : oth) oth_sizes.push_back(source.alphabet(l));
  const int bs = static_cast<int>(psec.size());
  const int bo = static_cast<int>(product(oth_sizes));
  // P(other | secret) per letter.
  std::vector<std::vector<double>> pyx(bs, std::vector<double>(bo, 0.0));
  for (int x = 0; x < bs; ++x)
    for (int y = 0; y < bo; ++y) {
      auto xs = mixed_unflat(x, sec_sizes);
      auto ys = mixed_unflat(y, oth_sizes);
      std::vector<int> full(ctx.src.size());
      std::size_t xi = 0, yi = 0;
      for (std::size_t c = 0; c < ctx.src.size(); ++c) {
        bool is_sec = std::find(sec.begin(), sec.end(), ctx.src[c]) != sec.end();
        full[c] = is_sec ? xs[xi++] : ys[yi++];
      }
      double px = psec.probs()[x];
      pyx[x][y] = px > 0.0 ? source.at(full) / px : 0.0;
    }

  const std::uint64_t nx = checked_power(bs, n);
  const std::uint64_t ny = checked_power(bo, n);
  const Message err = cb.message_ranges();
  const std::size_t npub = public_count(cb.scheme);
  auto pack = [&](const Message& m) {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < npub; ++i) k = k * (err[i] + 1) + m[i];
    return k;
  };

  struct Slot {
    double h_w_given_x = 0.0;  // P(x) H(W | X = x)
    std::map<std::uint64_t, double> pw;  // P(x) P(w | x)
  };
  std::vector<Slot> slots(nx);
  parallel_for(nx, [&](std::size_t xc) {
    Seq xflat = seq_from_code(xc, bs, n);
    double px = 1.0;
    for (auto v : xflat) px *= psec.probs()[v];
    if (px == 0.0) return;
    std::vector<Seq> s(ctx.src.size(), Seq(n));
    std::map<std::uint64_t, double> pw;
    for (std::uint64_t yc = 0; yc < ny; ++yc) {
      Seq yflat = seq_from_code(yc, bo, n);
      double py = 1.0;
      for (int i = 0; i < n && py > 0.0; ++i) py *= pyx[xflat[i]][yflat[i]];
      if (py == 0.0) continue;
      for (int i = 0; i < n; ++i) {
        auto xs = mixed_unflat(xflat[i], sec_sizes);
        auto ys = mixed_unflat(yflat[i], oth_sizes);
        std::size_t xi = 0, yi = 0;
        for (std::size_t c = 0; c < ctx.src.size(); ++c) {
          bool is_sec = std::find(sec.begin(), sec.end(), ctx.src[c]) != sec.end();
          s[c][i] = static_cast<std::uint8_t>(is_sec ? xs[xi++] : ys[yi++]);
        }
      }
      for (const auto& b : distribution(ctx, s, true)) pw[pack(b.message)] += py * b.probability;
    }
    double h = 0.0;
    for (const auto& [k, p] : pw)
      if (p > 0.0) h -= p * std::log2(p);
    Slot& sl = slots[xc];
    sl.h_w_given_x = px * h;
    for (const auto& [k, p] : pw) sl.pw[k] = px * p;
  });

  double h_w_given_x = 0.0;
  std::map<std::uint64_t, double> pw;
  for (const auto& sl : slots) {
    h_w_given_x += sl.h_w_given_x;
    for (const auto& [k, p] : sl.pw) pw[k] += p;
  }
  double h_w = 0.0;
  for (const auto& [k, p] : pw)
    if (p > 0.0) h_w -= p * std::log2(p);
  const double h_x = n * entropy(source, sec);
  double eq = (h_x + h_w_given_x - h_w) / n;
  return std::clamp(eq, 0.0, h_x / n);
}

SimReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 0) throw ArgumentError("trials must be >= 0");
  Codebook cb = build_code(cfg.scheme, cfg.source, cfg.channel, cfg.rates, cfg.params,
                           cfg.seed);
  const int nh = hat_count(cfg.scheme);
  std::vector<DistortionMeasure> d = cfg.distortion;
  if (d.empty())
    for (int h = 0; h < nh; ++h) {
      std::string s = h == 0 ? "S1" : "S2";
      if (cb.joint.alphabet(s) != cb.joint.alphabet(hat_label(h)))
        throw ArgumentError("Hamming distortion needs equal alphabets for " + s);
      d.push_back(DistortionMeasure::hamming(cb.joint.alphabet(s)));
    }
  if (static_cast<int>(d.size()) != nh) throw ArgumentError("wrong number of distortion measures");

  Context ctx(cb);
  const Message err = cb.message_ranges();
  const int n = cfg.params.n;
  struct Trial {
    bool encoded = false, failed = false, ambiguous = false, violation = false;
    double d[2] = {0.0, 0.0};
  };
  std::vector<Trial> res(static_cast<std::size_t>(cfg.trials));
  const auto& probs = cfg.source.probs();
  const std::vector<int>& sizes = cfg.source.sizes();
  const std::size_t s1_pos = cfg.source.index_of("S1");
  parallel_for(res.size(), [&](std::size_t t) {
    auto rng = substream(cfg.seed, t, kTrialTag);
    std::vector<Seq> s(sizes.size(), Seq(n));
    for (int i = 0; i < n; ++i) {
      auto sym = mixed_unflat(sample_discrete(rng, probs.data(), probs.size()), sizes);
      for (std::size_t c = 0; c < sizes.size(); ++c) s[c][i] = static_cast<std::uint8_t>(sym[c]);
    }
    auto dist = distribution(ctx, s, false);
    std::size_t pick = 0;
    if (dist.size() > 1) {
      std::vector<double> p;
      for (const auto& b : dist) p.push_back(b.probability);
      pick = static_cast<std::size_t>(sample_discrete(rng, p.data(), p.size()));
    }
    const Message& m = dist[pick].message;
    Trial& r = res[t];
    r.encoded = !contains_error(m, err);
    Decoded dec = decode(cb, m);
    r.failed = dec.failed;
    r.ambiguous = dec.ambiguous;
    if (!dec.failed && dec.s0 && *dec.s0 != s[0]) r.violation = true;
    if (!dec.failed)
      for (int h = 0; h < nh; ++h) {
        const Seq& src = s[h == 0 ? s1_pos : s1_pos + 1];
        double tot = 0.0;
        for (int i = 0; i < n; ++i) tot += d[h](src[i], dec.hats[h][i]);
        r.d[h] = tot / n;
      }
  });

  SimReport rep;
  rep.trials = cfg.trials;
  int encoded = 0, ok = 0;
  double d1 = 0.0, d2 = 0.0;
  for (const auto& r : res) {
    encoded += r.encoded;
    rep.decode_failures += r.failed;
    rep.ambiguous += r.ambiguous;
    rep.lossless_violations += r.violation;
    if (!r.failed) {
      ++ok;
      d1 += r.d[0];
      d2 += r.d[1];
    }
  }
  if (cfg.trials > 0) {
    rep.encode_success_rate = static_cast<double>(encoded) / cfg.trials;
    rep.s0_error_rate = static_cast<double>(rep.decode_failures) / cfg.trials;
  }
  rep.d1_mean = ok > 0 ? d1 / ok : 0.0;
  if (nh == 2) rep.d2_mean = ok > 0 ? d2 / ok : 0.0;
  rep.equivocation_per_symbol = exact_equivocation(cb, cfg.source);
  rep.secret_entropy = entropy(cfg.source, secret_labels(cfg.scheme));
  for (const auto& [name, r] : cb.ranges)
    rep.rates_used[name] = std::log2(static_cast<double>(r)) / n;
  return rep;
}

}  // namespace srdt
