#include "srdt/cond_rd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srdt/errors.hpp"
#include "srdt/parallel.hpp"

namespace srdt {

DistortionMeasure::DistortionMeasure(std::vector<std::vector<double>> t)
    : table(std::move(t)) {
  if (table.empty() || table[0].empty())
    throw ArgumentError("distortion: empty table");
  for (const auto& row : table) {
    if (row.size() != table[0].size())
      throw ArgumentError("distortion: ragged table");
    for (double v : row)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw ArgumentError("distortion: entries must be finite and >= 0");
  }
}

DistortionMeasure DistortionMeasure::hamming(int n) {
  if (n < 1) throw ArgumentError("hamming: alphabet must be nonempty");
  std::vector<std::vector<double>> t(n, std::vector<double>(n, 1.0));
  for (int i = 0; i < n; ++i) t[i][i] = 0.0;
  return DistortionMeasure(std::move(t));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Problem {
  int ny = 1, nx = 1, nr = 1;
  std::vector<double> py;    // P(y)
  std::vector<double> px;    // P(x|y), ny*nx
  std::vector<double> dist;  // d, ny*nx*nr
  std::vector<double> dmin;  // min_r d, ny*nx
  LabelSet in_labels;
  std::vector<int> in_sizes;

  double d(int y, int x, int r) const { return dist[(y * nx + x) * nr + r]; }
  double p(int y, int x) const { return px[y * nx + x]; }
};

Problem build(const JointPmf& joint, const LabelSet& side,
              const LabelSet& source, const std::string& target,
              const DistortionMeasure& dm) {
  if (source.empty()) throw ArgumentError("cond_rd: empty source label set");
  LabelSet all = side;
  all.insert(all.end(), source.begin(), source.end());
  JointPmf m = joint.marginal(all);
  auto tpos = std::find(all.begin(), all.end(), target);
  if (tpos == all.end())
    throw ArgumentError("cond_rd: distortion target " + target +
                        " is not among side or source labels");
  std::size_t t = static_cast<std::size_t>(tpos - all.begin());
  if (dm.source_size() != m.sizes()[t])
    throw ArgumentError("cond_rd: distortion table does not match alphabet of " +
                        target);

  Problem pr;
  pr.in_labels = all;
  pr.in_sizes = m.sizes();
  std::vector<int> side_sizes(m.sizes().begin(), m.sizes().begin() + side.size());
  std::vector<int> src_sizes(m.sizes().begin() + side.size(), m.sizes().end());
  pr.ny = static_cast<int>(product(side_sizes));
  pr.nx = static_cast<int>(product(src_sizes));
  pr.nr = dm.recon_size();
  pr.py.assign(pr.ny, 0.0);
  pr.px.assign(static_cast<std::size_t>(pr.ny) * pr.nx, 0.0);
  pr.dist.assign(static_cast<std::size_t>(pr.ny) * pr.nx * pr.nr, 0.0);
  pr.dmin.assign(static_cast<std::size_t>(pr.ny) * pr.nx, 0.0);
  for (int y = 0; y < pr.ny; ++y) {
    for (int x = 0; x < pr.nx; ++x) {
      std::size_t i = static_cast<std::size_t>(y) * pr.nx + x;
      double pj = m.probs()[i];
      pr.py[y] += pj;
      pr.px[i] = pj;
      int s = m.unflat(i)[t];
      double lo = kInf;
      for (int r = 0; r < pr.nr; ++r) {
        pr.dist[i * pr.nr + r] = dm(s, r);
        lo = std::min(lo, dm(s, r));
      }
      pr.dmin[i] = lo;
    }
  }
  for (int y = 0; y < pr.ny; ++y)
    if (pr.py[y] > 0.0)
      for (int x = 0; x < pr.nx; ++x) pr.px[y * pr.nx + x] /= pr.py[y];
  return pr;
}

double dmin_total(const Problem& pr) {
  double total = 0.0;
  for (int y = 0; y < pr.ny; ++y)
    for (int x = 0; x < pr.nx; ++x)
      total += pr.py[y] * pr.p(y, x) * pr.dmin[y * pr.nx + x];
  return total;
}

// Best constant reconstruction per side symbol.
std::vector<int> slack_choice(const Problem& pr, double* total) {
  std::vector<int> choice(pr.ny, 0);
  double acc = 0.0;
  for (int y = 0; y < pr.ny; ++y) {
    double best = kInf;
    for (int r = 0; r < pr.nr; ++r) {
      double e = 0.0;
      for (int x = 0; x < pr.nx; ++x) e += pr.p(y, x) * pr.d(y, x, r);
      if (e < best) {
        best = e;
        choice[y] = r;
      }
    }
    acc += pr.py[y] * best;
  }
  if (total) *total = acc;
  return choice;
}

struct BaOutcome {
  double upper = kInf;  // I + beta*D at the final kernel (nats)
  double info = 0.0;    // nats
  double distortion = 0.0;
  std::vector<double> w;  // ny*nx*nr
  std::vector<double> q;  // final output marginals, for warm starts
  bool converged = false;
};

// Alternating minimization with a shared slope across side symbols.
// beta = +inf restricts the kernel to minimum-distortion entries.
BaOutcome run_ba(const Problem& pr, double beta, std::vector<double> q,
                 const CondRdOptions& o) {
  const bool hard = std::isinf(beta);
  const int nr = pr.nr;
  BaOutcome out;
  out.w.assign(static_cast<std::size_t>(pr.ny) * pr.nx * nr, 0.0);
  std::vector<double> qnew(q.size());
  std::vector<double> c(nr);
  double prev = kInf;
  for (int it = 0; it < o.max_iterations; ++it) {
    double upper = 0.0, lower = 0.0, info = 0.0, dist = 0.0;
    std::fill(qnew.begin(), qnew.end(), 0.0);
    for (int y = 0; y < pr.ny; ++y) {
      if (pr.py[y] <= 0.0) continue;
      const double* qy = &q[static_cast<std::size_t>(y) * nr];
      double* qn = &qnew[static_cast<std::size_t>(y) * nr];
      std::fill(c.begin(), c.end(), 0.0);
      double lnz_sum = 0.0;
      for (int x = 0; x < pr.nx; ++x) {
        double px = pr.p(y, x);
        if (px <= 0.0) continue;
        std::size_t base = (static_cast<std::size_t>(y) * pr.nx + x) * nr;
        double dm = pr.dmin[y * pr.nx + x];
        double z = 0.0;
        for (int r = 0; r < nr; ++r) {
          double excess = pr.dist[base + r] - dm;
          double e = hard ? (excess <= 1e-15 ? 1.0 : 0.0) : std::exp(-beta * excess);
          out.w[base + r] = qy[r] * e;
          z += out.w[base + r];
        }
        if (z <= 0.0) {
          // q vanished on every admissible symbol; reseed uniformly.
          for (int r = 0; r < nr; ++r) {
            double excess = pr.dist[base + r] - dm;
            out.w[base + r] =
                hard ? (excess <= 1e-15 ? 1.0 : 0.0) : std::exp(-beta * excess);
            z += out.w[base + r];
          }
        }
        for (int r = 0; r < nr; ++r) {
          double excess = pr.dist[base + r] - dm;
          double e = hard ? (excess <= 1e-15 ? 1.0 : 0.0) : std::exp(-beta * excess);
          out.w[base + r] /= z;
          qn[r] += px * out.w[base + r];
          c[r] += px * e / z;
        }
        lnz_sum += px * (std::log(z) - (hard ? 0.0 : beta * dm));
      }
      double cmax = *std::max_element(c.begin(), c.end());
      lower += pr.py[y] * (-lnz_sum - std::log(cmax));
      double iy = 0.0, dy = 0.0;
      for (int x = 0; x < pr.nx; ++x) {
        double px = pr.p(y, x);
        if (px <= 0.0) continue;
        std::size_t base = (static_cast<std::size_t>(y) * pr.nx + x) * nr;
        for (int r = 0; r < nr; ++r) {
          double wv = out.w[base + r];
          if (wv <= 0.0) continue;
          iy += px * wv * std::log(wv / qn[r]);
          dy += px * wv * pr.dist[base + r];
        }
      }
      info += pr.py[y] * iy;
      dist += pr.py[y] * dy;
    }
    upper = info + (hard ? 0.0 : beta * dist);
    out.upper = upper;
    out.info = std::max(0.0, info);
    out.distortion = dist;
    q.swap(qnew);
    if (std::abs(prev - upper) < o.tolerance || upper - lower < o.tolerance) {
      out.converged = true;
      break;
    }
    prev = upper;
  }
  out.q = std::move(q);
  return out;
}

std::vector<double> initial_q(const Problem& pr, std::uint64_t seed) {
  auto rng = substream(seed, 0, 0x5243);
  std::vector<double> q(static_cast<std::size_t>(pr.ny) * pr.nr);
  for (int y = 0; y < pr.ny; ++y) {
    double total = 0.0;
    for (int r = 0; r < pr.nr; ++r) {
      q[y * pr.nr + r] = 0.1 + uniform01(rng);
      total += q[y * pr.nr + r];
    }
    for (int r = 0; r < pr.nr; ++r) q[y * pr.nr + r] /= total;
  }
  return q;
}

struct Eval {
  double beta = 0.0;
  BaOutcome best;
};

// `warm`, when given, is tried alongside the seeded restarts.
Eval evaluate(const Problem& pr, double beta, const CondRdOptions& o,
              const std::vector<double>* warm = nullptr) {
  Eval e;
  e.beta = beta;
  bool have = false;
  std::vector<std::vector<double>> starts;
  for (auto seed : o.restart_seeds) starts.push_back(initial_q(pr, seed));
  if (warm != nullptr) starts.push_back(*warm);
  for (auto& start : starts) {
    BaOutcome r = run_ba(pr, beta, std::move(start), o);
    if (!have || r.upper < e.best.upper ||
        (r.converged && !e.best.converged && r.upper <= e.best.upper + o.tolerance)) {
      e.best = std::move(r);
      have = true;
    }
  }
  return e;
}

double kernel_info(const Problem& pr, const std::vector<double>& w) {
  double info = 0.0;
  std::vector<double> q(pr.nr);
  for (int y = 0; y < pr.ny; ++y) {
    if (pr.py[y] <= 0.0) continue;
    std::fill(q.begin(), q.end(), 0.0);
    for (int x = 0; x < pr.nx; ++x)
      for (int r = 0; r < pr.nr; ++r)
        q[r] += pr.p(y, x) * w[(static_cast<std::size_t>(y) * pr.nx + x) * pr.nr + r];
    for (int x = 0; x < pr.nx; ++x) {
      double px = pr.p(y, x);
      if (px <= 0.0) continue;
      for (int r = 0; r < pr.nr; ++r) {
        double wv = w[(static_cast<std::size_t>(y) * pr.nx + x) * pr.nr + r];
        if (wv > 0.0) info += pr.py[y] * px * wv * std::log(wv / q[r]);
      }
    }
  }
  return std::max(0.0, info);
}

double kernel_distortion(const Problem& pr, const std::vector<double>& w) {
  double d = 0.0;
  for (int y = 0; y < pr.ny; ++y)
    for (int x = 0; x < pr.nx; ++x)
      for (int r = 0; r < pr.nr; ++r) {
        std::size_t i = (static_cast<std::size_t>(y) * pr.nx + x) * pr.nr + r;
        d += pr.py[y] * pr.p(y, x) * w[i] * pr.dist[i];
      }
  return d;
}

ChannelKernel to_kernel(const Problem& pr, const std::vector<double>& w,
                        const std::string& out_label) {
  std::vector<std::vector<double>> rows(
      static_cast<std::size_t>(pr.ny) * pr.nx, std::vector<double>(pr.nr, 0.0));
  for (int y = 0; y < pr.ny; ++y)
    for (int x = 0; x < pr.nx; ++x) {
      std::size_t i = static_cast<std::size_t>(y) * pr.nx + x;
      double total = 0.0;
      for (int r = 0; r < pr.nr; ++r) {
        rows[i][r] = w[i * pr.nr + r];
        total += rows[i][r];
      }
      if (pr.py[y] <= 0.0 || pr.p(y, x) <= 0.0 || total <= 0.0) {
        // Unreachable input: any valid row will do.
        std::fill(rows[i].begin(), rows[i].end(), 0.0);
        int best = 0;
        for (int r = 1; r < pr.nr; ++r)
          if (pr.dist[i * pr.nr + r] < pr.dist[i * pr.nr + best]) best = r;
        rows[i][best] = 1.0;
      } else {
        for (double& v : rows[i]) v /= total;
      }
    }
  return ChannelKernel(pr.in_labels, pr.in_sizes, {out_label}, {pr.nr},
                       std::move(rows));
}

constexpr double kLn2 = 0.69314718055994530942;

}  // namespace

double min_expected_distortion(const JointPmf& joint, const LabelSet& side,
                               const LabelSet& source, const std::string& target,
                               const DistortionMeasure& d) {
  return dmin_total(build(joint, side, source, target, d));
}

double slack_distortion(const JointPmf& joint, const LabelSet& side,
                        const LabelSet& source, const std::string& target,
                        const DistortionMeasure& d) {
  double total = 0.0;
  slack_choice(build(joint, side, source, target, d), &total);
  return total;
}

CondRdResult solve_conditional_rd(const JointPmf& joint, const LabelSet& side,
                                  const LabelSet& source,
                                  const std::string& target,
                                  const DistortionMeasure& d, double budget,
                                  const std::string& out_label,
                                  const CondRdOptions& o) {
  if (!(budget >= 0.0)) throw ArgumentError("cond_rd: negative budget");
  if (o.restart_seeds.empty() || o.multipliers < 2 || o.max_iterations < 1)
    throw ArgumentError("cond_rd: invalid solver options");
  Problem pr = build(joint, side, source, target, d);
  const double dlo = dmin_total(pr);
  double dhi = 0.0;
  std::vector<int> choice = slack_choice(pr, &dhi);

  CondRdResult res;
  if (budget >= dhi - 1e-15) {
    std::vector<double> w(static_cast<std::size_t>(pr.ny) * pr.nx * pr.nr, 0.0);
    for (int y = 0; y < pr.ny; ++y)
      for (int x = 0; x < pr.nx; ++x)
        w[(static_cast<std::size_t>(y) * pr.nx + x) * pr.nr + choice[y]] = 1.0;
    res.kernel = to_kernel(pr, w, out_label);
    res.distortion = dhi;
    return res;
  }
  if (budget < dlo - 1e-12)
    throw ArgumentError("cond_rd: budget below the minimum achievable distortion");

  Eval hard = evaluate(pr, kInf, o);
  if (budget <= dlo + 1e-12) {
    if (!hard.best.converged)
      throw ConvergenceError("cond_rd: no convergence at minimum distortion",
                             hard.best.info / kLn2);
    res.value = hard.best.info / kLn2;
    res.kernel_rate = res.value;
    res.distortion = hard.best.distortion;
    res.multiplier = kInf;
    res.kernel = to_kernel(pr, hard.best.w, out_label);
    return res;
  }

  std::vector<Eval> evals;
  auto gain = [&](const Eval& e) { return e.best.upper - e.beta * budget; };
  const int m = o.multipliers;
  evals.resize(m);
  parallel_for(static_cast<std::size_t>(m), [&](std::size_t k) {
    double t = static_cast<double>(k) / (m - 1);
    double beta = o.beta_min * std::pow(o.beta_max / o.beta_min, t);
    evals[k] = evaluate(pr, beta, o);
  });
  int kbest = -1;
  double gbest = 0.0;  // beta = 0 gives zero
  for (int k = 0; k < m; ++k) {
    double g = gain(evals[k]);
    if (g > gbest) {
      gbest = g;
      kbest = k;
    }
  }

  // The dual gain is concave in beta; golden-section on the bracketing cell.
  double lo = kbest <= 0 ? 0.0 : evals[kbest - 1].beta;
  double hi = kbest < 0 ? evals[0].beta
                        : (kbest + 1 < m ? evals[kbest + 1].beta : o.beta_max);
  const double phi = 0.61803398874989484820;
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  const std::vector<double>* seed_q = kbest >= 0 ? &evals[kbest].best.q : nullptr;
  Eval ea = evaluate(pr, a, o, seed_q), eb = evaluate(pr, b, o, seed_q);
  for (int s = 0; s < o.refine_steps; ++s) {
    if (gain(ea) >= gain(eb)) {
      hi = b;
      b = a;
      evals.push_back(std::move(eb));
      eb = std::move(ea);
      a = hi - phi * (hi - lo);
      ea = evaluate(pr, a, o, &eb.best.q);
    } else {
      lo = a;
      a = b;
      evals.push_back(std::move(ea));
      ea = std::move(eb);
      b = lo + phi * (hi - lo);
      eb = evaluate(pr, b, o, &ea.best.q);
    }
  }
  // An unconverged run overstates F, so only converged runs may set the value.
  if (!ea.best.converged && !eb.best.converged)
    throw ConvergenceError("cond_rd: iteration cap reached at the optimal slope",
                           std::max(0.0, std::max(gain(ea), gain(eb))) / kLn2);
  evals.push_back(std::move(ea));
  evals.push_back(std::move(eb));
  evals.push_back(std::move(hard));

  const Eval* top = nullptr;
  for (const auto& e : evals) {
    if (std::isinf(e.beta) || !e.best.converged) continue;
    if (top == nullptr || gain(e) > gbest) {
      top = &e;
      gbest = gain(e);
    }
  }
  res.value = std::max(0.0, gbest) / kLn2;
  res.multiplier = top ? top->beta : 0.0;

  // Witness kernel: mix the two evaluated kernels whose distortions bracket the
  // budget so the mixture meets it exactly.
  const Eval* under = nullptr;
  const Eval* over = nullptr;
  for (const auto& e : evals) {
    double dv = e.best.distortion;
    if (dv <= budget) {
      if (!under || dv > under->best.distortion ||
          (dv == under->best.distortion && e.best.info < under->best.info))
        under = &e;
    } else if (!over || dv < over->best.distortion) {
      over = &e;
    }
  }
  std::vector<double> w = under->best.w;
  if (over != nullptr) {
    double du = under->best.distortion, dov = over->best.distortion;
    double lam = (dov - budget) / (dov - du);
    for (std::size_t i = 0; i < w.size(); ++i)
      w[i] = lam * under->best.w[i] + (1.0 - lam) * over->best.w[i];
  }
  res.kernel = to_kernel(pr, w, out_label);
  res.kernel_rate = kernel_info(pr, w) / kLn2;
  res.distortion = kernel_distortion(pr, w);
  return res;
}

double conditional_rd(const JointPmf& source, const DistortionMeasure& d,
                      double budget, const CondRdOptions& opts) {
  return solve_conditional_rd(source, {"S0"}, {"S1"}, "S1", d, budget, "S1hat",
                              opts)
      .value;
}

double dsbs_cond_rd(double p, double budget) {
  if (!(p >= 0.0 && p <= 0.5))
    throw ArgumentError("dsbs_cond_rd: p outside [0, 1/2]");
  if (!(budget >= 0.0)) throw ArgumentError("dsbs_cond_rd: negative budget");
  return std::max(0.0, binary_entropy(p) - binary_entropy(std::min(budget, 0.5)));
}

}  // namespace srdt
