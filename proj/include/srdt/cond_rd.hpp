#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srdt/prob.hpp"

namespace srdt {

// table[s][r]: cost of reconstructing source symbol s as r.
struct DistortionMeasure {
  std::vector<std::vector<double>> table;

  DistortionMeasure() = default;
  explicit DistortionMeasure(std::vector<std::vector<double>> t);
  static DistortionMeasure hamming(int n);

  int source_size() const { return static_cast<int>(table.size()); }
  int recon_size() const {
    return table.empty() ? 0 : static_cast<int>(table[0].size());
  }
  double operator()(int s, int r) const { return table[s][r]; }
};

struct CondRdOptions {
  int multipliers = 64;
  int max_iterations = 500;
  double tolerance = 1e-10;
  double beta_min = 1e-3;
  double beta_max = 1e3;
  int refine_steps = 60;
  std::vector<std::uint64_t> restart_seeds = {11, 23, 37};
};

struct CondRdResult {
  double value = 0.0;        // bits
  double kernel_rate = 0.0;  // conditional information of `kernel`, bits
  double distortion = 0.0;   // expected distortion of `kernel`
  double multiplier = 0.0;   // Lagrange slope in nats; infinite at Dmin
  ChannelKernel kernel;      // P(out | side..., source...)
};

// min I(out; source | side) over P(out | side, source) subject to
// E d(target, out) <= budget. `target` is one label of side or source.
CondRdResult solve_conditional_rd(const JointPmf& joint, const LabelSet& side,
                                  const LabelSet& source,
                                  const std::string& target,
                                  const DistortionMeasure& d, double budget,
                                  const std::string& out_label,
                                  const CondRdOptions& opts = {});

// Smallest and largest useful budgets for the problem above.
double min_expected_distortion(const JointPmf& joint, const LabelSet& side,
                               const LabelSet& source,
                               const std::string& target,
                               const DistortionMeasure& d);
double slack_distortion(const JointPmf& joint, const LabelSet& side,
                        const LabelSet& source, const std::string& target,
                        const DistortionMeasure& d);

// min I(S1hat; S1 | S0) for a pmf over (S0, S1).
double conditional_rd(const JointPmf& source, const DistortionMeasure& d,
                      double budget, const CondRdOptions& opts = {});

// [h2(p) - h2(min(budget, 1/2))]^+
double dsbs_cond_rd(double p, double budget);

}  // namespace srdt
