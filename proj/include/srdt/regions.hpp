#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srdt/cond_rd.hpp"
#include "srdt/prob.hpp"

namespace srdt {

enum class Model { HELPER_A, HELPER_B, GW_A, GW_B };

std::string model_name(Model m);
Model parse_model(const std::string& name);
bool is_gw(Model m);

struct RateTuple {
  Model model = Model::HELPER_A;
  double R = 0.0;
  double R1 = 0.0;
  std::optional<double> R2;
  double D1 = 0.0;
  std::optional<double> D2;
  double delta = 0.0;

  void validate() const;
};

// Evaluated right-hand sides of a region for one choice of test channels.
//   HELPER_A: r_min = I(U;S0S1), r1_min = I(S1hat;S0S1|U), delta_max = H(S0S1|U)
//   HELPER_B: constants a = I(S1hat;S1|S0), b = H(S0); corner (0, a+b, b)
//   GW_A:     r_min = I(U;S1S2), rj_min = I(Sjhat;S1S2|U), delta_max = H(S1S2|U)
//   GW_B:     constants h = H(S0), a = I(U;S1S2|S0), cj = I(Sjhat;S1S2|U S0);
//             full-secrecy corner (a, h+c1, h+c2, h)
struct AchievablePoint {
  Model model = Model::HELPER_A;
  double r_min = 0.0;
  double r1_min = 0.0;
  std::optional<double> r2_min;
  double delta_max = 0.0;
  double d1_achieved = 0.0;
  std::optional<double> d2_achieved;
  std::vector<ChannelKernel> witness;
  std::map<std::string, double> constants;

  // For HELPER_B and GW_B the test is membership in the polyhedron the
  // constants define; for the other models it is componentwise.
  bool dominates(const RateTuple& t, double tol = 1e-9) const;
  // Sum of constraint violations at t (0 when dominated).
  double violation(const RateTuple& t) const;
};

// Source labels: HELPER_*: S0,S1; GW_A: S1,S2; GW_B: S0,S1,S2. The kernels
// are applied in order and must add U (except HELPER_B), S1hat and, for GW
// models, S2hat. d[j] scores (Sj+1, Sj+1hat).
AchievablePoint achievable_point(Model model, const JointPmf& source,
                                 const std::vector<ChannelKernel>& aux,
                                 const std::vector<DistortionMeasure>& d);

struct SearchConfig {
  int u_cardinality = 0;  // 0: |joint source alphabet| + 3
  int restarts = 6;
  int iterations = 250;
  std::uint64_t seed = 1;
  CondRdOptions rd = {24, 500, 1e-10, 1e-3, 1e3, 30, {11}};
};

struct SearchWitness {
  std::vector<ChannelKernel> kernels;
  AchievablePoint point;
  std::string origin;  // which start produced it
  int evaluations = 0;
};

// Inner search over auxiliary kernels. A returned witness has been
// re-verified by achievable_point; absence proves nothing.
std::optional<SearchWitness> membership_search(
    Model model, const JointPmf& source, const std::vector<DistortionMeasure>& d,
    const RateTuple& target, const SearchConfig& config = {});

// Closed forms.
bool helper_a_lossless(const JointPmf& source, double R, double R1, double delta);
// Time-sharing auxiliary realizing a lossless target when one exists:
// T ~ Bern(theta) picks U = S1 or U = constant, with Ŝ1 = S1.
std::vector<ChannelKernel> helper_a_lossless_construction(const JointPmf& source,
                                                          double R1);

bool helper_b_region(const JointPmf& source, const DistortionMeasure& d,
                     const RateTuple& target, bool with_secrecy = true);
bool helper_b_dsbs(double p, const RateTuple& target, bool with_secrecy);
double helper_b_dsbs_sum_rate(double p, double D1);

JointPmf make_gw_a_source(double p);  // DSBS(p) labelled S1, S2

struct GwAPoint {
  std::string name;
  double R = 0.0, R1 = 0.0, R2 = 0.0, delta = 0.0;
  // The closed-form equivocation is attained exactly (F~, G~) or is only a
  // lower bound on H(S1S2|U) for the construction (A, B, F, G).
  bool delta_exact = false;
  std::vector<ChannelKernel> construction;
};

double gw_a_p1(double p);
std::vector<GwAPoint> gw_a_binary_points(double p);
bool gw_a_pangloss(double p, double R, double R1);

struct GwAPointCheck {
  double rate_error = 0.0;   // max |closed form - evaluation| over R, R1, R2
  double delta_error = 0.0;  // |delta - delta_max| when exact, else shortfall
  bool ok = false;
};
GwAPointCheck check_gw_a_point(double p, const GwAPoint& pt, double tol = 1e-9);

// Symmetric-rate binary GW-B closed forms; corners are (R1, R).
bool gw_b_binary(double p, double R, double R1, double R2, bool with_secrecy);
double gw_b_slack(double p, double R, double R1, bool with_secrecy);
struct GwBCorner {
  std::string name;
  double R1 = 0.0, R = 0.0;
  bool secrecy = true;
  std::vector<ChannelKernel> construction;  // (U, S1hat, S2hat)
};
std::vector<GwBCorner> gw_b_corners(double p);

}  // namespace srdt
