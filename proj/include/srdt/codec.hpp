#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "srdt/cond_rd.hpp"
#include "srdt/prob.hpp"
#include "srdt/typical.hpp"

namespace srdt {

enum class Scheme { HELPER_A, HELPER_B, HELPER_B_OTP, GW_A, GW_B };

std::string scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

// Rate keys a scheme needs, in a fixed order.
//   HELPER_A: w, w1            HELPER_B: w00, w01, w10, w11
//   HELPER_B_OTP: wt0, wt1, w00, w01, w10, w11
//   GW_A: w, w1, w2            GW_B: w0, wb0, w, w1, w2
const std::vector<std::string>& rate_names(Scheme s);

// Transmitted indices, in message order, and which are public.
//   HELPER_A: w | w1           HELPER_B: w00 w01 | w10 w11
//   HELPER_B_OTP: c0 w00 w01 | wt1 w10 w11   (c0 = wt0 xor wt1)
//   GW_A: w | w1 w2            GW_B: wb0 w | w0 w1 w2
const std::vector<std::string>& message_names(Scheme s);
std::size_t public_count(Scheme s);  // public fields come first

LabelSet scheme_source_labels(Scheme s);
LabelSet secret_labels(Scheme s);

// Index width in bits: ceil(log2(range)), 0 for range 1.
int index_width(std::uint64_t range);
// Exact I(plain xor key; plain) in bits, key uniform on [0, key_range).
double otp_mutual_information(const std::vector<double>& plain_pmf,
                              std::uint64_t key_range);

// P(S1hat | S0, S1) for DSBS(p) meeting Hamming budget D1 at the
// conditional rate-distortion value: S1hat = S0 xor Zhat, where
// S0 xor S1 = Zhat xor N with N ~ Bern(D1) independent of Zhat.
ChannelKernel dsbs_test_channel(double p, double D1);

struct Codebook {
  Scheme scheme = Scheme::HELPER_B;
  int n = 1;
  double delta = 0.0;
  std::uint64_t seed = 0;
  JointPmf joint;  // sources, then the channel outputs
  std::map<std::string, std::uint64_t> ranges;  // per rate key
  // Typical secret-component sequence code -> bin tuple
  //   HELPER_B: (w00, w10)  HELPER_B_OTP: (wt0, w00, w10)  GW_B: (w0, wb0)
  std::map<std::uint64_t, std::vector<std::uint64_t>> bins;
  std::map<std::vector<std::uint64_t>, std::vector<std::uint64_t>> bin_members;
  // U^n banks keyed by conditioning key (0, or the s0^n code for GW_B).
  std::map<std::uint64_t, std::vector<Seq>> u_banks;
  // Sj-hat banks: key is the s0^n code (HELPER_B*), w (HELPER_A, GW_A) or
  // s0code * range(w) + w (GW_B).
  std::vector<std::map<std::uint64_t, std::vector<Seq>>> hat_banks;

  std::uint64_t range(const std::string& key) const { return ranges.at(key); }
  std::vector<std::uint64_t> message_ranges() const;  // error index = range

  bool operator==(const Codebook& o) const;
};

Codebook build_code(Scheme scheme, const JointPmf& source,
                    const std::vector<ChannelKernel>& channel,
                    const std::map<std::string, double>& rates,
                    const TypicalityParams& params, std::uint64_t seed);

using Message = std::vector<std::uint64_t>;

struct MessageBranch {
  double probability = 0.0;
  Message message;
};

// Law of the message for fixed sources, over the encoder's uniform choice
// among jointly typical candidates. With public_only, private fields that
// do not affect the public part are left at 0.
std::vector<MessageBranch> message_distribution(const Codebook& cb,
                                                const std::vector<Seq>& sources,
                                                bool public_only = false);

// `sources` holds one sequence per source label.
Message encode(const Codebook& cb, const std::vector<Seq>& sources,
               std::mt19937_64& rng);

struct Decoded {
  bool failed = false;
  bool ambiguous = false;     // more than one typical sequence in the bin
  std::optional<Seq> s0;      // lossless reconstruction (bin schemes)
  std::vector<Seq> hats;      // S1hat[, S2hat]
};

Decoded decode(const Codebook& cb, const Message& m);

// H(secret^n | public message) / n, exact over `source` and encoder choice.
double exact_equivocation(const Codebook& cb, const JointPmf& source);

struct ExperimentConfig {
  Scheme scheme = Scheme::HELPER_B;
  JointPmf source;
  std::vector<ChannelKernel> channel;
  std::vector<DistortionMeasure> distortion;  // empty: Hamming
  std::map<std::string, double> rates;
  TypicalityParams params;
  int trials = 0;
  std::uint64_t seed = 0;
};

struct SimReport {
  int trials = 0;
  double encode_success_rate = 0.0;
  double d1_mean = 0.0;
  std::optional<double> d2_mean;
  double s0_error_rate = 0.0;  // decoder-failure fraction
  double equivocation_per_symbol = 0.0;
  double secret_entropy = 0.0;  // H(secret) per symbol
  std::map<std::string, double> rates_used;
  int decode_failures = 0;
  int ambiguous = 0;
  int lossless_violations = 0;  // decoded s0 != s0 with no failure flagged

  bool operator==(const SimReport&) const = default;
};

SimReport run_experiment(const ExperimentConfig& config);

}  // namespace srdt
