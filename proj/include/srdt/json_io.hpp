#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "srdt/codec.hpp"
#include "srdt/prob.hpp"

namespace srdt {

using nlohmann::json;

// {"labels": [...], "alphabet_sizes": [...], "probs": [...]}
json pmf_to_json(const JointPmf& p);
JointPmf pmf_from_json(const json& j);

// Inline pmf, or {"dsbs": p}, {"gw_a": p}, {"gw_b": p}.
JointPmf source_from_json(const json& j);

// {"inputs", "input_sizes", "outputs", "output_sizes", "rows"}
json kernel_to_json(const ChannelKernel& k);
ChannelKernel kernel_from_json(const json& j);

// Experiment config as written by the user. Source and channel are kept in
// their original form so that emitting and re-reading is lossless.
struct ExperimentSpec {
  Scheme scheme = Scheme::HELPER_B;
  json source;
  json channel;  // kernel, list of kernels, or {"kind": "dsbs_cond_rd", "D1": x}
  std::map<std::string, double> rates;
  int n = 1;
  std::optional<double> delta;  // absent: 1/sqrt(n)
  int trials = 0;
  std::uint64_t seed = 0;

  bool operator==(const ExperimentSpec&) const = default;
};

ExperimentSpec experiment_from_json(const json& j);
json experiment_to_json(const ExperimentSpec& s);
ExperimentConfig resolve(const ExperimentSpec& s);

json report_to_json(const SimReport& r);
std::string report_csv_header();
std::string report_csv_row(const SimReport& r);

// '.' decimal, 9 significant digits.
std::string format_number(double x);

}  // namespace srdt
