#include "srdt/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <locale>
#include <sstream>

#include "srdt/errors.hpp"

namespace srdt {

namespace {

template <class T>
T field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    throw ArgumentError(std::string("missing field '") + name + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception&) {
    throw ArgumentError(std::string("field '") + name + "' has the wrong type");
  }
}

}  // namespace

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(9);
  os << x;
  return os.str();
}

json pmf_to_json(const JointPmf& p) {
  return {{"labels", p.labels()}, {"alphabet_sizes", p.sizes()}, {"probs", p.probs()}};
}

// Mass within 1e-9 of one is accepted and renormalized.
JointPmf pmf_from_json(const json& j) {
  auto probs = field<std::vector<double>>(j, "probs");
  double z = 0.0;
  for (double x : probs) z += x;
  if (!(std::abs(z - 1.0) <= 1e-9))
    throw ArgumentError("pmf mass " + format_number(z) + " is not 1 within 1e-9");
  for (auto& x : probs) x /= z;
  return JointPmf(field<LabelSet>(j, "labels"), field<std::vector<int>>(j, "alphabet_sizes"),
                  std::move(probs));
}

JointPmf source_from_json(const json& j) {
  if (j.is_object()) {
    if (j.contains("dsbs")) return make_dsbs(field<double>(j, "dsbs"));
    if (j.contains("gw_b")) return make_gw_b_source(field<double>(j, "gw_b"));
    if (j.contains("gw_a")) {
      JointPmf d = make_dsbs(field<double>(j, "gw_a"));
      return JointPmf({"S1", "S2"}, {2, 2}, d.probs());
    }
  }
  return pmf_from_json(j);
}

json kernel_to_json(const ChannelKernel& k) {
  return {{"inputs", k.inputs},   {"input_sizes", k.input_sizes},
          {"outputs", k.outputs}, {"output_sizes", k.output_sizes},
          {"rows", k.rows}};
}

ChannelKernel kernel_from_json(const json& j) {
  return ChannelKernel(field<LabelSet>(j, "inputs"), field<std::vector<int>>(j, "input_sizes"),
                       field<LabelSet>(j, "outputs"), field<std::vector<int>>(j, "output_sizes"),
                       field<std::vector<std::vector<double>>>(j, "rows"));
}

ExperimentSpec experiment_from_json(const json& j) {
  if (!j.is_object()) throw ArgumentError("experiment config must be a JSON object");
  static const std::vector<std::string> known = {"scheme", "source", "channel", "rates",
                                                 "n", "delta", "trials", "seed"};
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw ArgumentError("unknown config field '" + k + "'");
  }
  ExperimentSpec s;
  s.scheme = parse_scheme(field<std::string>(j, "scheme"));
  s.source = j.at("source");
  if (!j.contains("channel")) throw ArgumentError("missing field 'channel'");
  s.channel = j.at("channel");
  s.rates = field<std::map<std::string, double>>(j, "rates");
  s.n = field<int>(j, "n");
  if (j.contains("delta") && !j.at("delta").is_null()) s.delta = field<double>(j, "delta");
  s.trials = j.contains("trials") ? field<int>(j, "trials") : 0;
  s.seed = j.contains("seed") ? field<std::uint64_t>(j, "seed") : 0;
  return s;
}

json experiment_to_json(const ExperimentSpec& s) {
  json j = {{"scheme", scheme_name(s.scheme)},
            {"source", s.source},
            {"channel", s.channel},
            {"rates", s.rates},
            {"n", s.n},
            {"trials", s.trials},
            {"seed", s.seed}};
  if (s.delta) j["delta"] = *s.delta;
  return j;
}

ExperimentConfig resolve(const ExperimentSpec& s) {
  ExperimentConfig c;
  c.scheme = s.scheme;
  c.source = source_from_json(s.source);
  if (s.channel.is_array()) {
    for (const auto& k : s.channel) c.channel.push_back(kernel_from_json(k));
  } else if (s.channel.is_object() && s.channel.contains("kind")) {
    if (field<std::string>(s.channel, "kind") != "dsbs_cond_rd")
      throw ArgumentError("unknown channel kind");
    if (!s.source.is_object() || !s.source.contains("dsbs"))
      throw ArgumentError("channel kind dsbs_cond_rd needs a {\"dsbs\": p} source");
    c.channel.push_back(
        dsbs_test_channel(field<double>(s.source, "dsbs"), field<double>(s.channel, "D1")));
  } else {
    c.channel.push_back(kernel_from_json(s.channel));
  }
  c.rates = s.rates;
  if (s.n < 1) throw ArgumentError("n must be >= 1");
  c.params = s.delta ? TypicalityParams{s.n, *s.delta} : TypicalityParams::with_default_delta(s.n);
  c.params.validate();
  c.trials = s.trials;
  c.seed = s.seed;
  return c;
}

json report_to_json(const SimReport& r) {
  json j = {{"trials", r.trials},
            {"encode_success_rate", r.encode_success_rate},
            {"d1_mean", r.d1_mean},
            {"s0_error_rate", r.s0_error_rate},
            {"equivocation_per_symbol", r.equivocation_per_symbol},
            {"secret_entropy", r.secret_entropy},
            {"rates_used", r.rates_used},
            {"decode_failures", r.decode_failures},
            {"ambiguous", r.ambiguous},
            {"lossless_violations", r.lossless_violations},
            {"distortion_convention", "failed trials excluded from d*_mean"}};
  if (r.d2_mean) j["d2_mean"] = *r.d2_mean;
  return j;
}

std::string report_csv_header() {
  return "trials,encode_success_rate,d1_mean,d2_mean,s0_error_rate,"
         "equivocation_per_symbol,decode_failures,ambiguous,lossless_violations";
}

std::string report_csv_row(const SimReport& r) {
  std::ostringstream os;
  os << r.trials << ',' << format_number(r.encode_success_rate) << ','
     << format_number(r.d1_mean) << ',' << (r.d2_mean ? format_number(*r.d2_mean) : "")
     << ',' << format_number(r.s0_error_rate) << ','
     << format_number(r.equivocation_per_symbol) << ',' << r.decode_failures << ','
     << r.ambiguous << ',' << r.lossless_violations;
  return os.str();
}

}  // namespace srdt
