#include "srdt/prob.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "srdt/errors.hpp"

namespace srdt {

namespace {

constexpr double kMassTol = 1e-12;

void check_unique(const LabelSet& labels, const char* what) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second)
      throw ArgumentError(std::string(what) + ": duplicate label " + l);
  }
}

double plogp_sum(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

LabelSet set_union(const LabelSet& a, const LabelSet& b) {
  LabelSet out = a;
  for (const auto& l : b)
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  return out;
}

void check_disjoint(const LabelSet& a, const LabelSet& b) {
  for (const auto& l : a)
    if (std::find(b.begin(), b.end(), l) != b.end())
      throw ArgumentError("label sets overlap on " + l);
}

}  // namespace

std::size_t product(const std::vector<int>& sizes) {
  std::size_t n = 1;
  for (int s : sizes) n *= static_cast<std::size_t>(s);
  return n;
}

std::size_t mixed_flat(const std::vector<int>& symbols,
                       const std::vector<int>& sizes) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    idx = idx * static_cast<std::size_t>(sizes[i]) +
          static_cast<std::size_t>(symbols[i]);
  return idx;
}

std::vector<int> mixed_unflat(std::size_t index, const std::vector<int>& sizes) {
  std::vector<int> out(sizes.size());
  for (std::size_t i = sizes.size(); i-- > 0;) {
    out[i] = static_cast<int>(index % static_cast<std::size_t>(sizes[i]));
    index /= static_cast<std::size_t>(sizes[i]);
  }
  return out;
}

// ---------------------------------------------------------------- JointPmf

JointPmf::JointPmf(LabelSet labels, std::vector<int> sizes,
                   std::vector<double> probs)
    : labels_(std::move(labels)),
      sizes_(std::move(sizes)),
      probs_(std::move(probs)) {
  if (labels_.size() != sizes_.size())
    throw ArgumentError("pmf: label count does not match alphabet count");
  check_unique(labels_, "pmf");
  for (int s : sizes_)
    if (s < 1) throw ArgumentError("pmf: alphabet sizes must be positive");
  if (probs_.size() != product(sizes_))
    throw ArgumentError("pmf: tensor length does not match alphabet sizes");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ArgumentError("pmf: negative or non-finite entry");
    total += p;
  }
  if (std::abs(total - 1.0) > kMassTol)
    throw ArgumentError("pmf: mass does not sum to 1");
}

bool JointPmf::has(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t JointPmf::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw LabelError("unknown label " + label);
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t JointPmf::flat(const std::vector<int>& symbols) const {
  if (symbols.size() != sizes_.size())
    throw ArgumentError("pmf: wrong number of symbols");
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i] < 0 || symbols[i] >= sizes_[i])
      throw ArgumentError("pmf: symbol out of range");
  return mixed_flat(symbols, sizes_);
}

std::vector<int> JointPmf::unflat(std::size_t index) const {
  return mixed_unflat(index, sizes_);
}

double JointPmf::at(const std::vector<int>& symbols) const {
  return probs_[flat(symbols)];
}

JointPmf JointPmf::marginal(const LabelSet& keep) const {
  check_unique(keep, "marginal");
  std::vector<std::size_t> pos;
  std::vector<int> out_sizes;
  for (const auto& l : keep) {
    pos.push_back(index_of(l));
    out_sizes.push_back(sizes_[pos.back()]);
  }
  std::vector<double> out(product(out_sizes), 0.0);
  std::vector<int> sym(sizes_.size(), 0);
  std::vector<int> sub(keep.size());
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    for (std::size_t k = 0; k < pos.size(); ++k) sub[k] = sym[pos[k]];
    out[mixed_flat(sub, out_sizes)] += probs_[i];
    for (std::size_t d = sizes_.size(); d-- > 0;) {
      if (++sym[d] < sizes_[d]) break;
      sym[d] = 0;
    }
  }
  // Summation error can push the total a hair off 1; renormalize.
  double total = 0.0;
  for (double p : out) total += p;
  for (double& p : out) p /= total;
  return JointPmf(keep, out_sizes, std::move(out));
}

// ----------------------------------------------------------- ChannelKernel

ChannelKernel::ChannelKernel(LabelSet in, std::vector<int> in_sizes,
                             LabelSet out, std::vector<int> out_sizes,
                             std::vector<std::vector<double>> r)
    : inputs(std::move(in)),
      input_sizes(std::move(in_sizes)),
      outputs(std::move(out)),
      output_sizes(std::move(out_sizes)),
      rows(std::move(r)) {
  if (inputs.size() != input_sizes.size() ||
      outputs.size() != output_sizes.size())
    throw ArgumentError("kernel: label/alphabet count mismatch");
  if (outputs.empty()) throw ArgumentError("kernel: no output labels");
  check_unique(set_union(inputs, {}), "kernel inputs");
  check_unique(outputs, "kernel outputs");
  check_disjoint(inputs, outputs);
  if (rows.size() != input_count())
    throw ArgumentError("kernel: row count does not match input alphabet");
  for (const auto& row : rows) {
    if (row.size() != output_count())
      throw ArgumentError("kernel: row length does not match output alphabet");
    double total = 0.0;
    for (double p : row) {
      if (!(p >= 0.0) || !std::isfinite(p))
        throw ArgumentError("kernel: negative or non-finite entry");
      total += p;
    }
    if (std::abs(total - 1.0) > kMassTol)
      throw ArgumentError("kernel: row does not sum to 1");
  }
}

std::size_t ChannelKernel::input_count() const { return product(input_sizes); }
std::size_t ChannelKernel::output_count() const {
  return product(output_sizes);
}

ChannelKernel ChannelKernel::deterministic(
    LabelSet in, std::vector<int> in_sizes, LabelSet out,
    std::vector<int> out_sizes,
    const std::function<std::vector<int>(const std::vector<int>&)>& f) {
  std::size_t n_in = product(in_sizes);
  std::size_t n_out = product(out_sizes);
  std::vector<std::vector<double>> rows(n_in, std::vector<double>(n_out, 0.0));
  for (std::size_t i = 0; i < n_in; ++i) {
    auto y = f(mixed_unflat(i, in_sizes));
    for (std::size_t k = 0; k < y.size(); ++k)
      if (y[k] < 0 || y[k] >= out_sizes[k])
        throw ArgumentError("kernel: deterministic map out of range");
    rows[i][mixed_flat(y, out_sizes)] = 1.0;
  }
  return ChannelKernel(std::move(in), std::move(in_sizes), std::move(out),
                       std::move(out_sizes), std::move(rows));
}

// ------------------------------------------------------------ information

double binary_entropy(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ArgumentError("binary_entropy: argument outside [0,1]");
  return plogp_sum({alpha, 1.0 - alpha});
}

double entropy(const JointPmf& pmf, const LabelSet& over,
               const LabelSet& given) {
  if (over.empty()) throw ArgumentError("entropy: empty label set");
  for (const auto& l : over) pmf.index_of(l);
  for (const auto& l : given) pmf.index_of(l);
  // H(A | A, ...) = 0; partial overlaps are rejected.
  if (std::all_of(over.begin(), over.end(), [&](const std::string& l) {
        return std::find(given.begin(), given.end(), l) != given.end();
      }))
    return 0.0;
  check_disjoint(over, given);
  check_unique(over, "entropy");
  check_unique(given, "entropy");
  double h_joint = plogp_sum(pmf.marginal(set_union(given, over)).probs());
  double h_given = given.empty() ? 0.0 : plogp_sum(pmf.marginal(given).probs());
  return std::max(0.0, h_joint - h_given);
}

double mutual_information(const JointPmf& pmf, const LabelSet& a,
                          const LabelSet& b, const LabelSet& given) {
  if (a.empty() || b.empty())
    throw ArgumentError("mutual_information: empty label set");
  check_disjoint(a, b);
  check_disjoint(a, given);
  check_disjoint(b, given);
  double mi = entropy(pmf, a, given) - entropy(pmf, a, set_union(b, given));
  return mi < 0.0 ? 0.0 : mi;
}

// ---------------------------------------------------------------- sources

JointPmf make_dsbs(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ArgumentError("make_dsbs: p outside [0,1]");
  double same = (1.0 - p) / 2.0;
  double diff = p / 2.0;
  return JointPmf({"S0", "S1"}, {2, 2}, {same, diff, diff, same});
}

JointPmf make_gw_b_source(double p) {
  JointPmf pair = make_dsbs(p);
  std::vector<double> probs(8);
  for (int s0 = 0; s0 < 2; ++s0)
    for (int s1 = 0; s1 < 2; ++s1)
      for (int s2 = 0; s2 < 2; ++s2)
        probs[(s0 * 2 + s1) * 2 + s2] =
            pair.at({s0, s1}) * (s2 == s0 ? 1.0 - p : p);
  return JointPmf({"S0", "S1", "S2"}, {2, 2, 2}, std::move(probs));
}

JointPmf extend_joint(const JointPmf& base, const ChannelKernel& kernel) {
  std::vector<std::size_t> in_pos;
  for (std::size_t i = 0; i < kernel.inputs.size(); ++i) {
    const auto& l = kernel.inputs[i];
    if (!base.has(l)) throw ArgumentError("extend_joint: unknown input " + l);
    in_pos.push_back(base.index_of(l));
    if (base.sizes()[in_pos.back()] != kernel.input_sizes[i])
      throw ArgumentError("extend_joint: alphabet mismatch on " + l);
  }
  for (const auto& l : kernel.outputs)
    if (base.has(l))
      throw ArgumentError("extend_joint: output label already present: " + l);

  LabelSet labels = base.labels();
  labels.insert(labels.end(), kernel.outputs.begin(), kernel.outputs.end());
  std::vector<int> sizes = base.sizes();
  sizes.insert(sizes.end(), kernel.output_sizes.begin(),
               kernel.output_sizes.end());

  std::size_t n_out = kernel.output_count();
  std::vector<double> probs(base.size() * n_out, 0.0);
  std::vector<int> in_sym(in_pos.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    auto sym = base.unflat(i);
    for (std::size_t k = 0; k < in_pos.size(); ++k) in_sym[k] = sym[in_pos[k]];
    const auto& row = kernel.rows[mixed_flat(in_sym, kernel.input_sizes)];
    for (std::size_t o = 0; o < n_out; ++o)
      probs[i * n_out + o] = base.probs()[i] * row[o];
  }
  return JointPmf(std::move(labels), std::move(sizes), std::move(probs));
}

}  // namespace srdt
