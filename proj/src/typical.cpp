#include "srdt/typical.hpp"

#include <cmath>
#include <string>

#include "srdt/errors.hpp"

namespace srdt {

void TypicalityParams::validate() const {
  if (n < 1) throw ArgumentError("blocklength must be >= 1");
  if (!(delta >= 0.0)) throw ArgumentError("typicality tolerance must be >= 0");
}

TypicalityParams TypicalityParams::with_default_delta(int n) {
  TypicalityParams p{n, n > 0 ? 1.0 / std::sqrt(static_cast<double>(n)) : 1.0};
  p.validate();
  return p;
}

bool is_jointly_typical(const std::vector<const Seq*>& components,
                        const JointPmf& pmf, double delta) {
  if (components.size() != pmf.rank())
    throw ArgumentError("typicality: component count does not match pmf");
  const std::size_t n = components.empty() ? 0 : components[0]->size();
  const auto& sizes = pmf.sizes();
  std::vector<int> counts(pmf.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t flat = 0;
    for (std::size_t c = 0; c < components.size(); ++c) {
      int s = (*components[c])[i];
      if (s >= sizes[c]) throw ArgumentError("typicality: symbol outside alphabet");
      flat = flat * sizes[c] + s;
    }
    if (pmf.probs()[flat] == 0.0) return false;
    ++counts[flat];
  }
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t a = 0; a < counts.size(); ++a)
    if (std::abs(counts[a] * inv - pmf.probs()[a]) > delta + 1e-12) return false;
  return true;
}

bool is_typical(const Seq& seq, const JointPmf& pmf, const TypicalityParams& params) {
  params.validate();
  if (seq.size() != static_cast<std::size_t>(params.n))
    throw ArgumentError("typicality: sequence length differs from n");
  const std::size_t m = pmf.size();
  std::vector<int> counts(m, 0);
  for (auto s : seq) {
    if (s >= m) throw ArgumentError("typicality: symbol outside alphabet");
    if (pmf.probs()[s] == 0.0) return false;
    ++counts[s];
  }
  for (std::size_t a = 0; a < m; ++a)
    if (std::abs(counts[a] / static_cast<double>(params.n) - pmf.probs()[a]) >
        params.delta + 1e-12)
      return false;
  return true;
}

std::uint64_t checked_power(int base, int n, std::uint64_t cap) {
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= static_cast<std::uint64_t>(base);
    if (total > cap)
      throw CapacityError("enumeration of " + std::to_string(base) + "^" +
                          std::to_string(n) + " sequences exceeds the cap");
  }
  return total;
}

std::vector<Seq> typical_set(const JointPmf& pmf, const TypicalityParams& params,
                             std::uint64_t cap) {
  params.validate();
  const int base = static_cast<int>(pmf.size());
  const std::uint64_t total = checked_power(base, params.n, cap);
  std::vector<Seq> out;
  for (std::uint64_t c = 0; c < total; ++c) {
    Seq s = seq_from_code(c, base, params.n);
    if (is_typical(s, pmf, params)) out.push_back(std::move(s));
  }
  return out;
}

std::uint64_t seq_code(const Seq& s, int base) {
  std::uint64_t code = 0;
  for (std::size_t i = s.size(); i-- > 0;) code = code * base + s[i];
  return code;
}

Seq seq_from_code(std::uint64_t code, int base, int n) {
  Seq s(n);
  for (int i = 0; i < n; ++i) {
    s[i] = static_cast<std::uint8_t>(code % base);
    code /= base;
  }
  return s;
}

}  // namespace srdt
