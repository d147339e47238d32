#pragma once

#include <cstdint>
#include <vector>

#include "srdt/prob.hpp"

namespace srdt {

using Seq = std::vector<std::uint8_t>;

// Largest |alphabet|^n any enumeration may touch.
inline constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 22;

struct TypicalityParams {
  int n = 1;
  double delta = 1.0;

  void validate() const;
  static TypicalityParams with_default_delta(int n);  // delta = 1/sqrt(n)
};

// Robust strong typicality with absolute tolerance: every joint symbol a has
// |N(a)/n - P(a)| <= delta, and N(a) = 0 whenever P(a) = 0. `components`
// holds one sequence per label of `pmf`, in label order.
bool is_jointly_typical(const std::vector<const Seq*>& components,
                        const JointPmf& pmf, double delta);
bool is_typical(const Seq& seq, const JointPmf& pmf, const TypicalityParams& params);

// Sequences over the (single- or multi-label) alphabet of `pmf`, as flat
// joint symbols. Throws CapacityError above the cap.
std::vector<Seq> typical_set(const JointPmf& pmf, const TypicalityParams& params,
                             std::uint64_t cap = kEnumerationCap);

// Base-`base` code of a sequence (first symbol least significant) and back.
std::uint64_t seq_code(const Seq& s, int base);
Seq seq_from_code(std::uint64_t code, int base, int n);

// |base|^n, or CapacityError when it exceeds `cap`.
std::uint64_t checked_power(int base, int n, std::uint64_t cap = kEnumerationCap);

}  // namespace srdt
