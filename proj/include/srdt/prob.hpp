#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace srdt {

using LabelSet = std::vector<std::string>;

// Probability tensor over a finite product alphabet, flat in row-major order
// (last label varies fastest).
class JointPmf {
 public:
  JointPmf() = default;
  JointPmf(LabelSet labels, std::vector<int> sizes, std::vector<double> probs);

  const LabelSet& labels() const { return labels_; }
  const std::vector<int>& sizes() const { return sizes_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t rank() const { return labels_.size(); }
  std::size_t size() const { return probs_.size(); }

  bool has(const std::string& label) const;
  std::size_t index_of(const std::string& label) const;
  int alphabet(const std::string& label) const { return sizes_[index_of(label)]; }

  double at(const std::vector<int>& symbols) const;
  std::size_t flat(const std::vector<int>& symbols) const;
  std::vector<int> unflat(std::size_t index) const;

  // Marginal over `keep`, in the order given.
  JointPmf marginal(const LabelSet& keep) const;

 private:
  LabelSet labels_;
  std::vector<int> sizes_;
  std::vector<double> probs_;
};

// Conditional law of `outputs` given `inputs`. rows[i] is the distribution of
// the flat output symbol given flat input symbol i.
struct ChannelKernel {
  LabelSet inputs;
  std::vector<int> input_sizes;
  LabelSet outputs;
  std::vector<int> output_sizes;
  std::vector<std::vector<double>> rows;

  ChannelKernel() = default;
  ChannelKernel(LabelSet in, std::vector<int> in_sizes, LabelSet out,
                std::vector<int> out_sizes, std::vector<std::vector<double>> r);

  std::size_t input_count() const;
  std::size_t output_count() const;

  // Kernel putting all mass on f(inputs).
  static ChannelKernel deterministic(
      LabelSet in, std::vector<int> in_sizes, LabelSet out,
      std::vector<int> out_sizes,
      const std::function<std::vector<int>(const std::vector<int>&)>& f);
};

double binary_entropy(double alpha);

double entropy(const JointPmf& pmf, const LabelSet& over,
               const LabelSet& given = {});

double mutual_information(const JointPmf& pmf, const LabelSet& a,
                          const LabelSet& b, const LabelSet& given = {});

JointPmf make_dsbs(double p);
JointPmf make_gw_b_source(double p);

JointPmf extend_joint(const JointPmf& base, const ChannelKernel& kernel);

// Mixed-radix helpers shared by the other modules.
std::size_t mixed_flat(const std::vector<int>& symbols,
                       const std::vector<int>& sizes);
std::vector<int> mixed_unflat(std::size_t index, const std::vector<int>& sizes);
std::size_t product(const std::vector<int>& sizes);

}  // namespace srdt
