#pragma once

#include <stdexcept>
#include <string>

namespace srdt {

struct LabelError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when an iterative solver hits its iteration cap.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double best)
      : std::runtime_error(what), best_value(best) {}
  double best_value;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace srdt
