#pragma once

#include <stdexcept>
#include <string>

namespace lcf {

inline constexpr const char* kVersion = "0.1.0";

// Error taxonomy used across the library. The CLI maps these onto exit
// codes: ConfigError -> 2, NumericError -> 3, IoError -> 4.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative solver failed to reach its tolerance.
class SolverError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Kahan compensated accumulator. Surface integrals sum many terms of
// wildly different magnitude; the compensation keeps the reduction
// deterministic to the last bit for a fixed summation order.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace lcf
