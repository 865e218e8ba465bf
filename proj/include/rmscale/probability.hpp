#pragma once

#include <stdexcept>

namespace rmscale {

// A probability value, validated once at construction so downstream code can
// assume 0 <= value <= 1 without re-checking.
class Probability {
 public:
  explicit Probability(double v) : v_(v) {
    if (!(v >= 0.0 && v <= 1.0))
      throw std::domain_error("probability outside [0, 1]");
  }

  double value() const { return v_; }
  operator double() const { return v_; }

 private:
  double v_;
};

}  // namespace rmscale
