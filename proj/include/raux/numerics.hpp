#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace raux {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kEps = 2.220446049250313e-16;

// Neumaier's variant of Kahan summation. Used by every series in the library;
// the compensation term keeps oscillatory sums with O(1e6) terms within a few
// ulps of the exact rounding of the true sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    abs_ += std::abs(x);
  }
  double value() const { return sum_ + comp_; }
  // Sum of |terms|; the natural scale for a roundoff estimate.
  double abs_total() const { return abs_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }
  double abs_total() const { return std::hypot(re_.abs_total(), im_.abs_total()); }

 private:
  CompensatedSum re_, im_;
};

// A complex number stored as mantissa * exp(log_scale). Used wherever the
// magnitude of R(s) or of the Gamma factor can leave double range.
struct ScaledComplex {
  cplx mantissa{0.0, 0.0};
  double log_scale = 0.0;

  double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
  double arg() const { return std::arg(mantissa); }
  cplx value() const { return mantissa * std::exp(log_scale); }
};

}  // namespace raux
