#pragma once

// Riemann's auxiliary function
//   R(s) = sum_{n<=N} n^{-s} - int_L x^{-s} e^{pi i x^2} / (e^{pi i x} - e^{-pi i x}) dx
// where L is the line of direction e^{i pi/4} crossing the real axis in
// (N, N+1), traversed from lower left to upper right. The residues at the
// integers make the value independent of N, so N is chosen where the
// steepest-descent line through the saddle sqrt(s/2 pi i) meets the real axis.

#include <span>

#include "raux/numerics.hpp"
#include "raux/special_fn.hpp"

namespace raux {

// Band K covers t in (2 pi K^2, 2 pi (K+1)^2], on which floor(sqrt(t/2pi)) = K
// (up to the right endpoint).
struct BandIndex {
  long K = 1;
  double t_lo() const;
  double t_hi() const;
};

// Band containing t (K = 0 for t <= 2 pi, the head interval).
long band_of(double t);

struct QuadratureParams {
  int node_count = 160;            // trapezoid nodes across the truncated line
  double truncation_radius = 4.0;  // half-length around the saddle, extended as needed
  double path_anchor = 0.5;        // real-axis crossing is N + path_anchor
  void validate() const;           // throws DomainError
};

// log(n) for n = 1..count (index n-1). Cached for small counts.
std::span<const double> log_table(std::size_t count);

// sum_{n=1}^K n^{-s}; err is the calibrated remainder c K^{-sigma} plus roundoff.
EvalResult r_aux_sum(cplx s, long K);

// Contour-integral value in scaled form: R(s) = value.mantissa * exp(value.log_scale)
// with |error| <= err * exp(value.log_scale). Works far into sigma < 0 where
// R(s) leaves double range.
struct ScaledEval {
  ScaledComplex value;
  double err = 0.0;
  long N = 0;     // number of residues summed explicitly
  int nodes = 0;  // trapezoid nodes used after refinement
};

ScaledEval r_aux_integral_scaled(cplx s, const QuadratureParams& q = {});

// Unscaled convenience wrapper; throws DomainError on overflow.
EvalResult r_aux_integral(cplx s, const QuadratureParams& q = {});

// First Riemann-Siegel correction as a function of p = 1 - 2 frac(sqrt(t/2pi)).
cplx c0_term(double p);

// Band sum plus the C0 correction; requires t > 2pi.
EvalResult r_aux_corrected(cplx s);

// Dispatching evaluator: corrected sum for 0 <= sigma <= 1 and t >= 3 pi,
// contour integral elsewhere.
EvalResult r_aux(cplx s);

// Z(t) = 2 Re(e^{i theta(t)} R(1/2 + it)).
EvalResult z_eval(double t);
double z_fn(double t);

// e^{i theta(t)} R(1/2 + it) for complex t, via the contour integral.
EvalResult rotated_field(cplx t);

struct Calibration;
// Re-derive the calibration constants: 1.5x the largest observed remainder
// ratio over `samples` log-uniform points with 0 <= sigma <= 1, 3pi <= t <= t_max.
Calibration run_calibration(int samples, unsigned long long seed, double t_max = 5e4);

}  // namespace raux
