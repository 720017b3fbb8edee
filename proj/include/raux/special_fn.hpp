#pragma once

// Supporting special functions: Riemann-Siegel theta, complex log-gamma,
// the completed factor pi^{-s/2} Gamma(s/2), and an Euler-Maclaurin zeta
// used as an independent oracle for R(s).

#include <string_view>

#include "raux/numerics.hpp"

namespace raux {

enum class Method { sum, integral, euler_maclaurin, asymptotic };

std::string_view to_string(Method m);

struct EvalResult {
  cplx value;
  double err = 0.0;  // heuristic absolute error radius, always >= 0
  Method method = Method::sum;
};

// Principal branch of log Gamma(z): Stirling series (10 terms) after upward
// recurrence until Re z >= 10. Throws PoleError at z = 0, -1, -2, ...
EvalResult log_gamma(cplx z);

// theta(t) = [logGamma(1/4 + it/2) - logGamma(1/4 - it/2)] / 2i - (t/2) log pi,
// which reduces to Im logGamma(1/4 + it/2) - (t/2) log pi for real t.
// Throws DomainError at the poles t = +-i(2k + 1/2).
EvalResult theta(cplx t);
inline EvalResult theta(double t) { return theta(cplx(t, 0.0)); }

// pi^{-s/2} Gamma(s/2) in log-polar form. For |t| beyond ~1400 the modulus
// underflows double range, so consumers that only need the phase use `arg`.
struct CompletedFactor {
  double log_abs = 0.0;
  double arg = 0.0;  // continuous (not reduced mod 2pi)
  double err = 0.0;  // absolute error of log_abs and arg
  bool representable() const { return log_abs > -700.0 && log_abs < 700.0; }
  cplx value() const;  // throws DomainError when !representable()
};

CompletedFactor completed_factor(cplx s);

// zeta(s) by Euler-Maclaurin summation with the cut-off chosen from |s|.
// Intended range 0 <= sigma <= 2, |t| <= 1e6 (also exact at negative
// integers). Throws PoleError at s = 1.
EvalResult zeta_euler_maclaurin(cplx s);

// B_{2k}/(2k)! for k = 1..15, shared by the Stirling and Euler-Maclaurin tails.
double bernoulli_over_factorial(int k);
double bernoulli(int k);  // B_{2k}

}  // namespace raux
