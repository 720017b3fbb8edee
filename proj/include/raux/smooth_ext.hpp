#pragma once

// C^2 extension of weights f on [1, N] to compactly supported g on (0, inf),
// built from polynomial caps, and the Mellin-transform bound that turns a
// weighted Dirichlet polynomial into an integral of the unweighted one.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "raux/numerics.hpp"
#include "raux/report.hpp"

namespace raux {

using Rational = boost::rational<long long>;

// Dense polynomial with double coefficients (ascending powers).
struct Poly {
  std::vector<double> c;
  double eval(double x, int deriv = 0) const;
  Poly derivative() const;
  // Bound on sup |p'| over [0, 1] from the coefficients.
  double slope_bound() const;
};
Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(double k, const Poly& a);

struct CapPoly {
  int index = 0;                // 1..4
  std::vector<Rational> coeffs;  // ascending powers, exact
  Rational eval_exact(Rational x, int deriv = 0) const;
  double eval(double x, int deriv = 0) const;
  Poly to_poly() const;
};

// phi_1..phi_4 with phi(0) = phi'(0) = phi''(0) = 0, phi(1) = 1 and
// (phi'(1), phi''(1) - phi'(1)) = (1,1), (1,-1), (-1,1), (-1,-1).
std::array<CapPoly, 4> cap_polynomials();

// Caps for the right end of an extension, where the derivative flips sign
// (G(y) = psi(L + 1 - y)) and the controlled combination is psi'' + psi':
// psi(1) = 1 and (psi'(1), psi''(1) + psi'(1)) in the same order as above.
std::array<CapPoly, 4> mirror_cap_polynomials();

struct SupNorm {
  double value = 0.0;      // max over endpoints and refined critical points
  double at = 0.0;         // where it is attained
  double certified = 0.0;  // grid maximum plus a Lipschitz margin; >= value
};

// sup over [0, 1] of |p|. Critical points come from sign changes of p' on
// a `grid`-interval mesh, refined by bisection.
SupNorm sup_norm(const Poly& p, int grid = 4096);

// (||p||, ||p'||, ||p'' + sign p'||) on [0, 1]; sign = -1 for left caps.
std::array<SupNorm, 3> cap_norms(const Poly& p, int sign = -1);

// The three bounds every cap and every extension must respect.
inline constexpr std::array<double, 3> kExtensionBounds = {10.0 / 9.0, 7.0 / 3.0, 41.0 / 5.0};

struct Cap {
  Poly poly;
  std::array<double, 8> convex_weights{};  // indexed by sign pattern, bit k set <=> e_{k+1} = -1
  std::array<double, 3> bound_cert{};      // certified (||phi||, ||phi'||, ||phi'' -+ phi'||)
};

// Cap with phi(1) = a, phi'(1) = b, phi''(1) = c, as the convex combination
// of +-phi_j with weights (1 + e1 a)(1 + e2 b)(1 + e3 (c - b)) / 8.
// Requires |a| <= 1, |b| <= 1, |c - b| <= 1.
Cap build_cap(double a, double b, double c);

// Right-end cap: psi(1) = a, psi'(1) = b, psi''(1) + psi'(1) = e, from the
// mirror family. Requires |a|, |b|, |e| <= 1.
Cap build_mirror_cap(double a, double b, double e);

// C^2 weight on (0, inf). eval(x, k) is the k-th derivative (k = 0, 1, 2).
struct WeightFn {
  std::function<double(double, int)> eval;
  double support_lo = 0.0, support_hi = 0.0;
  std::vector<double> breaks;  // points where the pieces join (sorted)
  // Certified sup bounds of |g|, x|g'|, x^2|g''|.
  std::array<double, 3> bound_cert{};
  std::string description;
};

// f(x) = x^{-sigma} on [1, N].
WeightFn power_weight(double sigma, long N);
// f(x) = c on [1, N].
WeightFn constant_weight(double c, long N);

// Extension of f from [1, N] to support [1/e, eN]. Checks on a 4096-point
// log grid that |f| <= 1, x|f'| <= 1, x^2|f''| <= 1 and throws
// PreconditionError naming the first violation.
WeightFn extend_weight(const WeightFn& f, long N);

struct ConstantB {
  double a = 0.0;  // root of a sqrt(1 + a^2) = M/m
  double b = 0.0;  // m (1 + a^2) = (M/a) sqrt(1 + a^2)
};
// With M = 41/5 and m = 10/9. Throws if b >= 8.775.
ConstantB constant_b();

struct MellinValue {
  cplx value;
  double err = 0.0;
};

// h(t) = int_0^inf g(x) x^{it} dx/x, by composite Gauss-Legendre in u = log x
// with panels shrunk for large |t|; err from a rule of twice the order.
MellinValue mellin_transform(const WeightFn& g, double t);

// (1/2pi) int_{-t_max}^{t_max} h(t) x^{-it} dt, sampling h on a Gauss grid.
double mellin_inverse(const WeightFn& g, double x, double t_max, double dt = 0.5);

// max over t in t_grid of |h(t)| (1 + t^2) / (b (log N + 2)); must be <= 1.
InequalityReport mellin_bound_check(const WeightFn& g, long N, const std::vector<double>& t_grid);

}  // namespace raux
