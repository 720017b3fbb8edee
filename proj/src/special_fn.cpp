#include "raux/special_fn.hpp"

#include <array>
#include <string>

#include "raux/errors.hpp"

namespace raux {

namespace {

// B_2, B_4, ..., B_32 as exact fractions.
constexpr std::array<std::array<double, 2>, 16> kBernoulli = {{
    {1.0, 6.0},
    {-1.0, 30.0},
    {1.0, 42.0},
    {-1.0, 30.0},
    {5.0, 66.0},
    {-691.0, 2730.0},
    {7.0, 6.0},
    {-3617.0, 510.0},
    {43867.0, 798.0},
    {-174611.0, 330.0},
    {854513.0, 138.0},
    {-236364091.0, 2730.0},
    {8553103.0, 6.0},
    {-23749461029.0, 870.0},
    {8615841276005.0, 14322.0},
    {-7709321041217.0, 510.0},
}};

constexpr int kStirlingTerms = 10;
constexpr double kStirlingShift = 10.0;
const double kHalfLog2Pi = 0.5 * std::log(kTwoPi);
const double kLogPi = std::log(kPi);

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::sum: return "sum";
    case Method::integral: return "integral";
    case Method::euler_maclaurin: return "euler_maclaurin";
    case Method::asymptotic: return "asymptotic";
  }
  return "unknown";
}

double bernoulli(int k) {
  if (k < 1 || k > static_cast<int>(kBernoulli.size()))
    throw DomainError("bernoulli: index out of table range");
  return kBernoulli[k - 1][0] / kBernoulli[k - 1][1];
}

double bernoulli_over_factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= 2 * k; ++j) f *= j;
  return bernoulli(k) / f;
}

EvalResult log_gamma(cplx z) {
  if (is_nonpositive_integer(z))
    throw PoleError("log_gamma: pole at z = " + std::to_string(z.real()));

  CompensatedComplexSum shift;
  cplx w = z;
  while (w.real() < kStirlingShift) {
    shift.add(std::log(w));
    w += 1.0;
  }

  const cplx logw = std::log(w);
  const cplx winv = 1.0 / w;
  const cplx winv2 = winv * winv;
  CompensatedComplexSum acc;
  acc.add((w - 0.5) * logw);
  acc.add(-w);
  acc.add(kHalfLog2Pi);
  cplx pw = winv;
  for (int k = 1; k <= kStirlingTerms; ++k) {
    acc.add(bernoulli(k) / (2.0 * k * (2.0 * k - 1.0)) * pw);
    pw *= winv2;
  }
  const double tail =
      std::abs(bernoulli(kStirlingTerms + 1) /
               (2.0 * (kStirlingTerms + 1) * (2.0 * kStirlingTerms + 1.0)) * pw);

  const cplx value = acc.value() - shift.value();
  const double err =
      tail + 4.0 * kEps * (acc.abs_total() + shift.abs_total() + std::abs(value));
  return {value, err, Method::asymptotic};
}

EvalResult theta(cplx t) {
  const cplx iz = cplx(0.0, 1.0) * t * 0.5;
  const cplx zp = 0.25 + iz;
  const cplx zm = 0.25 - iz;
  if (is_nonpositive_integer(zp) || is_nonpositive_integer(zm))
    throw DomainError("theta: argument at a pole of Gamma(1/4 +- it/2)");

  if (t.imag() == 0.0) {
    const EvalResult lg = log_gamma(zp);
    const double v = lg.value.imag() - 0.5 * t.real() * kLogPi;
    return {cplx(v, 0.0), lg.err + 2.0 * kEps * std::abs(v), Method::asymptotic};
  }
  const EvalResult a = log_gamma(zp);
  const EvalResult b = log_gamma(zm);
  const cplx v = (a.value - b.value) / cplx(0.0, 2.0) - 0.5 * t * kLogPi;
  return {v, 0.5 * (a.err + b.err) + 2.0 * kEps * std::abs(v), Method::asymptotic};
}

cplx CompletedFactor::value() const {
  if (!representable())
    throw DomainError("completed_factor: modulus outside double range; use log_abs/arg");
  return std::polar(std::exp(log_abs), arg);
}

CompletedFactor completed_factor(cplx s) {
  const cplx half = 0.5 * s;
  if (is_nonpositive_integer(half))
    throw PoleError("completed_factor: pole of Gamma(s/2)");
  const EvalResult lg = log_gamma(half);
  const cplx l = lg.value - half * kLogPi;
  return {l.real(), l.imag(), lg.err + 2.0 * kEps * std::abs(half * kLogPi)};
}

EvalResult zeta_euler_maclaurin(cplx s) {
  if (s == cplx(1.0, 0.0)) throw PoleError("zeta_euler_maclaurin: pole at s = 1");

  constexpr int kTerms = 15;
  const double mod = std::abs(s);
  const long n_cut = static_cast<long>(std::ceil((mod + 2.0 * kTerms) / 1.8)) + 5;
  const double dn = static_cast<double>(n_cut);

  CompensatedComplexSum acc;
  for (long n = 1; n < n_cut; ++n) acc.add(std::exp(-s * std::log(static_cast<double>(n))));

  const double log_n = std::log(dn);
  const cplx n_pow = std::exp(-s * log_n);  // N^{-s}
  acc.add(n_pow * dn / (s - 1.0));
  acc.add(0.5 * n_pow);

  // T_k = B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
  cplx rising = s;
  cplx npow = n_pow / dn;
  double last = 0.0;
  for (int k = 1; k <= kTerms + 1; ++k) {
    const cplx term = bernoulli_over_factorial(k) * rising * npow;
    if (k == kTerms + 1) {
      last = std::abs(term);
      break;
    }
    acc.add(term);
    rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
    npow /= dn * dn;
  }
  // Each n^{-s} carries a phase error of about eps * |t| log n.
  const double cond = 8.0 + std::abs(s.imag()) * log_n;
  const double err = last + kEps * cond * acc.abs_total();
  return {acc.value(), err, Method::euler_maclaurin};
}

}  // namespace raux
