#include "raux/raux_core.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <vector>

#include "raux/calibration.hpp"
#include "raux/errors.hpp"
#include "raux/kernels.hpp"

namespace raux {

namespace {

constexpr std::size_t kLogCache = 1 << 16;
const cplx kW{std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2};  // e^{i pi/4}
const cplx kI{0.0, 1.0};

// log(2i sin(pi x)) = log(e^{i pi x} - e^{-i pi x}), factored so that the
// exponential that dominates is pulled out and nothing overflows.
cplx log_two_i_sin(cplx x) {
  if (x.imag() >= 0.0) {
    const cplx e = std::exp(2.0 * kPi * kI * x);  // |e| <= 1
    return kI * kPi * (1.0 - x) + std::log(1.0 - e);
  }
  const cplx e = std::exp(-2.0 * kPi * kI * x);
  return kI * kPi * x + std::log(1.0 - e);
}

struct Trapezoid {
  cplx sum_h, sum_2h;
  double abs_h = 0.0;
  double max_re = 0.0;
  bool tails_ok = false;
};

// One trapezoid pass over u in [u0 - r, u0 + r] with step h; terms scaled by
// exp(-max_re).
Trapezoid trapezoid(cplx s, double c, double u0, double r, double h) {
  const long half = static_cast<long>(std::ceil(r / h));
  const std::size_t n = static_cast<std::size_t>(2 * half + 1);
  std::vector<cplx> logf(n);
  double max_re = -INFINITY;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = u0 + (static_cast<long>(k) - half) * h;
    const cplx x = c + u * kW;
    const cplx lf = kI * kPi * x * x - s * std::log(x) - log_two_i_sin(x);
    logf[k] = lf;
    max_re = std::max(max_re, lf.real());
  }
  Trapezoid tr;
  tr.max_re = max_re;
  // e^{-42} ~ 6e-19: the discarded tails are below double resolution.
  tr.tails_ok = logf.front().real() < max_re - 42.0 && logf.back().real() < max_re - 42.0;
  CompensatedComplexSum all, even;
  double abs_total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const cplx v = std::exp(logf[k] - max_re);
    all.add(v);
    if (k % 2 == 0) even.add(v);
    abs_total += std::abs(v);
  }
  tr.sum_h = all.value() * h;
  tr.sum_2h = even.value() * (2.0 * h);
  tr.abs_h = abs_total * h;
  return tr;
}

// sum_{n<=N} n^{-s} as mantissa * exp(log_scale), with a roundoff radius.
struct ScaledSum {
  cplx mantissa;
  double log_scale = 0.0;
  double err = 0.0;
};

ScaledSum dirichlet_scaled(cplx s, long N) {
  ScaledSum out;
  if (N <= 0) return out;
  const auto ln = log_table(static_cast<std::size_t>(N));
  const double top = std::max(0.0, -s.real() * ln.back());
  const double phase_cond = 2.0 + std::abs(s.imag()) * ln.back() + std::abs(s.real()) * ln.back();
  if (top < 600.0) {
    const auto r = kernels::dirichlet_sum(ln, {}, {}, s);
    out.mantissa = r.value * std::exp(-top);
    out.log_scale = top;
    out.err = 4.0 * kEps * phase_cond * r.abs_total * std::exp(-top);
    return out;
  }
  CompensatedComplexSum acc;
  for (long n = 0; n < N; ++n) acc.add(std::exp(-s * ln[n] - top));
  out.mantissa = acc.value();
  out.log_scale = top;
  out.err = 4.0 * kEps * phase_cond * acc.abs_total();
  return out;
}

}  // namespace

double BandIndex::t_lo() const { return kTwoPi * double(K) * double(K); }
double BandIndex::t_hi() const { return kTwoPi * double(K + 1) * double(K + 1); }

long band_of(double t) {
  if (t <= kTwoPi) return 0;
  long K = static_cast<long>(std::floor(std::sqrt(t / kTwoPi)));
  while (BandIndex{K}.t_lo() >= t) --K;
  while (BandIndex{K}.t_hi() < t) ++K;
  return K;
}

void QuadratureParams::validate() const {
  if (node_count < 32) throw DomainError("QuadratureParams: node_count must be >= 32");
  if (!(truncation_radius > 0.0)) throw DomainError("QuadratureParams: truncation_radius must be > 0");
  if (!(path_anchor > 0.0 && path_anchor < 1.0))
    throw DomainError("QuadratureParams: path_anchor must lie in (0,1)");
}

std::span<const double> log_table(std::size_t count) {
  static std::vector<double> cache;
  static std::once_flag once;
  std::call_once(once, [] {
    cache.resize(kLogCache);
    for (std::size_t n = 0; n < kLogCache; ++n) cache[n] = std::log(double(n + 1));
  });
  if (count <= kLogCache) return {cache.data(), count};
  thread_local std::vector<double> big;
  if (big.size() < count) {
    const std::size_t old = big.size();
    big.resize(count);
    for (std::size_t n = old; n < count; ++n) big[n] = std::log(double(n + 1));
  }
  return {big.data(), count};
}

EvalResult r_aux_sum(cplx s, long K) {
  if (K < 1) throw PreconditionError("r_aux_sum: band index K must be >= 1");
  const auto ln = log_table(static_cast<std::size_t>(K));
  const auto r = kernels::dirichlet_sum(ln, {}, {}, s);
  const double cond = 2.0 + (std::abs(s.imag()) + std::abs(s.real())) * ln.back();
  const double remainder = calibration().sum_remainder_c * std::exp(-s.real() * ln.back());
  return {r.value, remainder + 4.0 * kEps * cond * r.abs_total, Method::sum};
}

ScaledEval r_aux_integral_scaled(cplx s, const QuadratureParams& q) {
  q.validate();
  // Of the two saddles +-sqrt(s/2 pi i), take the one whose steepest-descent
  // line meets the real axis further right; the other choice can put the
  // line on the wrong side of a saddle and lose e^{O(|s|)} to cancellation.
  cplx xs = std::sqrt(s / (2.0 * kPi * kI));
  if (xs.imag() - xs.real() > 0.0) xs = -xs;
  const double xr = xs.real() - xs.imag();
  const long N = xr >= 1.0 ? static_cast<long>(std::floor(xr)) : 0;
  const double c = double(N) + q.path_anchor;
  const double u0 = ((xs - c) * std::conj(kW)).real();

  double r = q.truncation_radius;
  double h = 2.0 * q.truncation_radius / q.node_count;
  Trapezoid tr;
  for (int extend = 0;; ++extend) {
    tr = trapezoid(s, c, u0, r, h);
    if (tr.tails_ok) break;
    if (extend == 12) throw ConvergenceError("r_aux_integral: integrand tails do not decay");
    r += 2.0;
  }
  // The trapezoid rule converges geometrically here (the nearest pole is a
  // fixed distance from the line), so the h-rule error is about the square
  // of the relative h vs 2h discrepancy.
  for (int refine = 0;; ++refine) {
    const double rel = std::abs(tr.sum_h - tr.sum_2h) / tr.abs_h;
    if (rel < 1e-5) break;
    if (refine == 4)
      throw ConvergenceError("r_aux_integral: quadrature did not stabilise at s = (" +
                             std::to_string(s.real()) + ", " + std::to_string(s.imag()) + ")");
    h *= 0.5;
    tr = trapezoid(s, c, u0, r, h);
  }
  const double rel = std::abs(tr.sum_h - tr.sum_2h) / tr.abs_h;
  const double xabs = std::abs(xs) + r + 1.0;
  const double cond = 10.0 + kPi * xabs * xabs + std::abs(s) * (std::abs(std::log(xabs)) + kPi);

  // I = -w * integral; both pieces brought to a common scale.
  const cplx integral = -kW * tr.sum_h;
  const double int_err = tr.abs_h * (rel * rel + 4.0 * kEps * cond);
  const ScaledSum sum = dirichlet_scaled(s, N);
  const double L = N > 0 ? std::max(sum.log_scale, tr.max_re) : tr.max_re;
  ScaledEval out;
  out.value.log_scale = L;
  out.value.mantissa = integral * std::exp(tr.max_re - L) + sum.mantissa * std::exp(sum.log_scale - L);
  out.err = int_err * std::exp(tr.max_re - L) + sum.err * std::exp(sum.log_scale - L);
  out.N = N;
  out.nodes = static_cast<int>(2 * std::ceil(r / h) + 1);
  return out;
}

EvalResult r_aux_integral(cplx s, const QuadratureParams& q) {
  const ScaledEval e = r_aux_integral_scaled(s, q);
  if (e.value.log_scale > 700.0) throw DomainError("r_aux_integral: |R(s)| exceeds double range");
  const double f = std::exp(e.value.log_scale);
  return {e.value.mantissa * f, e.err * f, Method::integral};
}

cplx c0_term(double p) {
  const double q = std::abs(p) - 0.5;
  if (q == 0.0) return {0.25, -0.25};
  if (std::abs(q) < 0.25) {
    // Numerator and denominator both vanish at |p| = 1/2; this form has the
    // cancellation done analytically.
    const double A = kPi * q * (1.0 + q) / 2.0, B = kPi * q / 2.0;
    const cplx num(-2.0 * std::sin((A + B) / 2.0) * std::sin(kPi * q * q / 4.0) + std::sin(kPi * q / 2.0),
                   std::sin(A));
    return kI * num / (-2.0 * std::sin(kPi * q));
  }
  const cplx e = std::exp(kI * kPi * (p * p / 2.0 + 0.375));
  return (e - kI * std::numbers::sqrt2 * std::cos(kPi * p / 2.0)) / (2.0 * std::cos(kPi * p));
}

EvalResult r_aux_corrected(cplx s) {
  const double t = s.imag();
  if (!(t > kTwoPi)) throw DomainError("r_aux_corrected: requires t > 2 pi");
  const double a = std::sqrt(t / kTwoPi);
  const long N = static_cast<long>(std::floor(a));
  const double p = 1.0 - 2.0 * (a - double(N));
  const auto ln = log_table(static_cast<std::size_t>(N));
  const auto r = kernels::dirichlet_sum(ln, {}, {}, s);
  const double phase = t / 2.0 * std::log(t / kTwoPi) - t / 2.0 - kPi / 8.0;
  const double sign = (N % 2 == 1) ? 1.0 : -1.0;
  const double amp = std::exp(-s.real() * std::log(a));
  const cplx corr = sign * std::polar(amp, -phase) * c0_term(p);
  const double cond = 2.0 + (std::abs(t) + std::abs(s.real())) * ln.back();
  const double err = calibration().corrected_remainder_c * amp / a +
                     4.0 * kEps * (cond * r.abs_total + std::abs(phase) * amp);
  return {r.value + corr, err, Method::sum};
}

EvalResult r_aux(cplx s) {
  if (s.real() >= 0.0 && s.real() <= 1.0 && s.imag() >= 3.0 * kPi) return r_aux_corrected(s);
  return r_aux_integral(s);
}

EvalResult z_eval(double t) {
  const EvalResult th = theta(t);
  // The contour integral costs about the same as the corrected sum and is
  // accurate to roundoff, which sign-change counting needs.
  const EvalResult r = r_aux_integral(cplx(0.5, t));
  const cplx rot = std::polar(1.0, th.value.real()) * r.value;
  return {cplx(2.0 * rot.real(), 0.0), 2.0 * (r.err + std::abs(r.value) * th.err), r.method};
}

double z_fn(double t) { return z_eval(t).value.real(); }

EvalResult rotated_field(cplx t) {
  if (std::abs(t.imag()) > 8.0) throw DomainError("rotated_field: |Im t| must be <= 8");
  const EvalResult th = theta(t);
  const cplx s = 0.5 + kI * t;
  const ScaledEval r = r_aux_integral_scaled(s);
  // e^{i theta} has modulus e^{-Im theta}; fold it into the scale.
  const double L = r.value.log_scale - th.value.imag();
  if (L > 700.0) throw DomainError("rotated_field: value exceeds double range");
  const double f = std::exp(L);
  const cplx v = r.value.mantissa * std::polar(f, th.value.real());
  return {v, f * (r.err + std::abs(r.value.mantissa) * th.err), Method::integral};
}

Calibration run_calibration(int samples, unsigned long long seed, double t_max) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> us(0.0, 1.0), ul(std::log(3.0 * kPi), std::log(t_max));
  double worst_sum = 0.0, worst_corr = 0.0;
  for (int i = 0; i < samples; ++i) {
    const cplx s(us(rng), std::exp(ul(rng)));
    const cplx exact = r_aux_integral(s).value;
    const double a = std::sqrt(s.imag() / kTwoPi);
    const long K = std::max(1L, static_cast<long>(std::floor(a)));
    const auto ln = log_table(static_cast<std::size_t>(K));
    const cplx sum = kernels::dirichlet_sum(ln, {}, {}, s).value;
    worst_sum = std::max(worst_sum, std::abs(sum - exact) * std::exp(s.real() * ln.back()));
    const cplx corr = r_aux_corrected(s).value;
    worst_corr = std::max(worst_corr, std::abs(corr - exact) * std::pow(a, s.real() + 1.0));
  }
  Calibration c;
  c.version = calibration().version + 1;
  c.sum_remainder_c = 1.5 * worst_sum;
  c.corrected_remainder_c = 1.5 * worst_corr;
  c.source = "run_calibration";
  return c;
}

}  // namespace raux
