#include "raux/kernels.hpp"

#include "raux/errors.hpp"

#if defined(RAUX_HAVE_AVX2_TU)
#include <immintrin.h>

#include <array>
#include <cmath>
#endif

namespace raux::kernels::avx2 {

#if defined(RAUX_HAVE_AVX2_TU)

namespace {

using v4 = __m256d;

inline v4 set1(double x) { return _mm256_set1_pd(x); }

// Inverse factorials 1/k! for the Taylor polynomials below.
constexpr std::array<double, 20> kInvFact = [] {
  std::array<double, 20> a{};
  double f = 1.0;
  for (int k = 0; k < 20; ++k) {
    if (k > 0) f *= k;
    a[k] = 1.0 / f;
  }
  return a;
}();

// exp(x) for x in [-708, 709]; lanes below -708 flush to zero. Cody-Waite
// reduction by ln 2 then a degree-13 Taylor polynomial on |r| <= ln2/2.
inline v4 exp4(v4 x) {
  const v4 lo = set1(-708.0);
  const v4 under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  x = _mm256_max_pd(x, lo);
  x = _mm256_min_pd(x, set1(709.0));
  const v4 k = _mm256_round_pd(_mm256_mul_pd(x, set1(1.4426950408889634)),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  v4 r = _mm256_fnmadd_pd(k, set1(6.93145751953125E-1), x);
  r = _mm256_fnmadd_pd(k, set1(1.42860682030941723212E-6), r);
  v4 p = set1(kInvFact[13]);
  for (int j = 12; j >= 0; --j) p = _mm256_fmadd_pd(p, r, set1(kInvFact[j]));
  const __m128i k32 = _mm256_cvtpd_epi32(k);
  __m256i e = _mm256_cvtepi32_epi64(k32);
  e = _mm256_add_epi64(e, _mm256_set1_epi64x(1023));
  e = _mm256_slli_epi64(e, 52);
  const v4 res = _mm256_mul_pd(p, _mm256_castsi256_pd(e));
  return _mm256_andnot_pd(under, res);
}

// sin and cos together; |x| up to ~1e9. Three-constant pi/2 reduction with
// FMA, Taylor polynomials on |r| <= pi/4, then quadrant selection.
inline void sincos4(v4 x, v4& s, v4& c) {
  const v4 k = _mm256_round_pd(_mm256_mul_pd(x, set1(0.6366197723675814)),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  v4 r = _mm256_fnmadd_pd(k, set1(1.5707963267948966), x);
  r = _mm256_fnmadd_pd(k, set1(6.123233995736766e-17), r);
  r = _mm256_fnmadd_pd(k, set1(-1.4973849048591698e-33), r);
  const v4 r2 = _mm256_mul_pd(r, r);
  // sin: r * sum_{j=0..8} (-1)^j r^{2j} / (2j+1)!
  v4 ps = set1(kInvFact[17]);
  for (int j = 7; j >= 0; --j) {
    const double cf = (j % 2 ? -1.0 : 1.0) * kInvFact[2 * j + 1];
    ps = _mm256_fmadd_pd(ps, r2, set1(cf));
  }
  ps = _mm256_mul_pd(ps, r);
  // cos: sum_{j=0..9} (-1)^j r^{2j} / (2j)!
  v4 pc = set1(-kInvFact[18]);
  for (int j = 8; j >= 0; --j) {
    const double cf = (j % 2 ? -1.0 : 1.0) * kInvFact[2 * j];
    pc = _mm256_fmadd_pd(pc, r2, set1(cf));
  }
  const __m256i q = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k));
  const __m256i one = _mm256_set1_epi64x(1), two = _mm256_set1_epi64x(2);
  const v4 swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256i qs = q;
  const __m256i qc = _mm256_add_epi64(q, one);
  const v4 neg_s = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(qs, two), two));
  const v4 neg_c = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(qc, two), two));
  v4 sv = _mm256_blendv_pd(ps, pc, swap);
  v4 cv = _mm256_blendv_pd(pc, ps, swap);
  const v4 sign = set1(-0.0);
  s = _mm256_xor_pd(sv, _mm256_and_pd(neg_s, sign));
  c = _mm256_xor_pd(cv, _mm256_and_pd(neg_c, sign));
}

// Per-lane Kahan accumulator.
struct Acc4 {
  v4 sum = _mm256_setzero_pd();
  v4 comp = _mm256_setzero_pd();
  void add(v4 x) {
    const v4 y = _mm256_sub_pd(x, comp);
    const v4 t = _mm256_add_pd(sum, y);
    comp = _mm256_sub_pd(_mm256_sub_pd(t, sum), y);
    sum = t;
  }
  // Lanes folded with Neumaier summation, together with any scalar tail.
  void fold_into(CompensatedSum& out) const {
    alignas(32) double s[4], c[4];
    _mm256_store_pd(s, sum);
    _mm256_store_pd(c, comp);
    for (int i = 0; i < 4; ++i) {
      out.add(s[i]);
      out.add(-c[i]);
    }
  }
};

inline v4 vabs(v4 x) { return _mm256_andnot_pd(set1(-0.0), x); }

double hsum(v4 x) {
  alignas(32) double s[4];
  _mm256_store_pd(s, x);
  return (s[0] + s[1]) + (s[2] + s[3]);
}

}  // namespace

bool compiled() { return true; }

SumResult dirichlet_sum(std::span<const double> log_n, std::span<const double> c_re,
                        std::span<const double> c_im, cplx s) {
  const bool unit = c_re.empty();
  const std::size_t n = log_n.size();
  const v4 ns = set1(-s.real()), nt = set1(-s.imag());
  Acc4 re, im;
  v4 absv = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const v4 l = _mm256_loadu_pd(&log_n[k]);
    const v4 mag = exp4(_mm256_mul_pd(ns, l));
    v4 sn, cs;
    sincos4(_mm256_mul_pd(nt, l), sn, cs);
    v4 tr = _mm256_mul_pd(mag, cs), ti = _mm256_mul_pd(mag, sn);
    if (!unit) {
      const v4 ar = _mm256_loadu_pd(&c_re[k]), ai = _mm256_loadu_pd(&c_im[k]);
      const v4 r = _mm256_fmsub_pd(ar, tr, _mm256_mul_pd(ai, ti));
      ti = _mm256_fmadd_pd(ar, ti, _mm256_mul_pd(ai, tr));
      tr = r;
    }
    re.add(tr);
    im.add(ti);
    absv = _mm256_add_pd(absv, _mm256_add_pd(vabs(tr), vabs(ti)));
  }
  CompensatedSum rs, is;
  re.fold_into(rs);
  im.fold_into(is);
  double abs_total = hsum(absv);
  for (; k < n; ++k) {
    const double mag = std::exp(-s.real() * log_n[k]);
    const double ph = -s.imag() * log_n[k];
    double tr = mag * std::cos(ph), ti = mag * std::sin(ph);
    if (!unit) {
      const double r = c_re[k] * tr - c_im[k] * ti;
      ti = c_re[k] * ti + c_im[k] * tr;
      tr = r;
    }
    rs.add(tr);
    is.add(ti);
    abs_total += std::abs(tr) + std::abs(ti);
  }
  return {{rs.value(), is.value()}, abs_total};
}

double kernel_sum(std::span<const double> tk, double t) {
  const std::size_t n = tk.size();
  const v4 tv = set1(t), one = set1(1.0);
  Acc4 acc;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const v4 d = _mm256_sub_pd(tv, _mm256_loadu_pd(&tk[k]));
    acc.add(_mm256_div_pd(one, _mm256_fmadd_pd(d, d, one)));
  }
  CompensatedSum out;
  acc.fold_into(out);
  for (; k < n; ++k) {
    const double d = t - tk[k];
    out.add(1.0 / (1.0 + d * d));
  }
  return out.value();
}

double mean_value_cross(std::span<const double> log_n, std::span<const double> a_re,
                        std::span<const double> a_im, double T) {
  const std::size_t n = log_n.size();
  const v4 half_t = set1(0.5 * T);
  CompensatedSum out;
  for (std::size_t i = 0; i < n; ++i) {
    const v4 li = set1(log_n[i]), ri = set1(a_re[i]), ii = set1(a_im[i]);
    Acc4 acc;
    std::size_t j = i + 1;
    for (; j + 4 <= n; j += 4) {
      const v4 th = _mm256_mul_pd(half_t, _mm256_sub_pd(_mm256_loadu_pd(&log_n[j]), li));
      const v4 rj = _mm256_loadu_pd(&a_re[j]), ij = _mm256_loadu_pd(&a_im[j]);
      const v4 pr = _mm256_fmadd_pd(ri, rj, _mm256_mul_pd(ii, ij));
      const v4 pi = _mm256_fmsub_pd(ii, rj, _mm256_mul_pd(ri, ij));
      v4 sn, cs;
      sincos4(th, sn, cs);
      const v4 re = _mm256_fmsub_pd(pr, cs, _mm256_mul_pd(pi, sn));
      acc.add(_mm256_div_pd(_mm256_mul_pd(re, sn), th));
    }
    acc.fold_into(out);
    for (; j < n; ++j) {
      const double th = 0.5 * T * (log_n[j] - log_n[i]);
      const double pr = a_re[i] * a_re[j] + a_im[i] * a_im[j];
      const double pi = a_im[i] * a_re[j] - a_re[i] * a_im[j];
      const double sn = std::sin(th);
      out.add((pr * std::cos(th) - pi * sn) * sn / th);
    }
  }
  return 2.0 * T * out.value();
}

cplx bilinear_offdiag(std::span<const double> x_re, std::span<const double> x_im,
                      std::span<const double> y_re, std::span<const double> y_im,
                      std::span<const double> lambda) {
  const std::size_t n = lambda.size();
  CompensatedSum re, im;
  // Inner sum over k in [lo, hi), skipping nothing; the diagonal is split out
  // by the caller's two ranges.
  auto inner = [&](std::size_t m, std::size_t lo, std::size_t hi, CompensatedSum& sr,
                   CompensatedSum& si) {
    const v4 lm = set1(lambda[m]), one = set1(1.0);
    Acc4 ar, ai;
    std::size_t k = lo;
    for (; k + 4 <= hi; k += 4) {
      const v4 w = _mm256_div_pd(one, _mm256_sub_pd(lm, _mm256_loadu_pd(&lambda[k])));
      ar.add(_mm256_mul_pd(_mm256_loadu_pd(&y_re[k]), w));
      ai.add(_mm256_mul_pd(_mm256_loadu_pd(&y_im[k]), w));
    }
    ar.fold_into(sr);
    ai.fold_into(si);
    for (; k < hi; ++k) {
      const double w = 1.0 / (lambda[m] - lambda[k]);
      sr.add(y_re[k] * w);
      si.add(y_im[k] * w);
    }
  };
  for (std::size_t m = 0; m < n; ++m) {
    CompensatedSum sr, si;
    inner(m, 0, m, sr, si);
    inner(m, m + 1, n, sr, si);
    const double a = sr.value(), b = si.value();
    re.add(x_re[m] * a - x_im[m] * b);
    im.add(x_re[m] * b + x_im[m] * a);
  }
  return {re.value(), im.value()};
}

#else

bool compiled() { return false; }

SumResult dirichlet_sum(std::span<const double>, std::span<const double>,
                        std::span<const double>, cplx) {
  throw DomainError("AVX2 kernels not compiled for this target");
}
double kernel_sum(std::span<const double>, double) {
  throw DomainError("AVX2 kernels not compiled for this target");
}
double mean_value_cross(std::span<const double>, std::span<const double>,
                        std::span<const double>, double) {
  throw DomainError("AVX2 kernels not compiled for this target");
}
cplx bilinear_offdiag(std::span<const double>, std::span<const double>,
                      std::span<const double>, std::span<const double>,
                      std::span<const double>) {
  throw DomainError("AVX2 kernels not compiled for this target");
}

#endif

}  // namespace raux::kernels::avx2
