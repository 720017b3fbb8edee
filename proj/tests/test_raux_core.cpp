#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "raux/errors.hpp"
#include "raux/quadrature.hpp"
#include "raux/raux_core.hpp"

using namespace raux;

namespace {

const cplx I(0.0, 1.0);

// chi(s) = pi^{s-1/2} Gamma((1-s)/2) / Gamma(s/2), so that
// zeta(s) = R(s) + chi(s) conj(R(1 - conj s)).
cplx chi(cplx s) {
  return std::exp((s - 0.5) * std::log(kPi) + log_gamma((1.0 - s) / 2.0).value -
                  log_gamma(s / 2.0).value);
}

// conj(R(conj s)) integrated along the mirror line (direction e^{-i pi/4})
// with composite Gauss-Legendre instead of the trapezoid rule.
cplx conj_path_value(cplx s) {
  cplx xs = std::sqrt(std::conj(s) / (2.0 * kPi * I));
  if (xs.imag() - xs.real() > 0.0) xs = -xs;
  const double xr = xs.real() - xs.imag();
  const long N = xr >= 1.0 ? static_cast<long>(std::floor(xr)) : 0;
  const cplx wb = std::exp(-I * kPi / 4.0);
  const double c = N + 0.5;
  const double u0 = ((std::conj(xs) - c) * std::conj(wb)).real();
  auto G = [&](double u) {
    const cplx y = c + u * wb;
    return std::exp(-I * kPi * y * y - s * std::log(y)) / (-2.0 * I * std::sin(kPi * y));
  };
  const double br[] = {u0 - 9.0, u0 + 9.0};
  cplx v = -wb * integrate_composite(G, br, 0.125, 20);
  for (long n = 1; n <= N; ++n) v += std::pow(double(n), -s);
  return v;
}

}  // namespace

TEST_CASE("band index") {
  CHECK(band_of(1000.0) == 12);
  CHECK(band_of(2 * kPi * 16.0) == 3);  // right endpoint belongs to the lower band
  CHECK(band_of(2 * kPi * 16.0 + 1e-9) == 4);
  CHECK(band_of(1.0) == 0);
  CHECK(BandIndex{4}.t_lo() == doctest::Approx(2 * kPi * 16));
}

TEST_CASE("r_aux_sum") {
  CHECK(r_aux_sum(0.0, 5).value == cplx(5.0, 0.0));
  CHECK(std::abs(r_aux_sum(2.0, 1000000).value - kPi * kPi / 6.0) < 1e-6);
  CHECK_THROWS_AS(r_aux_sum(0.5, 0), PreconditionError);

  const cplx s(0.5, 1000.0);
  const EvalResult a = r_aux_sum(s, 12), b = r_aux_integral(s);
  CHECK(std::abs(a.value - b.value) <= a.err + b.err);
}

TEST_CASE("quadrature parameter validation") {
  CHECK_THROWS_AS(r_aux_integral(0.5, QuadratureParams{16, 4.0, 0.5}), DomainError);
  CHECK_THROWS_AS(r_aux_integral(0.5, QuadratureParams{64, 4.0, 1.0}), DomainError);
}

TEST_CASE("r_aux_integral: independent of contour parameters") {
  for (cplx s : {cplx(0.5, 0.0), cplx(0.3, 40.0), cplx(-2.0, 300.0), cplx(1.7, 5000.0)}) {
    const EvalResult a = r_aux_integral(s, {160, 4.0, 0.5});
    const EvalResult b = r_aux_integral(s, {400, 6.0, 0.3});
    const EvalResult c = r_aux_integral(s, {96, 3.0, 0.75});
    CHECK(std::abs(a.value - b.value) <= a.err + b.err);
    CHECK(std::abs(a.value - c.value) <= a.err + c.err);
    CHECK(a.err < 1e-9 * (1.0 + std::abs(a.value)));
  }
}

TEST_CASE("r_aux_integral: functional equation against Euler-Maclaurin zeta") {
  // At s = 1/2 the relation reads zeta(1/2) = 2 Re R(1/2).
  const EvalResult h = r_aux_integral(0.5);
  CHECK(std::abs(2.0 * h.value.real() - zeta_euler_maclaurin(0.5).value.real()) < 1e-10);
  for (cplx s : {cplx(2.0, 30.0), cplx(-3.0, 50.0), cplx(0.3, 7.0), cplx(0.7, 0.2), cplx(0.9, 800.0),
                 cplx(0.1, -25.0)}) {
    const cplx rs = r_aux_integral(s).value;
    const cplx rr = r_aux_integral(1.0 - std::conj(s)).value;
    const cplx z = zeta_euler_maclaurin(s).value;
    const cplx other = chi(s) * std::conj(rr);
    // Below the real axis both pieces are exponentially large and cancel.
    CHECK(std::abs(z - (rs + other)) < 1e-9 * (1.0 + std::abs(rs) + std::abs(other)));
  }
}

TEST_CASE("r_aux_integral: conjugate-path oracle") {
  for (cplx s : {cplx(0.5, 20.0), cplx(0.8, 200.0), cplx(1.5, 300.0), cplx(0.0, 60.0)}) {
    const cplx oracle = conj_path_value(s);
    const cplx v = r_aux_integral(std::conj(s)).value;
    CHECK(std::abs(std::conj(v) - oracle) < 1e-10 * (1.0 + std::abs(oracle)));
  }
}

TEST_CASE("lower bound on the line sigma = 2") {
  const double T = 1e4;
  CHECK(std::abs(r_aux_integral(cplx(2.0, T + 0.5)).value) >= 0.125);
  CHECK(std::abs(r_aux(cplx(2.0, 1e5)).value) >= 0.125);
}

TEST_CASE("growth bound on sigma = 0") {
  const double t = 1e4;
  CHECK(std::abs(r_aux(cplx(0.0, t)).value) <= 2.0 * std::sqrt(t / (2 * kPi)));
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> lt(std::log(1e2), std::log(1e5));
  for (int i = 0; i < 200; ++i) {
    const double tt = std::exp(lt(rng));
    CHECK(std::abs(r_aux(cplx(0.0, tt)).value) <= 2.0 * std::sqrt(tt / (2 * kPi)));
  }
}

TEST_CASE("c0 term is continuous through |p| = 1/2") {
  for (double p0 : {0.5, -0.5}) {
    for (double d : {1e-3, 1e-6, 1e-10}) {
      CHECK(std::abs(c0_term(p0 + d) - cplx(0.25, -0.25)) < 10 * d);
      CHECK(std::abs(c0_term(p0 - d) - cplx(0.25, -0.25)) < 10 * d);
    }
  }
  for (double p : {0.2, 0.7, -0.9}) CHECK(std::abs(c0_term(p) - c0_term(-p)) < 1e-15);
  // Switch between the direct and cancellation-free forms is seamless.
  CHECK(std::abs(c0_term(0.75 - 1e-12) - c0_term(0.75 + 1e-12)) < 1e-10);
}

TEST_CASE("r_aux dispatch and cross-method agreement") {
  const cplx s(0.5, 2000.0);
  const EvalResult a = r_aux(s), b = r_aux_integral(s);
  CHECK(a.method == Method::sum);
  CHECK(std::abs(a.value - b.value) <= a.err + b.err);
  CHECK(r_aux(cplx(0.5, 5.0)).method == Method::integral);
  CHECK(r_aux(cplx(-0.5, 500.0)).method == Method::integral);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> us(0.0, 1.0), ut(3 * kPi, 5e4);
  for (int i = 0; i < 200; ++i) {
    const cplx z(us(rng), ut(rng));
    const EvalResult x = r_aux(z), y = r_aux_integral(z);
    CHECK(std::abs(x.value - y.value) <= x.err + y.err);
  }
}

TEST_CASE("band-edge continuity of the corrected sum") {
  for (long K : {5, 10, 20}) {
    const double edge = BandIndex{K}.t_hi();
    const cplx lo(0.5, edge * (1 - 1e-13)), hi(0.5, edge * (1 + 1e-13));
    const EvalResult a = r_aux(lo), b = r_aux(hi);
    const double jump_raw = std::abs(r_aux_sum(hi, K + 1).value - r_aux_sum(lo, K).value);
    CHECK(std::abs(a.value - b.value) <= a.err + b.err);
    CHECK(std::abs(a.value - b.value) < 1e-3 * jump_raw);
  }
}

TEST_CASE("Z(t)") {
  CHECK(std::abs(z_fn(14.134725)) <= 1e-4);
  const double t = 100.0;
  const cplx zeta = zeta_euler_maclaurin(cplx(0.5, t)).value;
  const double ref = (std::polar(1.0, theta(t).value.real()) * zeta).real();
  CHECK(std::abs(z_fn(t) - ref) <= 1e-6);

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(10.0, 5000.0);
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    const cplx zz = std::polar(1.0, theta(x).value.real()) * zeta_euler_maclaurin(cplx(0.5, x)).value;
    CHECK(std::abs(zz - z_eval(x).value) <= 1e-6);
  }
}

TEST_CASE("rotated field") {
  for (double t : {25.0, 1000.0, 200041.3}) {
    const EvalResult r = rotated_field(cplx(t, 0.0));
    const EvalResult z = z_eval(t);
    CHECK(std::abs(2.0 * r.value.real() - z.value.real()) <= 2.0 * r.err + z.err);
  }
  const EvalResult fig = rotated_field(cplx(200050.0, 0.0));
  CHECK(std::isfinite(fig.value.real()));
  CHECK(fig.err <= 1e-4);
  const EvalResult sum_side = r_aux_corrected(cplx(0.5, 200050.0));
  const EvalResult int_side = r_aux_integral(cplx(0.5, 200050.0));
  CHECK(std::abs(sum_side.value - int_side.value) <= sum_side.err + int_side.err);
  const EvalResult top = rotated_field(cplx(200050.0, 4.0));
  CHECK(std::isfinite(std::abs(top.value)));
  CHECK_THROWS_AS(rotated_field(cplx(100.0, 9.0)), DomainError);
}

TEST_CASE("scaled evaluation far left") {
  const ScaledEval e = r_aux_integral_scaled(cplx(-600.0, 100.0));
  CHECK(e.value.log_scale > 700.0);
  CHECK(std::isfinite(e.value.log_abs()));
  CHECK_THROWS_AS(r_aux_integral(cplx(-600.0, 100.0)), DomainError);
}
