#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "raux/errors.hpp"
#include "raux/quadrature.hpp"
#include "raux/zeros.hpp"

using namespace raux;

namespace {

const cplx I(0.0, 1.0);

// R(s) from the mirror line with composite Gauss-Legendre, returned with the
// size of its largest explicit term for relative comparisons.
std::pair<cplx, double> oracle_R(cplx s0) {
  const cplx s = std::conj(s0);
  cplx xs = std::sqrt(std::conj(s) / (2.0 * kPi * I));
  if (xs.imag() - xs.real() > 0.0) xs = -xs;
  const double xr = xs.real() - xs.imag();
  const long N = xr >= 1.0 ? static_cast<long>(std::floor(xr)) : 0;
  const cplx wb = std::exp(-I * kPi / 4.0);
  const double c = N + 0.5;
  const double u0 = ((std::conj(xs) - c) * std::conj(wb)).real();
  double big = 1.0;
  auto G = [&](double u) {
    const cplx y = c + u * wb;
    const cplx v = std::exp(-I * kPi * y * y - s * std::log(y)) / (-2.0 * I * std::sin(kPi * y));
    big = std::max(big, std::abs(v));
    return v;
  };
  const double br[] = {u0 - 9.0, u0 + 9.0};
  cplx v = -wb * integrate_composite(G, br, 0.125, 20);
  for (long n = 1; n <= N; ++n) {
    const cplx term = std::pow(double(n), -s);
    big = std::max(big, std::abs(term));
    v += term;
  }
  return {std::conj(v), big};
}

}  // namespace

TEST_CASE("rectangle convention") {
  const Rectangle r{0.0, 1.0, 10.0, 20.0};
  CHECK(r.contains(0.0, 20.0));
  CHECK_FALSE(r.contains(0.5, 10.0));
  CHECK(r.contains(1.0, 15.0));
  CHECK_THROWS_AS((Rectangle{1.0, 0.0, 0.0, 1.0}.validate()), DomainError);
  const Rectangle back = Rectangle::from_json(r.to_json());
  CHECK(back.t_hi == r.t_hi);
}

TEST_CASE("far right strip: Rouche against 1") {
  // |R - 1| < 1 on the boundary means R has as many zeros inside as 1.
  const Rectangle r{2.0, 3.0, 1e4, 1e4 + 10.0};
  double worst = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double f = k / 400.0;
    for (cplx s : {cplx(2.0 + f, 1e4), cplx(2.0 + f, 1e4 + 10.0), cplx(2.0, 1e4 + 10.0 * f), cplx(3.0, 1e4 + 10.0 * f)})
      worst = std::max(worst, std::abs(r_aux_integral(s).value - 1.0));
  }
  CHECK(worst < 1.0);
  CHECK(winding_count(r) == 0);
}

TEST_CASE("winding: additivity and step robustness") {
  const Rectangle r{-1.0, 1.5, kTwoPi * 16, kTwoPi * 25};
  const int w = winding_count(r);
  CHECK(w > 0);
  const double mid = 0.5 * (r.t_lo + r.t_hi) + 0.0123;
  CHECK(winding_count({-1.0, 1.5, r.t_lo, mid}) + winding_count({-1.0, 1.5, mid, r.t_hi}) == w);
  CHECK(winding_count({-1.0, 0.2345, r.t_lo, r.t_hi}) + winding_count({0.2345, 1.5, r.t_lo, r.t_hi}) == w);
  WindingOptions fine;
  fine.max_phase_step = kPi / 8;
  CHECK(winding_count(r, fine) == w);

  // Consistency with the located zeros.
  const auto zs = locate_zeros(r);
  int m = 0;
  for (const auto& z : zs) m += z.multiplicity;
  CHECK(m == w);
}

TEST_CASE("long vertical edges do not alias whole turns") {
  const cplx a(-20.0, 1.0), b(-20.0, 400.0);
  const double coarse = edge_phase(a, b);
  double pieces = 0.0;
  for (int k = 0; k < 40; ++k) pieces += edge_phase(a + (b - a) * (k / 40.0), a + (b - a) * ((k + 1) / 40.0));
  CHECK(std::abs(coarse - pieces) < 1e-6);
}

TEST_CASE("locate: zeros vanish under an independent evaluator") {
  const BandScan scan = scan_band(4);
  CHECK(scan.complete());
  CHECK(scan.total_winding == static_cast<int>(scan.zeros.size()));
  for (const auto& z : scan.zeros) {
    const auto [v, big] = oracle_R({z.beta, z.gamma});
    CHECK(std::abs(v) < 1e-9 * big);
    CHECK(z.residual < 1e-10);
    CHECK(z.multiplicity == 1);
  }

  // Self-bracketing: a small box around one zero gives it back alone.
  const ZeroRecord& z0 = scan.zeros.at(scan.zeros.size() / 2);
  const Rectangle box{z0.beta - 0.05, z0.beta + 0.0517, z0.gamma - 0.05, z0.gamma + 0.0517};
  const auto one = locate_zeros(box);
  REQUIRE(one.size() == 1);
  CHECK(std::abs(cplx(one[0].beta - z0.beta, one[0].gamma - z0.gamma)) < 1e-9);

  // Stability under a tighter tolerance.
  LocateOptions tight;
  tight.tol = 1e-11;
  const auto again = locate_zeros(box, tight);
  REQUIRE(again.size() == 1);
  CHECK(std::abs(cplx(again[0].beta - one[0].beta, again[0].gamma - one[0].gamma)) <= 10 * 1e-10);

  // No zeros right of sigma = 2.
  CHECK(locate_zeros({2.0, 3.0, 100.0, 110.0}).empty());
}

TEST_CASE("band counts") {
  // Additivity over bands.
  int sum = 0;
  for (long K = 2; K <= 4; ++K) sum += band_count(K, 0.5);
  CHECK(sum == winding_count({0.5, 1.0, BandIndex{2}.t_lo(), BandIndex{4}.t_hi()}));

  const double T = BandIndex{4}.t_hi();
  int prev = 1 << 30;
  for (double a : {-3.0, -1.0, 0.0, 0.5, 0.6, 0.8, 0.99}) {
    const int n = n_alpha_T(a, T);
    CHECK(n <= prev);
    prev = n;
  }
  // Zeros with beta >= 1 are absent at this height.
  CHECK(band_count(4, 0.999) == 0);
  // No zeros hiding between the real axis and the lifted bottom edge.
  CHECK(winding_count({-105.0, 105.0, 1e-6, kBottomEdge}) == 0);
}

TEST_CASE("select_separated") {
  std::vector<ZeroRecord> zs(3);
  zs[0].gamma = 10.0;
  zs[1].gamma = 11.0;
  zs[2].gamma = 12.5;
  CHECK(select_separated(zs).points.size() == 3);
  zs[1].gamma = 10.5;
  CHECK(select_separated(zs).points.size() == 2);
  std::vector<ZeroRecord> pair(2);
  pair[0].gamma = 20.0;
  pair[1].gamma = 20.5;
  CHECK(select_separated(pair).points.size() == 1);
}

TEST_CASE("strip counts") {
  std::vector<ZeroRecord> none;
  CHECK(strip_count_check(0.5, {100.0, 200.0}, none).ratio == 0.0);
  std::vector<ZeroRecord> some(2);
  some[0].beta = 0.6;
  some[0].gamma = 100.5;
  some[1].beta = 0.4;  // left of alpha
  some[1].gamma = 100.7;
  const InequalityReport r = strip_count_check(0.5, {100.0}, some);
  CHECK(r.lhs == 1.0);
  CHECK(r.ratio == doctest::Approx(1.0 / (2.5 * std::log(100.0))));
  CHECK_THROWS_AS(strip_count_check(0.5, {2.0}, some), DomainError);
}

TEST_CASE("D polynomial identity") {
  const long K = 7;
  const double alpha = 0.55;
  SeparatedSet S;
  S.points = {{0.3, BandIndex{K}.t_lo() + 3.0}, {-1.2, BandIndex{K}.t_lo() + 17.5}, {0.8, BandIndex{K}.t_hi() - 1.0}};
  const InequalityReport r = d_polynomial_check(K, alpha, S);
  CHECK(r.extra.at("max_identity_residual").get<double>() < 1e-12 * 50);
  // Directly: 1 + D(rho - alpha - 2 pi i K^2) = sum_{n<=K} n^{-rho}.
  const DirichletPoly D = d_polynomial(K, alpha);
  const cplx rho(0.3, 321.0);
  cplx direct = 0.0;
  for (long n = 1; n <= K; ++n) direct += std::pow(double(n), -rho);
  CHECK(std::abs(1.0 + D.eval(rho - cplx(alpha, BandIndex{K}.t_lo())) - direct) < 1e-12);
}

TEST_CASE("large values on actual zeros, K = 15") {
  const long K = 15;
  const double alpha = 0.55;
  ScanOptions opt;
  opt.sigma_cuts = {alpha};
  const BandScan scan = scan_band(K, opt);
  CHECK(scan.complete());
  std::vector<ZeroRecord> right;
  for (const auto& z : scan.zeros)
    if (z.beta >= alpha && z.beta <= 1.0) right.push_back(z);
  const SeparatedSet S = select_separated(right);
  MESSAGE("K=15: " << right.size() << " zeros with beta >= 0.55, J=" << S.points.size());
  if (!S.points.empty()) {
    const SeparatedSet shifted = shift_to_band_origin(S, alpha, K);
    CHECK_NOTHROW(shifted.validate());
    const InequalityReport lv = large_values_check(d_polynomial(K, alpha), shifted);
    CHECK(lv.pass);
    const InequalityReport d = d_polynomial_check(K, alpha, S);
    MESSAGE("fraction |D| >= 1/2: " << d.extra.at("fraction_ge_half") << ", min |D| " << d.extra.at("min_abs_D"));
    // |D| >= 1/2 at each zero would give lhs >= J/4.
    if (d.extra.at("fraction_ge_half").get<double>() == 1.0) CHECK(lv.lhs >= S.points.size() / 4.0);
  }
}

TEST_CASE("Z sign changes") {
  const auto zz = z_zeros(0.0, 100.0);
  REQUIRE(zz.size() == 29);
  CHECK(zz.front() == doctest::Approx(14.134725141734693).epsilon(1e-10));
  CHECK(zz[1] == doctest::Approx(21.022039638771555).epsilon(1e-10));
  for (double t : zz) CHECK(std::abs(z_fn(t)) < 1e-8);
}
