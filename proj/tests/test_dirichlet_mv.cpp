#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "raux/dirichlet_mv.hpp"
#include "raux/errors.hpp"

using namespace raux;

namespace {

// Plain double loop, no kernels.
cplx naive_A(const std::vector<cplx>& a, cplx s) {
  cplx acc = 0.0;
  for (std::size_t n = 1; n <= a.size(); ++n) acc += a[n - 1] * std::exp(-s * std::log(double(n)));
  return acc;
}

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

}  // namespace

TEST_CASE("mean value: closed forms") {
  CHECK(mean_value_exact(DirichletPoly({1.0}), 3.0, 7.5) == doctest::Approx(7.5).epsilon(1e-15));
  const double T = kTwoPi / std::log(2.0);
  CHECK(mean_value_exact(DirichletPoly({1.0, 1.0}), 0.0, T) == doctest::Approx(2.0 * T).epsilon(1e-12));
}

TEST_CASE("mean value: quadrature oracle") {
  std::mt19937_64 rng(7);
  const DirichletPoly p = random_poly(20, rng);
  const double U = 5.0, T = 37.0;
  auto f = [&](double t) { return std::norm(naive_A(p.coeffs(), cplx(0.0, t))); };
  double err = 0.0;
  const double oracle = GK::integrate(f, U, U + T, 30, 1e-13, &err);
  CHECK(std::abs(mean_value_exact(p, U, T) - oracle) < 1e-6 * oracle);
}

TEST_CASE("mean value: nonnegative, shift invariant, bounded") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto N = std::uniform_int_distribution<int>(1, 60)(rng);
    const DirichletPoly p = random_poly(N, rng);
    const double U = std::uniform_real_distribution<double>(-500, 500)(rng);
    const double T = std::uniform_real_distribution<double>(0.01, 300)(rng);
    const double v = mean_value_exact(p, U, T);
    CHECK(v >= -1e-9);
    CHECK(std::abs(v - mean_value_exact(p.shifted(U), 0.0, T)) <= 1e-10 * (1.0 + T * p.l2_sq()));
    CHECK(mean_value_check(p, U, T).pass);
  }
  const InequalityReport r = mean_value_check(DirichletPoly({1.0}), 0.0, 2.0);
  CHECK(r.ratio == doctest::Approx(2.0 / (2.0 + 4.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("mean value: resonance scan") {
  // a_n = n^{i tau}: |A| peaks at t = tau with value N. Scan window lengths
  // centred on the peak; the worst ratio must stay below 1.
  const int N = 50;
  const double tau = 123.0;
  std::vector<cplx> c(N);
  for (int n = 1; n <= N; ++n) c[n - 1] = std::polar(1.0, tau * std::log(double(n)));
  const DirichletPoly p(c);
  double worst = 0.0, at = 0.0;
  for (double T = 0.01; T < 200.0; T *= 1.05) {
    const InequalityReport r = mean_value_check(p, tau - T / 2, T);
    CHECK(r.pass);
    if (r.ratio > worst) worst = r.ratio, at = T;
  }
  CHECK(worst < 1.0);
  MESSAGE("resonance worst ratio " << worst << " at T=" << at);
}

TEST_CASE("bilinear: brute-force lhs, constants, translation") {
  CHECK(preissman_constant() < 4.0 * kPi / 3.0);
  CHECK(preissman_constant() == doctest::Approx(kPi * std::sqrt(1.0 + 2.0 / 3.0 * std::sqrt(1.2))));

  const InequalityReport one = hilbert_bilinear_check({1.0}, {1.0}, {0.3});
  CHECK(one.lhs == 0.0);
  CHECK(one.pass);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int N = 50;
  std::vector<double> lam(N);
  std::vector<cplx> x(N), y(N);
  for (int n = 1; n <= N; ++n) {
    lam[n - 1] = std::log(double(n));
    x[n - 1] = {u(rng), u(rng)};
    y[n - 1] = {u(rng), u(rng)};
  }
  cplx brute = 0.0;
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n)
      if (m != n) brute += x[m] * y[n] / (lam[m] - lam[n]);
  const InequalityReport r = hilbert_bilinear_check(x, y, lam);
  CHECK(std::abs(r.lhs - std::abs(brute)) < 1e-10 * (1.0 + std::abs(brute)));
  CHECK(r.pass);
  CHECK(r.extra.at("preissman").at("pass").get<bool>());

  // delta_n = log((n+1)/n) >= 1/(n + 1/2)
  for (int n = 1; n < 1000; ++n) CHECK(std::log((n + 1.0) / n) >= 1.0 / (n + 0.5));

  std::vector<double> moved = lam;
  for (double& l : moved) l += 17.25;
  CHECK(std::abs(hilbert_bilinear_check(x, y, moved).lhs - r.lhs) < 1e-9 * r.lhs);

  CHECK_THROWS_AS(hilbert_bilinear_check({1.0, 1.0}, {1.0, 1.0}, {0.5, 0.5}), DegenerateError);
}

TEST_CASE("bilinear: near-extremal equally spaced configuration") {
  // sum_{d != 0} e^{i theta d}/d = i(pi - theta) on (0, 2 pi), so
  // x_m = e^{i theta m} s_m, y_n = e^{-i theta n} s_n with a smooth
  // profile s and small theta drives lhs towards pi sum s^2 (ratio 2/3).
  double worst = 0.0;
  int at = 0;
  for (int N = 2; N <= 400; N += 6) {
    std::vector<double> lam(N);
    std::vector<cplx> x(N), y(N);
    const double theta = 4.0 * kPi / N;  // clear of the profile's main lobe
    for (int k = 0; k < N; ++k) {
      lam[k] = k;
      const double s = std::sin(kPi * (k + 0.5) / N);
      x[k] = std::polar(s, theta * k);
      y[k] = std::polar(s, -theta * k);
    }
    const InequalityReport r = hilbert_bilinear_check(x, y, lam);
    CHECK(r.pass);
    if (r.ratio > worst) worst = r.ratio, at = N;
  }
  CHECK(worst > 0.5);
  CHECK(worst < 2.0 / 3.0);
  MESSAGE("equally spaced worst ratio " << worst << " at N=" << at);
}

TEST_CASE("kernel sum: constants and dense packing") {
  CHECK(pi_coth_pi() == doctest::Approx(3.15334809).epsilon(1e-8));
  CHECK(kernel_sum_check(5.0, {5.0}, 10.0).lhs == 1.0);

  // Periodised kernel: sum over Z of 1/(1 + (x - k)^2).
  auto periodic = [](double x) {
    return kPi * std::sinh(kTwoPi) / (std::cosh(kTwoPi) - std::cos(kTwoPi * x));
  };
  CHECK(periodic(0.0) == doctest::Approx(pi_coth_pi()).epsilon(1e-14));
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(k);
  const InequalityReport mid = kernel_sum_check(20.0, grid, 40.0);
  CHECK(mid.pass);
  CHECK(mid.lhs <= periodic(0.0));
  CHECK(pi_coth_pi() - mid.lhs < 0.1);  // tails beyond 20 cost about 2/20
  MESSAGE("dense-grid gap to pi coth pi: " << pi_coth_pi() - mid.lhs);

  // 10^4 sample points plus every tk, with jittered points.
  std::mt19937_64 rng(5);
  const SeparatedSet S = random_separated_set(30, 0.0, 45.0, rng);
  std::vector<double> tks;
  for (const auto& p : S.points) tks.push_back(p.second);
  double mx = 0.0;
  for (int i = 0; i <= 10000; ++i) mx = std::max(mx, kernel_sum(-50.0 + 150.0 * i / 10000.0, tks));
  for (double t : tks) mx = std::max(mx, kernel_sum(t, tks));
  CHECK(mx <= pi_coth_pi() + 1e-12);
}

TEST_CASE("kernel sum: far band") {
  CHECK(kernel_far_band_bound(3, 10.0) == doctest::Approx(1.0 / 400.0 + std::atan(20.0) - std::atan(10.0)));
  CHECK(kernel_far_band(35.0, 10.0) == 3);
  CHECK(kernel_far_band(15.0, 10.0) == 0);
  CHECK(kernel_far_band(-15.0, 10.0) == 2);
  CHECK(kernel_far_band(-25.0, 10.0) == 3);
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k);
  for (double t : {30.0, 35.0, 40.0, -20.0, -25.0, -30.0, 200.0, -200.0}) {
    const InequalityReport r = kernel_sum_check(t, grid, 10.0);
    CHECK(r.extra.contains("far_band"));
    CHECK(r.pass);
  }
  CHECK_THROWS_AS(kernel_sum_check(0.0, {0.0, 0.5}, 10.0), PreconditionError);
  CHECK_THROWS_AS(kernel_sum_check(0.0, {11.0}, 10.0), PreconditionError);
}

TEST_CASE("weighted polynomial") {
  const WeightFn f = power_weight(0.3, 1);
  const InequalityReport one = weighted_poly_check(DirichletPoly({1.0}), f, 0.0);
  CHECK(one.lhs == doctest::Approx(1.0));
  CHECK(one.pass);

  // All ones, N = 30: rhs integral against adaptive Gauss-Kronrod.
  const int N = 30;
  const DirichletPoly ones(std::vector<cplx>(N, 1.0));
  const InequalityReport r = weighted_poly_check(ones, power_weight(0.3, N), 0.0);
  CHECK(r.pass);
  double lhs = 0.0;
  for (int n = 1; n <= N; ++n) lhs += std::pow(n, -0.3);
  CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-13));
  auto g = [&](double t) { return std::abs(naive_A(ones.coeffs(), cplx(0.0, t))) / (1.0 + t * t); };
  double err = 0.0, I = 0.0;
  for (int k = -1000; k < 1000; k += 50) I += GK::integrate(g, k, k + 50, 20, 1e-12, &err);
  const double b = constant_b().b;
  const double rhs1 = b / kTwoPi * (std::log(double(N)) + 2.0) * I;
  const double got = r.extra.at("l1").at("rhs").get<double>();
  CHECK(got <= rhs1 * (1 + 1e-9));
  CHECK(got >= rhs1 * (1 - 1e-4));
  MESSAGE("weighted all-ones ratio " << r.ratio);

  // The density-proof instantiation: t0 = 2 pi K^2, a_n = n^{-alpha}.
  const int K = 10;
  std::vector<cplx> a(K);
  for (int n = 1; n <= K; ++n) a[n - 1] = std::pow(double(n), -0.6);
  const InequalityReport d = weighted_poly_check(DirichletPoly(a), power_weight(0.3, K), kTwoPi * K * K);
  CHECK(d.pass);
  MESSAGE("weighted density-instance ratio " << d.ratio);

  CHECK_THROWS_AS(weighted_poly_check(ones, power_weight(2.0, N), 0.0), PreconditionError);
}

TEST_CASE("large values") {
  CHECK(large_values_constant(4.0) / kPi == doctest::Approx(24.97621).epsilon(1e-3 / 25));
  CHECK(large_values_constant(4.0) < 25.0 * kPi);
  CHECK(large_values_constant(100.0) < large_values_constant(4.0));

  SeparatedSet one{{{0.0, 1.0}}, 0.5, 4.0};
  const InequalityReport r1 = large_values_check(DirichletPoly({1.0}), one);
  CHECK(r1.lhs <= 1.0);
  CHECK(r1.pass);

  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const int N = std::uniform_int_distribution<int>(1, 200)(rng);
    const int J = std::uniform_int_distribution<int>(1, 50)(rng);
    const DirichletPoly p = random_poly(N, rng);
    const SeparatedSet S = random_separated_set(J, 0.6, 100.0, rng);
    const InequalityReport r = large_values_check(p, S);
    CHECK(r.pass);
    // Same sum by the naive evaluator.
    double lhs = 0.0;
    for (const auto& [s, t] : S.points) lhs += std::norm(naive_A(p.coeffs(), cplx(s, t)));
    CHECK(std::abs(lhs - r.lhs) < 1e-9 * (1.0 + lhs));
  }

  SeparatedSet bad{{{0.0, 1.0}}, 0.7, 10.0};
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("Delta + Delta^2"), PreconditionError);
  bad = {{{0.0, 1.0}}, 0.5, 3.0};
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("T >= 4"), PreconditionError);
  bad = {{{0.0, 1.0}, {0.1, 1.5}}, 0.5, 10.0};
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("|t_j - t_j'|"), PreconditionError);
  bad = {{{0.6, 1.0}}, 0.5, 10.0};
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("sigma"), PreconditionError);
}

TEST_CASE("random separated sets respect their invariants") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const double T = std::uniform_real_distribution<double>(4.0, 300.0)(rng);
    const int J = std::uniform_int_distribution<int>(1, int(std::floor(T)))(rng);
    CHECK_NOTHROW(random_separated_set(J, 0.5, T, rng).validate());
  }
}

TEST_CASE("suites are independent of the worker count") {
  for (const std::string& name : inequality_suite_names()) {
    const int trials = name == "weighted" ? 8 : 40;
    const SuiteResult a = run_inequality_suite(name, trials, 99, 1);
    const SuiteResult b = run_inequality_suite(name, trials, 99, 4);
    CHECK(a.failures == 0);
    CHECK(a.worst.ratio == b.worst.ratio);
    CHECK(a.worst.worst_point == b.worst.worst_point);
  }
  CHECK_THROWS_AS(run_inequality_suite("nope", 1, 0), DomainError);
}
