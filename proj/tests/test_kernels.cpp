#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "raux/kernels.hpp"

using namespace raux;
namespace K = raux::kernels;

namespace {

struct Data {
  std::vector<double> logn, re, im, lambda;
};

Data make(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Data d;
  for (std::size_t k = 0; k < n; ++k) {
    d.logn.push_back(std::log(double(k + 1)));
    double a, b;
    do {
      a = u(rng);
      b = u(rng);
    } while (a * a + b * b > 1.0);
    d.re.push_back(a);
    d.im.push_back(b);
    d.lambda.push_back(3.0 * double(k) + u(rng));
  }
  return d;
}

}  // namespace

TEST_CASE("dispatch reports a supported ISA") {
  CHECK(K::isa_supported(K::Isa::scalar));
  CHECK(K::isa_supported(K::active_isa()));
  MESSAGE("active ISA: " << K::to_string(K::active_isa()));
}

TEST_CASE("dirichlet_sum: scalar kernel matches direct complex arithmetic") {
  const Data d = make(257, 1);
  const cplx s(0.37, 1234.5);
  cplx direct = 0.0;
  for (std::size_t k = 0; k < d.logn.size(); ++k)
    direct += cplx(d.re[k], d.im[k]) * std::pow(double(k + 1), -s);
  const auto r = K::scalar::dirichlet_sum(d.logn, d.re, d.im, s);
  CHECK(std::abs(r.value - direct) < 1e-11);
  const auto unit = K::scalar::dirichlet_sum(d.logn, {}, {}, cplx(0.0, 0.0));
  CHECK(unit.value.real() == doctest::Approx(257.0));
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  if (!K::isa_supported(K::Isa::avx2)) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
    const Data d = make(n, 100 + n);
    for (cplx s : {cplx(0.5, 14.1), cplx(-3.0, 2.0e5), cplx(2.0, -77.0), cplx(0.0, 0.0),
                   cplx(-60.0, 5000.0)}) {
      const auto a = K::scalar::dirichlet_sum(d.logn, d.re, d.im, s);
      const auto b = K::avx2::dirichlet_sum(d.logn, d.re, d.im, s);
      const double phase_cond = 1.0 + std::abs(s.imag()) * d.logn.back();
      CHECK(std::abs(a.value - b.value) <= 64.0 * 2.2e-16 * phase_cond * a.abs_total);
      CHECK(b.abs_total == doctest::Approx(a.abs_total).epsilon(1e-12));
      const auto au = K::scalar::dirichlet_sum(d.logn, {}, {}, s);
      const auto bu = K::avx2::dirichlet_sum(d.logn, {}, {}, s);
      CHECK(std::abs(au.value - bu.value) <= 64.0 * 2.2e-16 * phase_cond * au.abs_total);
    }
    const double t = d.lambda.empty() ? 0.0 : d.lambda[n / 2] + 0.3;
    CHECK(K::avx2::kernel_sum(d.lambda, t) ==
          doctest::Approx(K::scalar::kernel_sum(d.lambda, t)).epsilon(1e-14));
    for (double T : {1.0, 37.0, 1e4}) {
      const double a = K::scalar::mean_value_cross(d.logn, d.re, d.im, T);
      const double b = K::avx2::mean_value_cross(d.logn, d.re, d.im, T);
      const double scale = 2.0 * T * double(n) * double(n);
      CHECK(std::abs(a - b) <= 1e-13 * scale * (1.0 + T * d.logn.back()));
    }
    const cplx a = K::scalar::bilinear_offdiag(d.re, d.im, d.im, d.re, d.lambda);
    const cplx b = K::avx2::bilinear_offdiag(d.re, d.im, d.im, d.re, d.lambda);
    CHECK(std::abs(a - b) <= 1e-12 * (1.0 + double(n)));
  }
}

TEST_CASE("AVX2 transcendental paths hold across argument ranges") {
  if (!K::isa_supported(K::Isa::avx2)) return;
  // Unit coefficients at a single frequency exercise exp and sincos directly.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ul(0.0, 10.0), us(-70.0, 70.0), ut(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const std::vector<double> l = {ul(rng), ul(rng), ul(rng), ul(rng)};
    const cplx s(us(rng) / 10.0, ut(rng));
    const auto a = K::scalar::dirichlet_sum(l, {}, {}, s);
    const auto b = K::avx2::dirichlet_sum(l, {}, {}, s);
    const double cond = 1.0 + std::abs(s.imag()) * 10.0;
    CHECK(std::abs(a.value - b.value) <= 16.0 * 2.2e-16 * cond * a.abs_total);
  }
}

TEST_CASE("mean_value_cross: small case by hand") {
  // n = 1, 2 with a = (1, 1): 2T Re(e^{i th}) sin(th)/th, th = T log2 / 2.
  const std::vector<double> l = {0.0, std::log(2.0)}, re = {1.0, 1.0}, im = {0.0, 0.0};
  const double T = 3.0, th = T * std::log(2.0) / 2.0;
  const double expect = 2.0 * T * std::cos(th) * std::sin(th) / th;
  CHECK(K::mean_value_cross(l, re, im, T) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("set_isa switches the dispatch target") {
  const K::Isa before = K::active_isa();
  K::set_isa(K::Isa::scalar);
  CHECK(K::active_isa() == K::Isa::scalar);
  K::set_isa(before);
  CHECK(K::active_isa() == before);
}
