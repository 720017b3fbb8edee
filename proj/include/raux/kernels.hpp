#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference
// implementation (libm transcendental calls, Neumaier summation) and an
// AVX2+FMA variant (polynomial exp/sincos, per-lane Kahan summation). The
// public entry points dispatch at runtime; tests check the two agree.

#include <span>
#include <string_view>

#include "raux/numerics.hpp"

namespace raux::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
bool isa_supported(Isa isa);
// Best supported ISA, unless overridden by set_isa() or the environment
// variable RAUX_ISA=scalar.
Isa active_isa();
void set_isa(Isa isa);  // throws DomainError if unsupported

struct SumResult {
  cplx value;
  double abs_total = 0.0;  // sum of |terms|, scale for roundoff estimates
};

// sum_n c_n exp(-s * log_n[n]). Empty coefficient spans mean c_n = 1.
SumResult dirichlet_sum(std::span<const double> log_n, std::span<const double> c_re,
                        std::span<const double> c_im, cplx s);

// sum_k 1 / (1 + (t - tk[k])^2)
double kernel_sum(std::span<const double> tk, double t);

// 2 T sum_{n<m} Re(a_n conj(a_m) e^{i theta}) sin(theta)/theta with
// theta = T (log_n[m] - log_n[n]) / 2: the off-diagonal part of the exact
// mean value of |sum a_n n^{-it}|^2 over [0, T].
double mean_value_cross(std::span<const double> log_n, std::span<const double> a_re,
                        std::span<const double> a_im, double T);

// sum_{m != n} x_m y_n / (lambda_m - lambda_n)
cplx bilinear_offdiag(std::span<const double> x_re, std::span<const double> x_im,
                      std::span<const double> y_re, std::span<const double> y_im,
                      std::span<const double> lambda);

#define RAUX_KERNEL_DECLS                                                                   \
  SumResult dirichlet_sum(std::span<const double>, std::span<const double>,              \
                          std::span<const double>, cplx);                                \
  double kernel_sum(std::span<const double>, double);                                    \
  double mean_value_cross(std::span<const double>, std::span<const double>,              \
                          std::span<const double>, double);                              \
  cplx bilinear_offdiag(std::span<const double>, std::span<const double>,                \
                        std::span<const double>, std::span<const double>,                \
                        std::span<const double>);

namespace scalar { RAUX_KERNEL_DECLS }
namespace avx2 {
RAUX_KERNEL_DECLS
bool compiled();
}

#undef RAUX_KERNEL_DECLS

}  // namespace raux::kernels
