#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "raux/errors.hpp"
#include "raux/kernels.hpp"

namespace raux::kernels {

namespace {

Isa detect() {
  const char* env = std::getenv("RAUX_ISA");
  if (env && std::strcmp(env, "scalar") == 0) return Isa::scalar;
  return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool isa_supported(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
  return avx2::compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa))
    throw DomainError("instruction set not supported here: " + std::string(to_string(isa)));
  current().store(isa, std::memory_order_relaxed);
}

SumResult dirichlet_sum(std::span<const double> log_n, std::span<const double> c_re,
                        std::span<const double> c_im, cplx s) {
  return active_isa() == Isa::avx2 ? avx2::dirichlet_sum(log_n, c_re, c_im, s)
                                   : scalar::dirichlet_sum(log_n, c_re, c_im, s);
}

double kernel_sum(std::span<const double> tk, double t) {
  return active_isa() == Isa::avx2 ? avx2::kernel_sum(tk, t) : scalar::kernel_sum(tk, t);
}

double mean_value_cross(std::span<const double> log_n, std::span<const double> a_re,
                        std::span<const double> a_im, double T) {
  return active_isa() == Isa::avx2 ? avx2::mean_value_cross(log_n, a_re, a_im, T)
                                   : scalar::mean_value_cross(log_n, a_re, a_im, T);
}

cplx bilinear_offdiag(std::span<const double> x_re, std::span<const double> x_im,
                      std::span<const double> y_re, std::span<const double> y_im,
                      std::span<const double> lambda) {
  return active_isa() == Isa::avx2 ? avx2::bilinear_offdiag(x_re, x_im, y_re, y_im, lambda)
                                   : scalar::bilinear_offdiag(x_re, x_im, y_re, y_im, lambda);
}

}  // namespace raux::kernels
