#include <cmath>

#include "raux/kernels.hpp"

namespace raux::kernels::scalar {

SumResult dirichlet_sum(std::span<const double> log_n, std::span<const double> c_re,
                        std::span<const double> c_im, cplx s) {
  const bool unit = c_re.empty();
  CompensatedSum re, im;
  for (std::size_t k = 0; k < log_n.size(); ++k) {
    const double mag = std::exp(-s.real() * log_n[k]);
    const double ph = -s.imag() * log_n[k];
    double tr = mag * std::cos(ph);
    double ti = mag * std::sin(ph);
    if (!unit) {
      const double r = c_re[k] * tr - c_im[k] * ti;
      ti = c_re[k] * ti + c_im[k] * tr;
      tr = r;
    }
    re.add(tr);
    im.add(ti);
  }
  return {{re.value(), im.value()}, re.abs_total() + im.abs_total()};
}

double kernel_sum(std::span<const double> tk, double t) {
  CompensatedSum acc;
  for (double x : tk) {
    const double d = t - x;
    acc.add(1.0 / (1.0 + d * d));
  }
  return acc.value();
}

double mean_value_cross(std::span<const double> log_n, std::span<const double> a_re,
                        std::span<const double> a_im, double T) {
  CompensatedSum acc;
  const std::size_t n = log_n.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double th = 0.5 * T * (log_n[j] - log_n[i]);
      const double pr = a_re[i] * a_re[j] + a_im[i] * a_im[j];
      const double pi = a_im[i] * a_re[j] - a_re[i] * a_im[j];
      const double sn = std::sin(th);
      acc.add((pr * std::cos(th) - pi * sn) * sn / th);
    }
  }
  return 2.0 * T * acc.value();
}

cplx bilinear_offdiag(std::span<const double> x_re, std::span<const double> x_im,
                      std::span<const double> y_re, std::span<const double> y_im,
                      std::span<const double> lambda) {
  CompensatedSum re, im;
  const std::size_t n = lambda.size();
  for (std::size_t m = 0; m < n; ++m) {
    CompensatedSum ir, ii;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == m) continue;
      const double w = 1.0 / (lambda[m] - lambda[k]);
      ir.add(y_re[k] * w);
      ii.add(y_im[k] * w);
    }
    const double sr = ir.value(), si = ii.value();
    re.add(x_re[m] * sr - x_im[m] * si);
    im.add(x_re[m] * si + x_im[m] * sr);
  }
  return {re.value(), im.value()};
}

}  // namespace raux::kernels::scalar
