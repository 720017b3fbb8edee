#pragma once

// Dirichlet polynomials: exact mean values, Montgomery's bilinear
// inequality, the kernel-sum lemma, the smooth-weight bounds and the
// well-separated large-values inequality, plus seeded random suites.

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "raux/numerics.hpp"
#include "raux/report.hpp"
#include "raux/smooth_ext.hpp"

namespace raux {

class DirichletPoly {
 public:
  // a_1 .. a_N; throws DomainError when empty.
  explicit DirichletPoly(std::vector<cplx> coeffs);

  std::size_t N() const { return coeffs_.size(); }
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  // A(s) = sum a_n n^{-s}.
  cplx eval(cplx s) const;
  double l2_sq() const;           // sum |a_n|^2
  double weighted_l2_sq() const;  // sum n |a_n|^2
  double l1() const;              // sum |a_n|, a bound for sup_t |A(it)|
  // a_n -> a_n n^{-iU}
  DirichletPoly shifted(double U) const;

  std::span<const double> log_n() const { return log_n_; }
  std::span<const double> re() const { return re_; }
  std::span<const double> im() const { return im_; }

 private:
  std::vector<cplx> coeffs_;
  std::vector<double> log_n_, re_, im_;
};

struct SeparatedSet {
  std::vector<std::pair<double, double>> points;  // (sigma_j, t_j)
  double Delta = 0.0;
  double T = 0.0;
  // Throws PreconditionError naming the first violated condition.
  void validate() const;
};

// int_U^{U+T} |A(it)|^2 dt in closed form.
double mean_value_exact(const DirichletPoly& p, double U, double T);
// (T + 4pi/3) sum |a_n|^2 + (8pi/3) sum n |a_n|^2
double mean_value_bound(const DirichletPoly& p, double T);
InequalityReport mean_value_check(const DirichletPoly& p, double U, double T);

inline constexpr double kMontgomeryConstant = 1.5 * kPi;
// pi sqrt(1 + (2/3) sqrt(6/5))
double preissman_constant();

// |sum_{m != n} x_m y_n / (lambda_m - lambda_n)| against
// C (sum |x|^2/delta)^{1/2} (sum |y|^2/delta)^{1/2}. The report carries the
// 3pi/2 instance; extra["preissman"] holds the sharper one, and pass needs
// both. DegenerateError if two lambdas coincide.
InequalityReport hilbert_bilinear_check(const std::vector<cplx>& x, const std::vector<cplx>& y,
                                        const std::vector<double>& lambda);

inline double pi_coth_pi() { return kPi / std::tanh(kPi); }
// 1/((m-1)^2 T^2) + arctan((m-1)T) - arctan((m-2)T), valid for
// mT <= t <= (m+1)T or -mT <= t <= -(m-1)T, m >= 2.
double kernel_far_band_bound(int m, double T);
// Band index m >= 2 of t, or 0 when t is within [-T, 2T).
int kernel_far_band(double t, double T);
double kernel_sum(double t, const std::vector<double>& tks);
// Checks pi coth pi always and the far-band bound when it applies.
// PreconditionError if some tk is outside [0, T] or two are closer than 1.
InequalityReport kernel_sum_check(double t, const std::vector<double>& tks, double T);

// |sum a_n f(n) n^{-i t0}| against the L1 form
// (b/2pi)(log N + 2) int |A(i(t0 + t))| dt/(1 + t^2) and the L2 form
// (b/2 sqrt(pi))(log N + 2)(int |A|^2 dt/(1 + t^2))^{1/2}. The integrals run
// over |t| <= 1000 and lose their quadrature error estimate, so the rhs used
// is a lower estimate of the true one. extra["l1"], extra["l2"] hold both
// instances; the top-level fields are the worse of the two.
InequalityReport weighted_poly_check(const DirichletPoly& p, const WeightFn& f, double t0);

// (b^2/4pi)(3 pi coth pi + 2 zeta(2)/T^2 + pi); below 25 pi for T >= 4.
double large_values_constant(double T);
InequalityReport large_values_check(const DirichletPoly& p, const SeparatedSet& S);

// Coefficients uniform on the closed unit disk.
DirichletPoly random_poly(std::size_t N, std::mt19937_64& rng);
// J points on a jittered lattice of spacing T/J (jitter in [0, T/J - 1]),
// sigma uniform on [0, Delta]. Requires J <= T.
SeparatedSet random_separated_set(std::size_t J, double Delta, double T, std::mt19937_64& rng);

struct SuiteResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  InequalityReport worst;  // largest ratio seen
  nlohmann::json to_json() const;
};

// Randomized property suites: "meanvalue", "bilinear", "kernel", "weighted",
// "largevalues", and "mellin" (the Mellin-transform bound for extended
// weights, from smooth_ext). Instance i draws from its own generator seeded by
// (seed, i), so results do not depend on jobs.
SuiteResult run_inequality_suite(const std::string& name, int trials, std::uint64_t seed, int jobs = 1);
const std::vector<std::string>& inequality_suite_names();

}  // namespace raux
