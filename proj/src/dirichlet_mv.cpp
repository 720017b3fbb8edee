#include "raux/dirichlet_mv.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "raux/errors.hpp"
#include "raux/kernels.hpp"
#include "raux/quadrature.hpp"

namespace raux {

namespace {

// Separation is checked up to rounding of the stored t values.
constexpr double kGapSlack = 1e-12;

std::string fmt(std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream o;
  o.precision(10);
  bool first = true;
  for (const auto& [k, v] : kv) {
    if (!first) o << ' ';
    o << k << '=' << v;
    first = false;
  }
  return o.str();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

long uniform_int(std::mt19937_64& rng, long lo, long hi) {
  return std::uniform_int_distribution<long>(lo, hi)(rng);
}

// Two integrals sharing one set of nodes.
struct Pair {
  double a = 0.0, b = 0.0;
  Pair& operator+=(const Pair& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
  friend Pair operator*(double w, const Pair& q) { return {w * q.a, w * q.b}; }
};

cplx unit_disk(std::mt19937_64& rng) {
  const double r = std::sqrt(uniform(rng, 0.0, 1.0));
  const double a = uniform(rng, 0.0, kTwoPi);
  return std::polar(r, a);
}

}  // namespace

DirichletPoly::DirichletPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError("Dirichlet polynomial needs at least one coefficient");
  const std::size_t n = coeffs_.size();
  log_n_.resize(n);
  re_.resize(n);
  im_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    log_n_[k] = std::log(double(k + 1));
    re_[k] = coeffs_[k].real();
    im_[k] = coeffs_[k].imag();
  }
}

cplx DirichletPoly::eval(cplx s) const { return kernels::dirichlet_sum(log_n_, re_, im_, s).value; }

double DirichletPoly::l2_sq() const {
  CompensatedSum acc;
  for (const cplx& a : coeffs_) acc.add(std::norm(a));
  return acc.value();
}

double DirichletPoly::weighted_l2_sq() const {
  CompensatedSum acc;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) acc.add(double(k + 1) * std::norm(coeffs_[k]));
  return acc.value();
}

double DirichletPoly::l1() const {
  CompensatedSum acc;
  for (const cplx& a : coeffs_) acc.add(std::abs(a));
  return acc.value();
}

DirichletPoly DirichletPoly::shifted(double U) const {
  std::vector<cplx> c(coeffs_.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = coeffs_[k] * std::polar(1.0, -U * log_n_[k]);
  return DirichletPoly(std::move(c));
}

void SeparatedSet::validate() const {
  if (!(T >= 4.0)) throw PreconditionError("separated set: T >= 4 violated (T=" + std::to_string(T) + ")");
  if (!(Delta >= 0.0 && Delta + Delta * Delta <= 1.0))
    throw PreconditionError("separated set: Delta + Delta^2 <= 1 violated (Delta=" + std::to_string(Delta) + ")");
  std::vector<double> ts;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto [s, t] = points[j];
    if (!(s >= 0.0 && s <= Delta))
      throw PreconditionError("separated set: point " + std::to_string(j) + " has sigma outside [0, Delta]");
    if (!(t >= 0.0 && t <= T))
      throw PreconditionError("separated set: point " + std::to_string(j) + " has t outside [0, T]");
    ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  for (std::size_t j = 1; j < ts.size(); ++j)
    if (ts[j] - ts[j - 1] < 1.0 - kGapSlack)
      throw PreconditionError("separated set: |t_j - t_j'| >= 1 violated near t=" + std::to_string(ts[j]));
}

double mean_value_exact(const DirichletPoly& p, double U, double T) {
  if (!(T > 0.0)) throw DomainError("mean value needs T > 0");
  const DirichletPoly q = U == 0.0 ? p : p.shifted(U);
  return T * q.l2_sq() + kernels::mean_value_cross(q.log_n(), q.re(), q.im(), T);
}

double mean_value_bound(const DirichletPoly& p, double T) {
  return (T + 4.0 * kPi / 3.0) * p.l2_sq() + (8.0 * kPi / 3.0) * p.weighted_l2_sq();
}

InequalityReport mean_value_check(const DirichletPoly& p, double U, double T) {
  InequalityReport r = InequalityReport::make("mean_value", mean_value_exact(p, U, T), mean_value_bound(p, T),
                                              fmt({{"N", double(p.N())}, {"U", U}, {"T", T}}));
  return r;
}

double preissman_constant() { return kPi * std::sqrt(1.0 + 2.0 / 3.0 * std::sqrt(6.0 / 5.0)); }

InequalityReport hilbert_bilinear_check(const std::vector<cplx>& x, const std::vector<cplx>& y,
                                        const std::vector<double>& lambda) {
  const std::size_t n = lambda.size();
  if (x.size() != n || y.size() != n) throw DomainError("bilinear check: x, y, lambda sizes differ");
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return lambda[a] < lambda[b]; });
  std::vector<double> delta(n, INFINITY);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double d = lambda[order[k + 1]] - lambda[order[k]];
    if (!(d > 0.0)) throw DegenerateError("bilinear check: two lambdas coincide");
    delta[order[k]] = std::min(delta[order[k]], d);
    delta[order[k + 1]] = std::min(delta[order[k + 1]], d);
  }
  std::vector<double> xr(n), xi(n), yr(n), yi(n);
  CompensatedSum sx, sy;
  for (std::size_t k = 0; k < n; ++k) {
    xr[k] = x[k].real();
    xi[k] = x[k].imag();
    yr[k] = y[k].real();
    yi[k] = y[k].imag();
    // A lone point has no partner: delta = inf and its terms vanish.
    sx.add(std::norm(x[k]) / delta[k]);
    sy.add(std::norm(y[k]) / delta[k]);
  }
  const double lhs = std::abs(kernels::bilinear_offdiag(xr, xi, yr, yi, lambda));
  const double base = std::sqrt(sx.value()) * std::sqrt(sy.value());
  const std::string where = fmt({{"N", double(n)}});
  InequalityReport r = InequalityReport::make("hilbert_bilinear", lhs, kMontgomeryConstant * base, where);
  const InequalityReport p = InequalityReport::make("hilbert_bilinear_preissman", lhs, preissman_constant() * base, where);
  r.extra["preissman"] = p.to_json();
  r.pass = r.pass && p.pass;
  return r;
}

double kernel_far_band_bound(int m, double T) {
  if (m < 2) throw DomainError("far band needs m >= 2");
  const double a = (m - 1) * T;
  return 1.0 / (a * a) + std::atan(a) - std::atan((m - 2) * T);
}

int kernel_far_band(double t, double T) {
  if (t >= 2.0 * T) return static_cast<int>(std::floor(t / T));
  if (t <= -2.0 * T) return static_cast<int>(std::ceil(-t / T));
  if (t < -T) return 2;
  return 0;
}

double kernel_sum(double t, const std::vector<double>& tks) { return kernels::kernel_sum(tks, t); }

InequalityReport kernel_sum_check(double t, const std::vector<double>& tks, double T) {
  std::vector<double> s = tks;
  std::sort(s.begin(), s.end());
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (!(s[k] >= 0.0 && s[k] <= T)) throw PreconditionError("kernel sum: point outside [0, T]");
    if (k > 0 && s[k] - s[k - 1] < 1.0 - kGapSlack) throw PreconditionError("kernel sum: consecutive points closer than 1");
  }
  const double sum = kernel_sum(t, s);
  const std::string where = fmt({{"t", t}, {"T", T}, {"n", double(s.size())}});
  InequalityReport r = InequalityReport::make("kernel_sum", sum, pi_coth_pi(), where);
  const int m = kernel_far_band(t, T);
  if (m >= 2) {
    InequalityReport far = InequalityReport::make("kernel_sum_far_band", sum, kernel_far_band_bound(m, T), where);
    far.extra["m"] = m;
    r.extra["far_band"] = far.to_json();
    r.absorb(far);
  }
  return r;
}

InequalityReport weighted_poly_check(const DirichletPoly& p, const WeightFn& f, double t0) {
  const long N = static_cast<long>(p.N());
  // Admissibility of f; extend_weight throws PreconditionError otherwise.
  if (N >= 2)
    extend_weight(f, N);
  else if (!(std::abs(f.eval(1.0, 0)) <= 1.0 && std::abs(f.eval(1.0, 1)) <= 1.0 && std::abs(f.eval(1.0, 2)) <= 1.0))
    throw PreconditionError("weighted_poly_check: f violates the derivative bounds at x = 1");

  std::vector<cplx> fa(p.coeffs());
  for (long n = 1; n <= N; ++n) fa[n - 1] *= f.eval(double(n), 0);
  const double lhs = std::abs(DirichletPoly(std::move(fa)).eval(cplx(0.0, t0)));

  // |A|/(1+t^2) and |A|^2/(1+t^2) on |t| <= 1000: fine panels near 0, where
  // the weight lives, coarser beyond; order 16 vs order 8 for the error.
  constexpr double kCut = 1000.0;
  const std::vector<double> breaks = {-kCut, -50.0, 50.0, kCut};
  auto integrand = [&](double t) {
    const double v = std::abs(p.eval(cplx(0.0, t0 + t)));
    const double w = 1.0 / (1.0 + t * t);
    return Pair{v * w, v * v * w};
  };
  auto run = [&](int order) {
    Pair total;
    const double widths[3] = {0.5, 0.25, 0.5};
    for (int b = 0; b < 3; ++b) {
      const double seg[2] = {breaks[b], breaks[b + 1]};
      total += integrate_composite(integrand, seg, widths[b], order);
    }
    return total;
  };
  const Pair fine = run(16), coarse = run(8);
  const double err1 = std::abs(fine.a - coarse.a), err2 = std::abs(fine.b - coarse.b);
  if (err1 > 1e-2 * fine.a || err2 > 1e-2 * fine.b)
    throw ConvergenceError("weighted_poly_check: quadrature estimates disagree");

  const double tail = kPi - 2.0 * std::atan(kCut);
  const double b = constant_b().b;
  const double L = std::log(double(N)) + 2.0;
  const double rhs1 = b / kTwoPi * L * std::max(0.0, fine.a - err1);
  const double rhs2 = b / (2.0 * std::sqrt(kPi)) * L * std::sqrt(std::max(0.0, fine.b - err2));

  const std::string where = fmt({{"N", double(N)}, {"t0", t0}});
  InequalityReport r1 = InequalityReport::make("weighted_poly_l1", lhs, rhs1, where);
  InequalityReport r2 = InequalityReport::make("weighted_poly_l2", lhs, rhs2, where);
  r1.extra = {{"quadrature_err", err1}, {"tail_bound", p.l1() * tail}};
  r2.extra = {{"quadrature_err", err2}, {"tail_bound", p.l1() * p.l1() * tail}};
  InequalityReport r = r1;
  r.absorb(r2);
  r.name = "weighted_poly";
  r.extra = {{"l1", r1.to_json()}, {"l2", r2.to_json()}, {"weight", f.description}};
  return r;
}

double large_values_constant(double T) {
  const double b = constant_b().b;
  const double zeta2 = kPi * kPi / 6.0;
  return b * b / (4.0 * kPi) * (3.0 * pi_coth_pi() + 2.0 * zeta2 / (T * T) + kPi);
}

InequalityReport large_values_check(const DirichletPoly& p, const SeparatedSet& S) {
  S.validate();
  CompensatedSum acc;
  for (const auto& [s, t] : S.points) acc.add(std::norm(p.eval(cplx(s, t))));
  const double L = std::log(double(p.N())) + 2.0;
  const double H = mean_value_bound(p, S.T);
  InequalityReport r = InequalityReport::make(
      "large_values", acc.value(), 25.0 * kPi * L * L * H,
      fmt({{"N", double(p.N())}, {"J", double(S.points.size())}, {"T", S.T}, {"Delta", S.Delta}}));
  r.extra = {{"sharp_rhs", large_values_constant(S.T) * L * L * H}};
  return r;
}

DirichletPoly random_poly(std::size_t N, std::mt19937_64& rng) {
  std::vector<cplx> c(N);
  for (auto& a : c) a = unit_disk(rng);
  return DirichletPoly(std::move(c));
}

SeparatedSet random_separated_set(std::size_t J, double Delta, double T, std::mt19937_64& rng) {
  if (J == 0 || double(J) > T) throw DomainError("random_separated_set needs 1 <= J <= T");
  SeparatedSet S;
  S.Delta = Delta;
  S.T = T;
  const double step = T / double(J);
  for (std::size_t j = 0; j < J; ++j) {
    // The margin keeps rounding from pulling neighbours below distance 1.
    const double t = j * step + uniform(rng, 0.0, std::max(0.0, step - 1.0 - 1e-9));
    S.points.emplace_back(uniform(rng, 0.0, Delta), std::min(t, T));
  }
  return S;
}

nlohmann::json SuiteResult::to_json() const {
  return {{"suite", name}, {"trials", trials}, {"failures", failures}, {"worst", worst.to_json()}};
}

const std::vector<std::string>& inequality_suite_names() {
  static const std::vector<std::string> names = {"meanvalue", "bilinear", "kernel", "weighted", "largevalues", "mellin"};
  return names;
}

namespace {

const double kGoldenDelta = (std::sqrt(5.0) - 1.0) / 2.0;  // Delta + Delta^2 = 1

InequalityReport meanvalue_instance(std::mt19937_64& rng) {
  const long N = uniform_int(rng, 1, 100);
  const double U = uniform(rng, -1000.0, 1000.0);
  const double T = std::pow(10.0, uniform(rng, -1.0, 3.0));
  if (uniform_int(rng, 0, 3) == 0) {
    // Resonant: all terms in phase at the middle of the window.
    const double tau = U + 0.5 * T;
    std::vector<cplx> c(N);
    for (long n = 1; n <= N; ++n) c[n - 1] = std::polar(1.0, tau * std::log(double(n)));
    return mean_value_check(DirichletPoly(std::move(c)), U, T);
  }
  return mean_value_check(random_poly(N, rng), U, T);
}

InequalityReport bilinear_instance(std::mt19937_64& rng) {
  const long N = uniform_int(rng, 1, 50);
  std::vector<double> lambda(N);
  if (uniform_int(rng, 0, 1) == 0) {
    for (long n = 1; n <= N; ++n) lambda[n - 1] = std::log(double(n));
  } else {
    double acc = uniform(rng, -10.0, 10.0);
    for (auto& l : lambda) {
      l = acc;
      acc += std::pow(10.0, uniform(rng, -3.0, 1.0));
    }
    std::shuffle(lambda.begin(), lambda.end(), rng);
  }
  std::vector<cplx> x(N), y(N);
  for (long k = 0; k < N; ++k) {
    x[k] = unit_disk(rng);
    y[k] = unit_disk(rng);
  }
  return hilbert_bilinear_check(x, y, lambda);
}

InequalityReport kernel_instance(std::mt19937_64& rng) {
  const double T = uniform(rng, 2.5, 60.0);
  std::vector<double> tks;
  if (uniform_int(rng, 0, 3) == 0) {
    // Densest packing.
    const double off = uniform(rng, 0.0, T - std::floor(T));
    for (double t = off; t <= T; t += 1.0) tks.push_back(t);
  } else {
    const long J = uniform_int(rng, 1, static_cast<long>(std::floor(T)));
    for (const auto& pt : random_separated_set(J, 0.0, T, rng).points) tks.push_back(pt.second);
  }
  return kernel_sum_check(uniform(rng, -4.0 * T, 5.0 * T), tks, T);
}

InequalityReport weighted_instance(std::mt19937_64& rng) {
  const long N = uniform_int(rng, 1, 40);
  const double sigma = uniform(rng, 0.0, kGoldenDelta);
  const double t0 = uniform(rng, -500.0, 500.0);
  return weighted_poly_check(random_poly(N, rng), power_weight(sigma, N), t0);
}

InequalityReport largevalues_instance(std::mt19937_64& rng) {
  const long N = uniform_int(rng, 1, 200);
  const double T = uniform(rng, 4.0, 200.0);
  const long J = uniform_int(rng, 1, std::min<long>(50, static_cast<long>(std::floor(T))));
  const double Delta = uniform(rng, 0.0, kGoldenDelta);
  const DirichletPoly p = random_poly(N, rng);
  return large_values_check(p, random_separated_set(J, Delta, T, rng));
}

// Mellin bound for extended weights: |f| <= 1, |x f'| <= 1, |x^2 f''| <= 1 on [1, N].
InequalityReport mellin_instance(std::mt19937_64& rng) {
  const long N = uniform_int(rng, 2, 300);
  const WeightFn f = uniform(rng, 0.0, 1.0) < 0.5 ? power_weight(uniform(rng, 0.0, kGoldenDelta), N)
                                                  : constant_weight(uniform(rng, -1.0, 1.0), N);
  std::vector<double> ts{0.0, constant_b().a, uniform(rng, 0.0, 50.0), uniform(rng, 0.0, 50.0),
                         uniform(rng, 50.0, 500.0)};
  return mellin_bound_check(extend_weight(f, N), N, ts);
}

}  // namespace

SuiteResult run_inequality_suite(const std::string& name, int trials, std::uint64_t seed, int jobs) {
  InequalityReport (*make)(std::mt19937_64&) = nullptr;
  if (name == "meanvalue") make = meanvalue_instance;
  else if (name == "bilinear") make = bilinear_instance;
  else if (name == "kernel") make = kernel_instance;
  else if (name == "weighted") make = weighted_instance;
  else if (name == "largevalues") make = largevalues_instance;
  else if (name == "mellin") make = mellin_instance;
  else throw DomainError("unknown inequality suite: " + name);

  std::vector<InequalityReport> results(std::max(trials, 0));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (int i = next++; i < trials; i = next++) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(i)};
      std::mt19937_64 rng(seq);
      try {
        results[i] = make(rng);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
    }
  };
  jobs = std::max(1, std::min(jobs, trials));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  SuiteResult out;
  out.name = name;
  out.trials = trials;
  for (int i = 0; i < trials; ++i) {
    if (!results[i].pass) ++out.failures;
    if (i == 0)
      out.worst = results[i];
    else
      out.worst.absorb(results[i]);
  }
  out.worst.pass = out.failures == 0;
  out.worst.name = name;
  return out;
}

}  // namespace raux
