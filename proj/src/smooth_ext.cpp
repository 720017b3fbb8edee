#include "raux/smooth_ext.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "raux/errors.hpp"
#include "raux/quadrature.hpp"

namespace raux {

namespace {

CapPoly make_cap(int index, std::initializer_list<long long> tail, long long den) {
  CapPoly p;
  p.index = index;
  p.coeffs.assign(3, Rational(0));
  for (long long c : tail) p.coeffs.emplace_back(c, den);
  return p;
}

double falling(int k, int d) {
  double f = 1.0;
  for (int j = 0; j < d; ++j) f *= k - j;
  return f;
}

// Convex combination over the cube {+-1}^3 of +-vertex(e1 e2, e1 e3).
Cap combine(const std::array<CapPoly, 4>& family, double a, double b, double d, int sign) {
  Cap cap;
  cap.poly.c.assign(10, 0.0);
  for (int mask = 0; mask < 8; ++mask) {
    const int e1 = (mask & 1) ? -1 : 1, e2 = (mask & 2) ? -1 : 1, e3 = (mask & 4) ? -1 : 1;
    const double w = (1 + e1 * a) * (1 + e2 * b) * (1 + e3 * d) / 8.0;
    cap.convex_weights[mask] = w;
    if (w == 0.0) continue;
    const int vb = e1 * e2, vd = e1 * e3;
    const int j = (vb > 0 ? 0 : 2) + (vd > 0 ? 0 : 1);
    const Poly v = family[j].to_poly();
    for (std::size_t k = 0; k < v.c.size(); ++k) cap.poly.c[k] += e1 * w * v.c[k];
  }
  const auto n = cap_norms(cap.poly, sign);
  for (int k = 0; k < 3; ++k) cap.bound_cert[k] = n[k].certified;
  return cap;
}

void check_unit(double v, const char* what) {
  if (!(std::abs(v) <= 1.0 + 1e-15))
    throw DomainError(std::string("cap data out of range: |") + what + "| > 1");
}

}  // namespace

double Poly::eval(double x, int deriv) const {
  // Extended precision: the mirror caps have coefficients near 2e5 that
  // cancel to O(1) at x = 1.
  long double acc = 0.0L;
  for (int k = static_cast<int>(c.size()) - 1; k >= deriv; --k)
    acc = acc * x + static_cast<long double>(c[k]) * falling(k, deriv);
  return static_cast<double>(acc);
}

Poly Poly::derivative() const {
  Poly d;
  for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * double(k));
  return d;
}

double Poly::slope_bound() const {
  double s = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) s += double(k) * std::abs(c[k]);
  return s;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
  for (std::size_t k = 0; k < a.c.size(); ++k) r.c[k] += a.c[k];
  for (std::size_t k = 0; k < b.c.size(); ++k) r.c[k] += b.c[k];
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-1.0) * b; }

Poly operator*(double k, const Poly& a) {
  Poly r = a;
  for (double& v : r.c) v *= k;
  return r;
}

Rational CapPoly::eval_exact(Rational x, int deriv) const {
  Rational acc(0);
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= deriv; --k)
    acc = acc * x + coeffs[k] * Rational(static_cast<long long>(falling(k, deriv)));
  return acc;
}

double CapPoly::eval(double x, int deriv) const { return to_poly().eval(x, deriv); }

Poly CapPoly::to_poly() const {
  Poly p;
  for (const Rational& r : coeffs) p.c.push_back(boost::rational_cast<double>(r));
  return p;
}

std::array<CapPoly, 4> cap_polynomials() {
  return {
      make_cap(1, {7, -10, 4}, 1),
      make_cap(2, {6, -8, 3}, 1),
      make_cap(3, {112, -250, 178, 0, -28, -28, 21}, 5),
      make_cap(4, {228, -522, 381, 0, -56, -70, 49}, 10),
  };
}

std::array<CapPoly, 4> mirror_cap_polynomials() {
  // Found by a minimax linear programme over degree-9 polynomials with the
  // prescribed boundary data, then rounded to denominator 100 while keeping
  // every norm below 0.99 of its bound.
  return {
      make_cap(1, {6, -8, 3}, 1),
      make_cap(2, {5, -6, 2}, 1),
      make_cap(3, {4613, -29161, 96123, -178271, 184990, -100532, 22338}, 100),
      make_cap(4, {4782, -31122, 103352, -190953, 196637, -105905, 23309}, 100),
  };
}

SupNorm sup_norm(const Poly& p, int grid) {
  const Poly dp = p.derivative();
  SupNorm out;
  double grid_max = 0.0;
  auto consider = [&](double x) {
    const double v = std::abs(p.eval(x));
    if (v > out.value) {
      out.value = v;
      out.at = x;
    }
  };
  double prev_x = 0.0, prev_d = dp.eval(0.0);
  for (int i = 0; i <= grid; ++i) {
    const double x = double(i) / grid;
    grid_max = std::max(grid_max, std::abs(p.eval(x)));
    consider(x);
    const double d = dp.eval(x);
    if (i > 0 && ((prev_d < 0.0 && d > 0.0) || (prev_d > 0.0 && d < 0.0))) {
      double lo = prev_x, hi = x, flo = prev_d;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = dp.eval(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      consider(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_d = d;
  }
  // Between grid points |p| exceeds its chord by at most h^2/8 sup|p''|;
  // sup|p''| is itself bounded from its grid values plus a slope margin.
  const double h = 1.0 / grid;
  const Poly d2 = dp.derivative();
  double d2max = 0.0;
  for (int i = 0; i <= grid; ++i) d2max = std::max(d2max, std::abs(d2.eval(double(i) / grid)));
  const double curvature = d2max + 0.5 * h * d2.slope_bound();
  out.certified = std::max(out.value, grid_max + h * h / 8.0 * curvature);
  return out;
}

std::array<SupNorm, 3> cap_norms(const Poly& p, int sign) {
  const Poly d1 = p.derivative();
  const Poly d2 = d1.derivative();
  return {sup_norm(p), sup_norm(d1), sup_norm(d2 + double(sign) * d1)};
}

Cap build_cap(double a, double b, double c) {
  check_unit(a, "a");
  check_unit(b, "b");
  check_unit(c - b, "c - b");
  return combine(cap_polynomials(), a, b, c - b, -1);
}

Cap build_mirror_cap(double a, double b, double e) {
  check_unit(a, "a");
  check_unit(b, "b");
  check_unit(e, "e");
  return combine(mirror_cap_polynomials(), a, b, e, +1);
}

WeightFn power_weight(double sigma, long N) {
  WeightFn f;
  f.eval = [sigma](double x, int k) {
    const double v = std::pow(x, -sigma);
    if (k == 0) return v;
    if (k == 1) return -sigma * v / x;
    return sigma * (sigma + 1.0) * v / (x * x);
  };
  f.support_lo = 1.0;
  f.support_hi = double(N);
  f.breaks = {1.0, double(N)};
  const double s = std::abs(sigma);
  f.bound_cert = {1.0, s, s * (s + 1.0)};
  std::ostringstream o;
  o << "x^-" << sigma << " on [1," << N << "]";
  f.description = o.str();
  return f;
}

WeightFn constant_weight(double c, long N) {
  WeightFn f;
  f.eval = [c](double, int k) { return k == 0 ? c : 0.0; };
  f.support_lo = 1.0;
  f.support_hi = double(N);
  f.breaks = {1.0, double(N)};
  f.bound_cert = {std::abs(c), 0.0, 0.0};
  std::ostringstream o;
  o << c << " on [1," << N << "]";
  f.description = o.str();
  return f;
}

WeightFn extend_weight(const WeightFn& f, long N) {
  if (N < 2) throw PreconditionError("extend_weight: N must be >= 2");
  const double L = std::log(double(N));
  constexpr int kGrid = 4096;
  constexpr double kSlack = 1e-12;
  std::array<double, 3> mid{};
  for (int i = 0; i <= kGrid; ++i) {
    const double x = std::exp(L * i / kGrid);
    const double v[3] = {std::abs(f.eval(x, 0)), x * std::abs(f.eval(x, 1)),
                         x * x * std::abs(f.eval(x, 2))};
    static const char* names[3] = {"|f(x)|", "x|f'(x)|", "x^2|f''(x)|"};
    for (int k = 0; k < 3; ++k) {
      if (!(v[k] <= 1.0 + kSlack)) {
        std::ostringstream o;
        o.precision(17);
        o << "extend_weight: " << names[k] << " = " << v[k] << " > 1 at x = " << x;
        throw PreconditionError(o.str());
      }
      mid[k] = std::max(mid[k], v[k]);
    }
  }
  // Log-domain data F(y) = f(e^y) at both ends.
  const double f1 = f.eval(1.0, 0), d1 = f.eval(1.0, 1), s1 = f.eval(1.0, 2);
  const double Nd = double(N);
  const double fN = f.eval(Nd, 0), dN = f.eval(Nd, 1), sN = f.eval(Nd, 2);
  auto clamp1 = [](double v) { return std::clamp(v, -1.0, 1.0); };
  // F(0) = f(1), F'(0) = f'(1), F''(0) = f''(1) + f'(1).
  const Cap left = build_cap(clamp1(f1), clamp1(d1), clamp1(s1) + clamp1(d1));
  // psi(x) = G(L + 1 - x): psi(1) = F(L), psi'(1) = -F'(L), psi'' + psi' = F'' - F' = N^2 f''(N).
  const Cap right = build_mirror_cap(clamp1(fN), clamp1(-Nd * dN), clamp1(Nd * Nd * sN));

  WeightFn g;
  const auto feval = f.eval;
  const Poly lp = left.poly, rp = right.poly;
  g.eval = [feval, lp, rp, L, Nd](double x, int k) -> double {
    if (!(x > 0.0)) return 0.0;
    const double u = std::log(x);
    if (u <= -1.0 || u >= L + 1.0) return 0.0;
    if (x >= 1.0 && x <= Nd) return feval(x, k);
    double G0, G1, G2;
    if (u < 0.0) {
      G0 = lp.eval(1.0 + u, 0);
      G1 = lp.eval(1.0 + u, 1);
      G2 = lp.eval(1.0 + u, 2);
    } else {
      const double y = L + 1.0 - u;
      G0 = rp.eval(y, 0);
      G1 = -rp.eval(y, 1);
      G2 = rp.eval(y, 2);
    }
    if (k == 0) return G0;
    if (k == 1) return G1 / x;
    return (G2 - G1) / (x * x);
  };
  g.support_lo = std::exp(-1.0);
  g.support_hi = std::exp(1.0) * Nd;
  g.breaks = {g.support_lo, 1.0, Nd, g.support_hi};
  for (int k = 0; k < 3; ++k) g.bound_cert[k] = std::max({mid[k], left.bound_cert[k], right.bound_cert[k]});
  g.description = "extension of " + f.description;
  return g;
}

ConstantB constant_b() {
  const double M = 41.0 / 5.0, m = 10.0 / 9.0;
  const double target = M / m;
  double lo = 0.0, hi = 10.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::sqrt(1.0 + mid * mid) < target ? lo : hi) = mid;
  }
  ConstantB r;
  r.a = 0.5 * (lo + hi);
  r.b = m * (1.0 + r.a * r.a);
  if (!(r.b < 8.775)) throw Error("constant_b: b >= 8.775");
  return r;
}

MellinValue mellin_transform(const WeightFn& g, double t) {
  std::vector<double> ub;
  for (double x : g.breaks) ub.push_back(std::log(x));
  const double width = std::min(0.25, 3.0 / std::max(1.0, std::abs(t)));
  auto integrand = [&](double u) { return g.eval(std::exp(u), 0) * std::polar(1.0, t * u); };
  const cplx a = integrate_composite(integrand, ub, width, 16);
  const cplx b = integrate_composite(integrand, ub, width, 32);
  return {b, std::abs(a - b) + 1e-15 * (1.0 + std::abs(b))};
}

double mellin_inverse(const WeightFn& g, double x, double t_max, double dt) {
  // h(-t) = conj h(t) for real g, so only t >= 0 is sampled.
  const double lx = std::log(x);
  const double br[] = {0.0, t_max};
  const double v = integrate_composite(
      [&](double t) { return (mellin_transform(g, t).value * std::polar(1.0, -t * lx)).real(); }, br, dt,
      16);
  return v / kPi;
}

InequalityReport mellin_bound_check(const WeightFn& g, long N, const std::vector<double>& t_grid) {
  const double b = constant_b().b;
  const double scale = b * (std::log(double(N)) + 2.0);
  InequalityReport rep = InequalityReport::make("mellin_bound", 0.0, scale, "none");
  double max_err = 0.0;
  for (double t : t_grid) {
    const MellinValue h = mellin_transform(g, t);
    max_err = std::max(max_err, h.err);
    const double lhs = (std::abs(h.value) + h.err) * (1.0 + t * t);
    std::ostringstream o;
    o << "t=" << t;
    rep.absorb(InequalityReport::make("mellin_bound", lhs, scale, o.str()));
  }
  rep.name = "mellin_bound";
  rep.extra = {{"N", N}, {"b", b}, {"points", t_grid.size()}, {"max_quadrature_err", max_err}};
  return rep;
}

}  // namespace raux
