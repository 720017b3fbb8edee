#include "raux/zeros.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "raux/errors.hpp"

namespace raux {

namespace {

double wrap(double d) {
  d = std::remainder(d, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

// Edge phases keyed by their (canonical) endpoints, so that grids and
// quadrisections reuse shared edges and get exactly additive windings.
class PhaseCache {
 public:
  explicit PhaseCache(const WindingOptions& opt) : opt_(opt) {}

  double edge(cplx a, cplx b) {
    const std::array<double, 4> key{a.real(), a.imag(), b.real(), b.imag()};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double d = edge_phase(a, b, opt_, &evals_);
    cache_.emplace(key, d);
    return d;
  }

  // Bottom and top run left to right, left and right run upwards.
  double boundary(const Rectangle& r) {
    const cplx ll(r.sigma_lo, r.t_lo), lr(r.sigma_hi, r.t_lo), ul(r.sigma_lo, r.t_hi), ur(r.sigma_hi, r.t_hi);
    return edge(ll, lr) + edge(lr, ur) - edge(ul, ur) - edge(ll, ul);
  }

  int winding(const Rectangle& r) { return to_count(boundary(r)); }

  long evals() const { return evals_; }

  static int to_count(double phase) {
    const double w = phase / kTwoPi;
    const double k = std::round(w);
    if (std::abs(w - k) > 1e-3) throw ConvergenceError("winding number not integral: " + std::to_string(w));
    return static_cast<int>(k);
  }

 private:
  WindingOptions opt_;
  std::map<std::array<double, 4>, double> cache_;
  long evals_ = 0;
};

std::string where(cplx s) {
  std::ostringstream o;
  o.precision(12);
  o << "s=(" << s.real() << ", " << s.imag() << ")";
  return o.str();
}

struct EdgeWalker {
  const WindingOptions& opt;
  long* evals;

  PhaseSample sample(cplx s) {
    if (evals && ++*evals > opt.eval_budget) throw ConvergenceError("winding: evaluation budget exhausted");
    PhaseSample p = sample_r(s);
    if (p.mantissa == cplx(0.0, 0.0)) throw BoundaryZeroError("R vanishes on the boundary at " + where(s));
    return p;
  }

  double walk(cplx a, const PhaseSample& fa, cplx b, const PhaseSample& fb) {
    const double d = wrap(std::arg(fb.mantissa) - std::arg(fa.mantissa));
    const cplx m = 0.5 * (a + b);
    if (std::abs(b - a) < opt.min_segment)
      throw BoundaryZeroError("zero within " + std::to_string(opt.min_segment) + " of the boundary near " + where(m));
    const PhaseSample fm = sample(m);
    const double d1 = wrap(std::arg(fm.mantissa) - std::arg(fa.mantissa));
    const double d2 = wrap(std::arg(fb.mantissa) - std::arg(fm.mantissa));
    // Accept only when the midpoint confirms a small, consistent step.
    if (std::abs(d) < opt.max_phase_step && std::abs(d1) < opt.max_phase_step &&
        std::abs(d2) < opt.max_phase_step && std::abs(d1 + d2 - d) < 1e-9)
      return d1 + d2;
    return walk(a, fa, m, fm) + walk(m, fm, b, fb);
  }
};

struct Locator {
  const LocateOptions& opt;
  PhaseCache cache;
  std::vector<ZeroRecord>& out;

  void run(const Rectangle& r, int w) {
    if (w == 0) return;
    if (w == 1) {
      try {
        ZeroRecord z = newton_polish(cplx(0.5 * (r.sigma_lo + r.sigma_hi), 0.5 * (r.t_lo + r.t_hi)), opt);
        if (r.contains(z.beta, z.gamma)) {
          out.push_back(z);
          return;
        }
      } catch (const ConvergenceError&) {
      }
    }
    const double ws = r.sigma_hi - r.sigma_lo, ht = r.t_hi - r.t_lo;
    if (std::max(ws, ht) < opt.min_side) {
      ZeroRecord z;
      z.beta = 0.5 * (r.sigma_lo + r.sigma_hi);
      z.gamma = 0.5 * (r.t_lo + r.t_hi);
      z.multiplicity = w;
      z.cluster = w > 1;
      z.newton_step = std::max(ws, ht);
      z.residual = std::abs(sample_r(cplx(z.beta, z.gamma)).mantissa);
      out.push_back(z);
      return;
    }
    // Split the long side(s); move the cut if it runs through a zero.
    const bool split_s = ws >= 0.5 * ht, split_t = ht >= 0.5 * ws;
    for (double f : {0.5, 0.4472, 0.5528, 0.3819, 0.6181}) {
      std::vector<Rectangle> parts;
      const double sm = r.sigma_lo + f * ws, tm = r.t_lo + f * ht;
      const std::vector<std::pair<double, double>> sr =
          split_s ? std::vector<std::pair<double, double>>{{r.sigma_lo, sm}, {sm, r.sigma_hi}}
                  : std::vector<std::pair<double, double>>{{r.sigma_lo, r.sigma_hi}};
      const std::vector<std::pair<double, double>> tr =
          split_t ? std::vector<std::pair<double, double>>{{r.t_lo, tm}, {tm, r.t_hi}}
                  : std::vector<std::pair<double, double>>{{r.t_lo, r.t_hi}};
      for (const auto& [a, b] : sr)
        for (const auto& [c, d] : tr) parts.push_back({a, b, c, d});
      std::vector<int> ws_(parts.size());
      try {
        int total = 0;
        for (std::size_t k = 0; k < parts.size(); ++k) total += ws_[k] = cache.winding(parts[k]);
        if (total != w) throw ConvergenceError("quadrisection windings do not add up");
      } catch (const BoundaryZeroError&) {
        continue;
      }
      for (std::size_t k = 0; k < parts.size(); ++k) run(parts[k], ws_[k]);
      return;
    }
    throw BoundaryZeroError("could not place a zero-free cut in rectangle near " +
                            where(cplx(r.sigma_lo, r.t_lo)));
  }
};

}  // namespace

void Rectangle::validate() const {
  if (!(sigma_lo < sigma_hi) || !(t_lo < t_hi)) throw DomainError("Rectangle: need sigma_lo < sigma_hi and t_lo < t_hi");
}

bool Rectangle::contains(double beta, double gamma) const {
  return beta >= sigma_lo && beta <= sigma_hi && gamma > t_lo && gamma <= t_hi;
}

nlohmann::json Rectangle::to_json() const {
  return {{"sigma_lo", sigma_lo}, {"sigma_hi", sigma_hi}, {"t_lo", t_lo}, {"t_hi", t_hi}};
}

Rectangle Rectangle::from_json(const nlohmann::json& j) {
  return {j.at("sigma_lo").get<double>(), j.at("sigma_hi").get<double>(), j.at("t_lo").get<double>(),
          j.at("t_hi").get<double>()};
}

nlohmann::json ZeroRecord::to_json() const {
  return {{"beta", beta},         {"gamma", gamma}, {"multiplicity", multiplicity}, {"residual", residual},
          {"newton_step", newton_step}, {"band", band},   {"cluster", cluster}};
}

ZeroRecord ZeroRecord::from_json(const nlohmann::json& j) {
  ZeroRecord z;
  z.beta = j.at("beta").get<double>();
  z.gamma = j.at("gamma").get<double>();
  z.multiplicity = j.at("multiplicity").get<int>();
  z.residual = j.at("residual").get<double>();
  z.newton_step = j.value("newton_step", 0.0);
  z.band = j.at("band").get<long>();
  z.cluster = j.value("cluster", false);
  return z;
}

PhaseSample sample_r(cplx s) {
  const ScaledEval e = r_aux_integral_scaled(s);
  return {e.value.mantissa, e.value.log_scale};
}

double edge_phase(cplx a, cplx b, const WindingOptions& opt, long* evals) {
  EdgeWalker w{opt, evals};
  // Bisection alone can alias whole turns on long edges. Away from zeros
  // arg R turns at most about log N ~ log(|s|/2pi)/2 per unit length (the
  // dominant terms are n^{-s}, n <= N); pre-split at twice that rate and
  // let the walker refine near zeros.
  const double smax = std::max(std::abs(a), std::abs(b));
  const double rate = 1.0 + std::log1p(smax / kTwoPi);
  const long pieces = std::max(1L, static_cast<long>(std::ceil(std::abs(b - a) * rate / opt.max_phase_step)));
  double total = 0.0;
  cplx p0 = a;
  PhaseSample f0 = w.sample(a);
  for (long k = 1; k <= pieces; ++k) {
    const cplx p1 = k == pieces ? b : a + (b - a) * (double(k) / double(pieces));
    const PhaseSample f1 = w.sample(p1);
    total += w.walk(p0, f0, p1, f1);
    p0 = p1;
    f0 = f1;
  }
  return total;
}

int winding_count(const Rectangle& rect, const WindingOptions& opt) {
  rect.validate();
  PhaseCache cache(opt);
  return cache.winding(rect);
}

ZeroRecord newton_polish(cplx s0, const LocateOptions& opt) {
  cplx s = s0;
  const double h = opt.fd_step;
  double step = INFINITY, best = INFINITY;
  for (int it = 0; it < 60; ++it) {
    const PhaseSample f0 = sample_r(s), fp = sample_r(s + h), fm = sample_r(s - h);
    const cplx d = (fp.mantissa * std::exp(fp.log_scale - f0.log_scale) -
                    fm.mantissa * std::exp(fm.log_scale - f0.log_scale)) /
                   (2.0 * h);
    if (d == cplx(0.0, 0.0) || !std::isfinite(std::abs(d))) break;
    cplx delta = f0.mantissa / d;
    // Damp wild steps; a zero is expected within a cell or so.
    if (std::abs(delta) > 2.0) delta *= 2.0 / std::abs(delta);
    s -= delta;
    step = std::abs(delta);
    best = std::min(best, step);
    if (step < opt.tol || (it >= 30 && step < 1e-6 && step >= 0.5 * best)) {
      ZeroRecord z;
      z.beta = s.real();
      z.gamma = s.imag();
      z.newton_step = step;
      z.residual = std::abs(sample_r(s).mantissa);
      z.band = band_of(z.gamma);
      return z;
    }
  }
  throw ConvergenceError("Newton did not converge from " + where(s0));
}

std::vector<ZeroRecord> locate_zeros(const Rectangle& rect, const LocateOptions& opt) {
  rect.validate();
  std::vector<ZeroRecord> out;
  Locator loc{opt, PhaseCache(opt.winding), out};
  loc.run(rect, loc.cache.winding(rect));
  for (auto& z : out) z.band = band_of(z.gamma);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.gamma < b.gamma; });
  return out;
}

double left_edge(double t_max) { return -std::pow(std::max(t_max, 1.0), 3.0 / 7.0) - 1.0; }

bool BandScan::complete() const {
  return std::all_of(cells.begin(), cells.end(), [](const CellResult& c) { return c.winding == c.located; });
}

nlohmann::json BandScan::summary() const {
  int located = 0;
  for (const auto& z : zeros) located += z.multiplicity;
  return {{"rect", rect.to_json()},         {"winding", total_winding}, {"located", located},
          {"cells_with_zeros", cells.size()}, {"complete", complete()},   {"evaluations", evaluations}};
}

BandScan scan_rectangle(const Rectangle& rect, const ScanOptions& opt) {
  rect.validate();
  BandScan scan;
  scan.rect = rect;
  {
    std::vector<double> sl{rect.sigma_lo, rect.sigma_hi};
    const int ns = std::max(1, static_cast<int>(std::ceil((rect.sigma_hi - rect.sigma_lo) / opt.cell_width)));
    for (int i = 1; i < ns; ++i) sl.push_back(rect.sigma_lo + (rect.sigma_hi - rect.sigma_lo) * i / ns);
    for (double c : opt.sigma_cuts)
      if (c > rect.sigma_lo && c < rect.sigma_hi) sl.push_back(c);
    std::sort(sl.begin(), sl.end());
    sl.erase(std::unique(sl.begin(), sl.end(), [](double a, double b) { return std::abs(a - b) < 1e-9; }), sl.end());
    scan.sigma_lines = sl;
    const int nt = std::max(1, static_cast<int>(std::ceil((rect.t_hi - rect.t_lo) / opt.cell_height)));
    for (int j = 0; j <= nt; ++j) scan.t_lines.push_back(j == nt ? rect.t_hi : rect.t_lo + (rect.t_hi - rect.t_lo) * j / nt);
  }
  PhaseCache cache(opt.locate.winding);
  // Cell windings; an interior grid line through a zero is nudged and the
  // affected cells recomputed (the cache keeps everything else).
  std::vector<std::vector<int>> w;
  for (int attempt = 0;; ++attempt) {
    try {
      const std::size_t ns = scan.sigma_lines.size() - 1, nt = scan.t_lines.size() - 1;
      w.assign(ns, std::vector<int>(nt, 0));
      for (std::size_t i = 0; i < ns; ++i)
        for (std::size_t j = 0; j < nt; ++j)
          w[i][j] = cache.winding({scan.sigma_lines[i], scan.sigma_lines[i + 1], scan.t_lines[j], scan.t_lines[j + 1]});
      scan.total_winding = cache.winding(rect);
      break;
    } catch (const BoundaryZeroError& e) {
      if (attempt == 8) throw;
      // Find the line nearest the reported point and nudge it, unless it
      // is part of the outer boundary.
      const std::string msg = e.what();
      const auto p = msg.find("s=(");
      if (p == std::string::npos) throw;
      double zs = 0.0, zt = 0.0;
      std::sscanf(msg.c_str() + p, "s=(%lf, %lf)", &zs, &zt);
      auto nearest = [](std::vector<double>& lines, double v) {
        std::size_t k = 0;
        for (std::size_t i = 1; i < lines.size(); ++i)
          if (std::abs(lines[i] - v) < std::abs(lines[k] - v)) k = i;
        return k;
      };
      const std::size_t is = nearest(scan.sigma_lines, zs), it = nearest(scan.t_lines, zt);
      const bool on_sigma = std::abs(scan.sigma_lines[is] - zs) <= std::abs(scan.t_lines[it] - zt);
      auto& lines = on_sigma ? scan.sigma_lines : scan.t_lines;
      const std::size_t k = on_sigma ? is : it;
      if (k == 0 || k + 1 == lines.size()) throw;
      lines[k] += 1e-6;
    }
  }
  int sum = 0;
  for (const auto& col : w)
    for (int v : col) sum += v;
  if (sum != scan.total_winding) throw ConvergenceError("cell windings do not add up to the boundary winding");

  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = 0; j < w[i].size(); ++j) {
      if (w[i][j] == 0) continue;
      CellResult c;
      c.rect = {scan.sigma_lines[i], scan.sigma_lines[i + 1], scan.t_lines[j], scan.t_lines[j + 1]};
      c.winding = w[i][j];
      std::vector<ZeroRecord> found;
      Locator loc{opt.locate, PhaseCache(opt.locate.winding), found};
      loc.run(c.rect, c.winding);
      for (auto& z : found) {
        z.band = band_of(z.gamma);
        c.located += z.multiplicity;
        scan.zeros.push_back(z);
      }
      scan.evaluations += loc.cache.evals();
      scan.cells.push_back(c);
    }
  scan.evaluations += cache.evals();
  std::sort(scan.zeros.begin(), scan.zeros.end(), [](const auto& a, const auto& b) { return a.gamma < b.gamma; });
  return scan;
}

BandScan scan_band(long K, const ScanOptions& opt) {
  if (K < 0) throw DomainError("scan_band: K must be >= 0");
  const double lo = K == 0 ? kBottomEdge : BandIndex{K}.t_lo();
  const double hi = K == 0 ? kTwoPi : BandIndex{K}.t_hi();
  return scan_rectangle({left_edge(hi), kRightEdge, lo, hi}, opt);
}

int band_count(long K, double sigma, const WindingOptions& opt) {
  if (K < 0) throw DomainError("band_count: K must be >= 0");
  const double lo = K == 0 ? kBottomEdge : BandIndex{K}.t_lo();
  const double hi = K == 0 ? kTwoPi : BandIndex{K}.t_hi();
  return winding_count({sigma, 1.0, lo, hi}, opt);
}

int n_alpha_T(double alpha, double T, const WindingOptions& opt) {
  if (!(alpha < 1.0)) throw DomainError("n_alpha_T: alpha must be < 1");
  if (!(T > 0.0)) return 0;
  const long top = band_of(T);
  int n = 0;
  for (long K = 0; K < top; ++K) n += band_count(K, alpha, opt);
  const double lo = top == 0 ? kBottomEdge : BandIndex{top}.t_lo();
  n += winding_count({alpha, 1.0, lo, T}, opt);
  return n;
}

SeparatedSet select_separated(const std::vector<ZeroRecord>& zs) {
  SeparatedSet S;
  double last = -INFINITY;
  for (const auto& z : zs) {
    if (z.gamma - last >= 1.0) {
      S.points.emplace_back(z.beta, z.gamma);
      last = z.gamma;
      S.Delta = std::max(S.Delta, z.beta);
      S.T = std::max(S.T, z.gamma);
    }
  }
  return S;
}

SeparatedSet shift_to_band_origin(const SeparatedSet& S, double alpha, long K) {
  SeparatedSet out;
  out.Delta = 1.0 - alpha;
  out.T = kTwoPi * double(2 * K + 1);
  const double t0 = BandIndex{K}.t_lo();
  for (const auto& [b, g] : S.points) out.points.emplace_back(b - alpha, g - t0);
  return out;
}

InequalityReport strip_count_check(double alpha, const std::vector<double>& T_list,
                                   const std::vector<ZeroRecord>& zeros) {
  InequalityReport rep = InequalityReport::make("strip_count", 0.0, 1.0, "none");
  int max_count = 0;
  for (double T : T_list) {
    if (!(T >= std::exp(1.0))) throw DomainError("strip_count_check: T must be >= e");
    int count = 0;
    for (const auto& z : zeros)
      if (z.beta >= alpha && z.beta <= 1.0 && z.gamma >= T && z.gamma <= T + 1.0) count += z.multiplicity;
    max_count = std::max(max_count, count);
    std::ostringstream o;
    o << "T=" << T << " count=" << count;
    rep.absorb(InequalityReport::make("strip_count", count, (3.0 - alpha) * std::log(T), o.str()));
  }
  rep.name = "strip_count";
  // No value of C is given, so only finiteness is checked; ratio is the
  // empirical C.
  rep.pass = std::isfinite(rep.ratio);
  rep.extra = {{"alpha", alpha}, {"strips", T_list.size()}, {"max_count", max_count}, {"empirical_C", rep.ratio}};
  return rep;
}

DirichletPoly d_polynomial(long K, double alpha) {
  if (K < 2) throw DomainError("d_polynomial: K must be >= 2");
  std::vector<cplx> a(K, 0.0);
  const double t0 = BandIndex{K}.t_lo();
  for (long n = 2; n <= K; ++n) a[n - 1] = std::exp(-cplx(alpha, t0) * std::log(double(n)));
  return DirichletPoly(std::move(a));
}

InequalityReport d_polynomial_check(long K, double alpha, const SeparatedSet& S) {
  const DirichletPoly D = d_polynomial(K, alpha);
  const double t0 = BandIndex{K}.t_lo();
  double min_d = INFINITY, max_identity = 0.0, max_remainder = 0.0;
  int big = 0;
  std::string worst;
  for (const auto& [b, g] : S.points) {
    const cplx rho(b, g);
    const cplx d = D.eval(rho - cplx(alpha, t0));
    const EvalResult band = r_aux_sum(rho, K);
    max_identity = std::max(max_identity, std::abs(1.0 + d - band.value));
    max_remainder = std::max(max_remainder, std::abs(band.value));
    if (std::abs(d) >= 0.5) ++big;
    if (std::abs(d) < min_d) {
      min_d = std::abs(d);
      worst = where(rho);
    }
  }
  InequalityReport r = InequalityReport::make("d_polynomial", 0.5, S.points.empty() ? INFINITY : min_d, worst);
  r.extra = {{"K", K},
             {"alpha", alpha},
             {"J", S.points.size()},
             {"fraction_ge_half", S.points.empty() ? 1.0 : double(big) / double(S.points.size())},
             {"min_abs_D", S.points.empty() ? 0.0 : min_d},
             {"max_identity_residual", max_identity},
             {"max_band_sum_remainder", max_remainder}};
  return r;
}

std::vector<double> z_zeros(double t_lo, double t_hi) {
  // Z has no zeros below t = 14.13; start no lower than 1 to keep theta in
  // its asymptotic regime.
  double t = std::max(t_lo, 1.0);
  std::vector<double> roots;
  auto step_at = [](double t) {
    const double gap = kTwoPi / std::log(std::max(t, 20.0) / kTwoPi);
    return std::clamp(gap / 12.0, 0.005, 0.2);
  };
  auto refine = [&](double a, double za, double b) {
    boost::uintmax_t iters = 80;
    auto tol = [](double x, double y) { return std::abs(x - y) < 1e-10; };
    const auto r = boost::math::tools::toms748_solve([](double x) { return z_fn(x); }, a, b, za, z_fn(b), tol, iters);
    return 0.5 * (r.first + r.second);
  };
  double t0 = t, z0 = z_fn(t0);
  double tm1 = NAN, zm1 = NAN;  // sample before t0
  while (t0 < t_hi) {
    const double t1 = std::min(t_hi, t0 + step_at(t0));
    const double z1 = z_fn(t1);
    if (z0 == 0.0) {
      roots.push_back(t0);
    } else if ((z0 < 0.0) != (z1 < 0.0) && z1 != 0.0) {
      roots.push_back(refine(t0, z0, t1));
    } else if (!std::isnan(zm1) && (zm1 < 0.0) == (z0 < 0.0) && (z0 < 0.0) == (z1 < 0.0) &&
               std::abs(z0) < std::abs(zm1) && std::abs(z0) < std::abs(z1)) {
      // |Z| dips at t0 without a sign change: look for a hidden pair.
      const double sgn = z0 < 0.0 ? -1.0 : 1.0;
      const auto m = boost::math::tools::brent_find_minima([&](double x) { return sgn * z_fn(x); }, tm1, t1, 40);
      if (m.second < 0.0) {
        const double zl = z_fn(tm1);
        roots.push_back(refine(tm1, zl, m.first));
        roots.push_back(refine(m.first, sgn * m.second, t1));
      }
    }
    tm1 = t0;
    zm1 = z0;
    t0 = t1;
    z0 = z1;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace raux
