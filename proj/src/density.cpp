#include "raux/density.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "raux/errors.hpp"
#include "raux/numerics.hpp"

namespace raux {

using nlohmann::json;

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string num(double x) {
  std::ostringstream o;
  o << std::setprecision(17) << x;
  return o.str();
}

}  // namespace

int stored_n_alpha_T(const ZeroStore& store, double alpha, double T) {
  if (!(alpha <= 1.0)) throw DomainError("alpha must be <= 1");
  // Rectangles need width, so alpha = 1 queries a sliver and filters.
  int n = 0;
  for (const auto& z : store.zeros_in({std::min(alpha, 0.5), 1.0, 0.0, T}))
    if (z.beta >= alpha) n += z.multiplicity;
  return n;
}

DensityTable density_table(const ZeroStore& store, const std::vector<double>& alphas, const std::vector<double>& Ts) {
  DensityTable tab;
  std::vector<double> ts = Ts;
  std::sort(ts.begin(), ts.end());
  for (double a : alphas) {
    for (double T : ts) {
      if (!(T > 1.0)) throw DomainError("T must exceed 1");
      DensityRow r;
      r.alpha = a;
      r.T = T;
      r.N = stored_n_alpha_T(store, a, T);
      r.bound = std::pow(T, 1.5 - a) * std::pow(std::log(T), 3);
      r.ratio = r.N / r.bound;
      tab.rows.push_back(r);
    }
  }
  return tab;
}

json DensityTable::summary() const {
  std::map<double, std::vector<double>> by_alpha;
  for (const auto& r : rows) by_alpha[r.alpha].push_back(r.ratio);
  json out = json::array();
  for (const auto& [a, v] : by_alpha) {
    const double med = median(v);
    const double last = v.back();
    out.push_back({{"alpha", a},
                   {"max_ratio", *std::max_element(v.begin(), v.end())},
                   {"median_ratio", med},
                   {"last_ratio", last},
                   {"non_exploding", last <= 2.0 * med}});
  }
  return out;
}

std::string DensityTable::to_csv() const {
  std::ostringstream o;
  o << "alpha,T,N,bound,ratio\n";
  for (const auto& r : rows) o << num(r.alpha) << ',' << num(r.T) << ',' << r.N << ',' << num(r.bound) << ',' << num(r.ratio) << '\n';
  return o.str();
}

std::string DensityTable::to_markdown() const {
  std::ostringstream o;
  o << "| alpha | T | N(alpha,T) | T^(3/2-alpha) (log T)^3 | ratio |\n|---|---|---|---|---|\n";
  for (const auto& r : rows)
    o << "| " << r.alpha << " | " << std::fixed << std::setprecision(2) << r.T << " | " << r.N << " | "
      << std::scientific << std::setprecision(4) << r.bound << " | " << r.ratio << " |\n"
      << std::defaultfloat;
  return o.str();
}

std::vector<BandRow> band_exponent_table(const ZeroStore& store, double alpha, long K_lo, long K_hi) {
  if (K_lo < 2) throw DomainError("band exponent table needs K >= 2");
  std::vector<BandRow> out;
  for (long K = K_lo; K <= K_hi; ++K) {
    const BandIndex b{K};
    BandRow r;
    r.K = K;
    r.N = store.count_in({alpha, 1.0, b.t_lo(), b.t_hi()});
    r.ratio = r.N / (std::pow(double(K), 2.0 - 2.0 * alpha) * std::pow(std::log(double(K)), 3));
    out.push_back(r);
  }
  return out;
}

bool ThresholdFn::monotone(double t0, double t1, int samples) const {
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= samples; ++i) {
    const double t = t0 * std::pow(t1 / t0, double(i) / samples);
    const double v = f(t);
    if (!(v > 0.0) || v > prev) return false;
    prev = v;
  }
  return true;
}

bool ThresholdFn::admissible(double t0, double t1, int samples) const {
  if (!(t0 > std::exp(1.0))) return false;  // log log t > 0 needed
  if (!monotone(t0, t1, samples)) return false;
  for (int i = 0; i <= samples; ++i) {
    const double t = t0 * std::pow(t1 / t0, double(i) / samples);
    if (!(f(t) * std::log(t) / std::log(std::log(t)) > 4.0)) return false;
  }
  return true;
}

ThresholdFn ThresholdFn::constant(double c) {
  std::ostringstream d;
  d << "f(t) = " << c;
  return {[c](double) { return c; }, d.str()};
}

ThresholdFn ThresholdFn::loglog_over_log(double c) {
  std::ostringstream d;
  d << "f(t) = " << c << " log log t / log t";
  return {[c](double t) { return c * std::log(std::log(t)) / std::log(t); }, d.str()};
}

json OmegaResult::to_json() const {
  json tr = json::array();
  for (const auto& [T, r] : trend) tr.push_back({{"T", T}, {"count_over_T", r}});
  return {{"count", count}, {"trend", tr}, {"admissible", admissible}};
}

OmegaResult omega_count(const ZeroStore& store, const ThresholdFn& f, double T, const std::vector<double>& trend_Ts) {
  const double e = std::exp(1.0);
  if (!(T > e)) throw DomainError("omega_count needs T > e");
  OmegaResult out;
  // Admissibility from t = 16 on (log log t > 1 there); below that the
  // condition is vacuous for any bounded f.
  out.admissible = f.admissible(std::max(16.0, e * 1.0001), std::max(T, 17.0));
  auto count_to = [&](double Tc) {
    int n = 0;
    for (const auto& z : store.zeros_in({0.5, kRightEdge, e, Tc}))
      if (z.gamma >= e && z.beta >= 0.5 + f(z.gamma)) n += z.multiplicity;
    return n;
  };
  out.count = count_to(T);
  std::vector<double> ts = trend_Ts;
  std::sort(ts.begin(), ts.end());
  for (double Ti : ts) out.trend.emplace_back(Ti, count_to(Ti) / Ti);
  return out;
}

double mean_z_gap(double t) { return kTwoPi / std::log(std::max(t, 20.0) / kTwoPi); }

double PairingReport::fraction_flanked() const {
  if (entries.empty()) return 1.0;
  return double(std::count_if(entries.begin(), entries.end(), [](const PairEntry& e) { return e.flanked; })) /
         entries.size();
}

bool PairingReport::within_envelope() const { return std::abs(z_zeros - 2 * r_zeros) <= r_zeros; }

json PairingReport::to_json() const {
  json es = json::array();
  for (const auto& e : entries) {
    auto opt = [](double x) { return std::isnan(x) ? json(nullptr) : json(x); };
    es.push_back({{"beta", e.beta},
                  {"gamma", e.gamma},
                  {"z_left", opt(e.z_left)},
                  {"z_right", opt(e.z_right)},
                  {"window", e.window},
                  {"in_window", e.in_window},
                  {"flanked", e.flanked}});
  }
  return {{"t_lo", t_lo},
          {"t_hi", t_hi},
          {"r_zeros", r_zeros},
          {"z_zeros", z_zeros},
          {"fraction_flanked", fraction_flanked()},
          {"within_envelope", within_envelope()},
          {"entries", es}};
}

PairingReport pair_zeros(const std::vector<ZeroRecord>& r_zeros, const std::vector<double>& z_zeros, double t_lo,
                         double t_hi) {
  PairingReport rep;
  rep.t_lo = t_lo;
  rep.t_hi = t_hi;
  std::vector<double> zs = z_zeros;
  std::sort(zs.begin(), zs.end());
  rep.z_zeros = static_cast<int>(std::count_if(zs.begin(), zs.end(), [&](double t) { return t > t_lo && t <= t_hi; }));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& z : r_zeros) {
    if (!(z.gamma > t_lo && z.gamma <= t_hi)) continue;
    rep.r_zeros += z.multiplicity;
    PairEntry e;
    e.beta = z.beta;
    e.gamma = z.gamma;
    auto it = std::lower_bound(zs.begin(), zs.end(), z.gamma);
    e.z_right = it != zs.end() ? *it : nan;
    e.z_left = it != zs.begin() ? *std::prev(it) : nan;
    e.window = 2.0 * mean_z_gap(z.gamma);
    int left = 0, right = 0;
    for (auto j = std::lower_bound(zs.begin(), zs.end(), z.gamma - e.window / 2);
         j != zs.end() && *j <= z.gamma + e.window / 2; ++j)
      (*j < z.gamma ? left : right)++;
    e.in_window = left + right;
    e.flanked = e.in_window >= 2 && left >= 1 && right >= 1;
    rep.entries.push_back(e);
  }
  return rep;
}

PairingReport pair_with_z_zeros(const ZeroStore& store, long K) {
  const double lo = K == 0 ? 0.0 : BandIndex{K}.t_lo();
  const double hi = BandIndex{K}.t_hi();
  const double inf = std::numeric_limits<double>::infinity();
  const auto rz = store.zeros_in({-inf, inf, lo, hi});
  // Z zeros slightly beyond the band so edge entries see both neighbours.
  const double pad = 2.0 * mean_z_gap(hi);
  return pair_zeros(rz, z_zeros(std::max(0.0, lo - pad), hi + pad), lo, hi);
}

double r_zero_count_main_term(double T) {
  const double x = T / (2.0 * kTwoPi);
  return x * std::log(T / kTwoPi) - x;
}

double z_zero_count_main_term(double T) {
  const double x = T / kTwoPi;
  return x * std::log(x) - x;
}

InequalityReport count_asymptotic_check(int count, double main_term, double tol, const std::string& name) {
  InequalityReport r;
  r.name = name;
  r.lhs = count;
  r.rhs = main_term;
  r.ratio = std::abs(count - main_term) / main_term;
  r.pass = r.ratio <= tol;
  r.extra = {{"tolerance", tol}, {"relative_deviation", r.ratio}};
  return r;
}

InequalityReport r_count_asymptotic_check(const ZeroStore& store, double T, double tol) {
  const double inf = std::numeric_limits<double>::infinity();
  const int n = store.count_in({-inf, inf, 0.0, T});
  auto r = count_asymptotic_check(n, r_zero_count_main_term(T), tol, "r_zero_count");
  r.worst_point = "T=" + num(T);
  return r;
}

InequalityReport z_count_asymptotic_check(double T, double tol) {
  const int n = static_cast<int>(z_zeros(0.0, T).size());
  auto r = count_asymptotic_check(n, z_zero_count_main_term(T), tol, "z_zero_count");
  r.worst_point = "T=" + num(T);
  return r;
}

}  // namespace raux
