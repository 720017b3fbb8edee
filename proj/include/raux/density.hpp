#pragma once

// Density statistics over stored zeros: N(alpha, T) against
// T^{3/2 - alpha} (log T)^3, the Omega_T thinning count, pairing of R-zeros
// with sign changes of Z, and the total-count asymptotics. Everything here
// reads a ZeroStore; nothing rescans.

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "raux/report.hpp"
#include "raux/zero_store.hpp"

namespace raux {

struct DensityRow {
  double alpha = 0.0, T = 0.0;
  int N = 0;
  double bound = 0.0;  // T^{3/2 - alpha} (log T)^3
  double ratio = 0.0;
};

struct DensityTable {
  std::vector<DensityRow> rows;  // alpha-major, T ascending
  // Per alpha: max ratio (empirical constant), median, last, and whether
  // last <= 2 * median.
  nlohmann::json summary() const;
  std::string to_csv() const;
  std::string to_markdown() const;
};

// N(alpha, T) from the stored zeros. CoverageError if (0, T] is not scanned
// over [alpha, 1].
int stored_n_alpha_T(const ZeroStore& store, double alpha, double T);
DensityTable density_table(const ZeroStore& store, const std::vector<double>& alphas, const std::vector<double>& Ts);

// N_K(alpha) / (K^{2 - 2 alpha} (log K)^3) per band.
struct BandRow {
  long K = 0;
  int N = 0;
  double ratio = 0.0;
};
std::vector<BandRow> band_exponent_table(const ZeroStore& store, double alpha, long K_lo, long K_hi);

// Nonincreasing positive f; admissible on [t0, t1] when f(t) log t / log log t > 4
// on a grid there.
struct ThresholdFn {
  std::function<double(double)> f;
  std::string description;
  double operator()(double t) const { return f(t); }
  bool monotone(double t0, double t1, int samples = 2000) const;
  bool admissible(double t0, double t1, int samples = 2000) const;
  static ThresholdFn constant(double c);
  static ThresholdFn loglog_over_log(double c);  // c log log t / log t
};

struct OmegaResult {
  int count = 0;  // zeros with e <= gamma <= T, beta >= 1/2 + f(gamma)
  std::vector<std::pair<double, double>> trend;  // (T_i, count_i / T_i)
  bool admissible = false;
  nlohmann::json to_json() const;
};
OmegaResult omega_count(const ZeroStore& store, const ThresholdFn& f, double T, const std::vector<double>& trend_Ts = {});

struct PairEntry {
  double beta = 0.0, gamma = 0.0;
  double z_left = 0.0, z_right = 0.0;  // nearest Z sign changes below/above gamma (NaN if none)
  double window = 0.0;                 // 2 * mean gap at gamma
  int in_window = 0;                   // Z zeros with |t - gamma| <= window / 2
  bool flanked = false;                // >= 2 in window, at least one on each side
};

struct PairingReport {
  double t_lo = 0.0, t_hi = 0.0;
  std::vector<PairEntry> entries;
  int r_zeros = 0, z_zeros = 0;
  double fraction_flanked() const;
  // |#Z - 2 #R| <= #R; a finding, not a failure
  bool within_envelope() const;
  nlohmann::json to_json() const;
};

// 2 pi / log(t / 2 pi), the mean spacing of Z zeros near t.
double mean_z_gap(double t);
PairingReport pair_zeros(const std::vector<ZeroRecord>& r_zeros, const std::vector<double>& z_zeros, double t_lo,
                         double t_hi);
// Band K from the store; Z zeros are computed here.
PairingReport pair_with_z_zeros(const ZeroStore& store, long K);

// (T / 4 pi) log(T / 2 pi) - T / 4 pi and the Z counterpart (twice as many).
double r_zero_count_main_term(double T);
double z_zero_count_main_term(double T);
// lhs = count, rhs = main term, ratio = relative deviation, pass = ratio <= tol.
InequalityReport count_asymptotic_check(int count, double main_term, double tol, const std::string& name);
InequalityReport r_count_asymptotic_check(const ZeroStore& store, double T, double tol = 0.05);
InequalityReport z_count_asymptotic_check(double T, double tol = 0.02);

}  // namespace raux
