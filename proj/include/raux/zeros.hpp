#pragma once

// Zeros of R(s) by the argument principle: winding numbers of rectangles,
// quadrisection plus Newton to locate them, band scans on a grid of cells
// with shared edges (so cell counts add up exactly), and the derived counts
// N_K(sigma), N(alpha, T).

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "raux/dirichlet_mv.hpp"
#include "raux/numerics.hpp"
#include "raux/raux_core.hpp"
#include "raux/report.hpp"

namespace raux {

// [sigma_lo, sigma_hi] x (t_lo, t_hi]
struct Rectangle {
  double sigma_lo = 0.0, sigma_hi = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  void validate() const;  // throws DomainError
  bool contains(double beta, double gamma) const;
  nlohmann::json to_json() const;
  static Rectangle from_json(const nlohmann::json& j);
};

struct ZeroRecord {
  double beta = 0.0, gamma = 0.0;
  int multiplicity = 1;
  // |R| at the located point relative to the largest term in its evaluation
  // (R itself can be astronomically large or small off the critical strip).
  double residual = 0.0;
  double newton_step = 0.0;  // size of the last Newton correction
  long band = 0;
  bool cluster = false;  // subdivision floor reached with winding >= 2
  nlohmann::json to_json() const;
  static ZeroRecord from_json(const nlohmann::json& j);
};

struct WindingOptions {
  double max_phase_step = kPi / 4;  // accepted |delta arg| between samples
  double min_segment = 1e-9;        // below this a boundary zero is assumed
  long eval_budget = 4'000'000;
};

// R(s) reduced to what the argument principle needs.
struct PhaseSample {
  cplx mantissa;  // R(s) = mantissa * exp(log_scale), |mantissa| <~ 1
  double log_scale = 0.0;
};
PhaseSample sample_r(cplx s);

// Continuous change of arg R along the straight segment a -> b.
// BoundaryZeroError if the segment passes within min_segment of a zero.
double edge_phase(cplx a, cplx b, const WindingOptions& opt = {}, long* evals = nullptr);

// Number of zeros inside rect, with multiplicity.
int winding_count(const Rectangle& rect, const WindingOptions& opt = {});

struct LocateOptions {
  double tol = 1e-10;       // Newton step at acceptance
  double min_side = 1e-7;   // subdivision floor
  double fd_step = 1e-5;    // central-difference step for R'
  WindingOptions winding;
};

// Zeros in rect by quadrisection and Newton; multiplicities add up to
// winding_count(rect). Clusters below the floor become one record.
std::vector<ZeroRecord> locate_zeros(const Rectangle& rect, const LocateOptions& opt = {});

// Polish a zero estimate; returns the record without checking a rectangle.
ZeroRecord newton_polish(cplx s0, const LocateOptions& opt = {});

// Siegel's bound -beta <= gamma^{3/7}: no zeros left of this for t <= t_max.
double left_edge(double t_max);
// R vanishes at points of the real axis (s = -2 among them), which the
// half-open convention (0, T] excludes; scans starting at t = 0 put their
// bottom edge here instead.
inline constexpr double kBottomEdge = 1e-3;
// Right edge used by scans; R(s) = 1 + O(2^{-sigma}) there.
inline constexpr double kRightEdge = 3.0;

struct CellResult {
  Rectangle rect;
  int winding = 0;
  int located = 0;  // sum of multiplicities found inside
};

struct BandScan {
  Rectangle rect;
  std::vector<double> sigma_lines, t_lines;
  std::vector<CellResult> cells;  // cells with winding != 0 only
  std::vector<ZeroRecord> zeros;
  int total_winding = 0;   // from the outer boundary
  long evaluations = 0;
  bool complete() const;  // every cell: located == winding
  nlohmann::json summary() const;
};

struct ScanOptions {
  double cell_width = 3.0;    // sigma extent of a cell
  double cell_height = 2.0;   // t extent of a cell
  std::vector<double> sigma_cuts;  // extra vertical grid lines (e.g. alpha values)
  LocateOptions locate;
};

// Scan rect on a grid; vertical lines at the cuts and every cell_width.
BandScan scan_rectangle(const Rectangle& rect, const ScanOptions& opt = {});
// Band K: (2 pi K^2, 2 pi (K+1)^2] (K = 0 is (0, 2pi]) over
// [left_edge(t_hi), kRightEdge].
BandScan scan_band(long K, const ScanOptions& opt = {});

// N_K(sigma): zeros in [sigma, 1] x band K, by winding.
int band_count(long K, double sigma, const WindingOptions& opt = {});
// N(alpha, T): zeros with alpha <= beta <= 1, 0 < gamma <= T, assembled
// from whole bands plus the partial top band.
int n_alpha_T(double alpha, double T, const WindingOptions& opt = {});

// Greedy sweep keeping zeros whose gamma exceeds the last kept one by >= 1.
// Input sorted by gamma. Points are (beta, gamma); Delta/T are the extents.
SeparatedSet select_separated(const std::vector<ZeroRecord>& zs);
// rho -> rho - alpha - 2 pi i K^2 with Delta = 1 - alpha, T = 2 pi (2K + 1).
SeparatedSet shift_to_band_origin(const SeparatedSet& S, double alpha, long K);

// Max over T in T_list of #{alpha <= beta <= 1, T <= gamma <= T + 1} /
// ((3 - alpha) log T): an empirical constant. pass just means finite.
InequalityReport strip_count_check(double alpha, const std::vector<double>& T_list,
                                   const std::vector<ZeroRecord>& zeros);

// For each zero: |D(rho - alpha - 2 pi i K^2)| with
// D(s) = sum_{n=2}^K n^{-alpha - 2 pi i K^2} n^{-s}, the identity residual
// |1 + D - sum_{n<=K} n^{-rho}| and the band-sum remainder |sum_{n<=K} n^{-rho}|.
// lhs = 1/2, rhs = min |D|; extra carries the fraction with |D| >= 1/2.
InequalityReport d_polynomial_check(long K, double alpha, const SeparatedSet& S);
DirichletPoly d_polynomial(long K, double alpha);

// Sign changes of Z on [t_lo, t_hi], refined to 1e-10. Close pairs that
// stay on one side of zero between samples are found by minimising |Z|
// between samples where it dips.
std::vector<double> z_zeros(double t_lo, double t_hi);

}  // namespace raux
