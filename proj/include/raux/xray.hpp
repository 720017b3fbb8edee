#pragma once

// X-rays: the curves Re f = 0 ("imaginary lines") and Im f = 0 ("real
// lines") of
//   rotated_r:   f(t) = e^{i theta(t)} R(1/2 + it),  t = x + iy complex
//   completed_r: f(s) = pi^{-s/2} Gamma(s/2) R(s),   s = x + iy
// sampled on a grid as phase + log-modulus, traced by marching squares.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "raux/numerics.hpp"

namespace raux {

enum class FieldId { rotated_r, completed_r };
std::string to_string(FieldId id);
FieldId field_from_string(const std::string& s);  // "rotated"/"rotated_r", "completed"/"completed_r"

struct Window {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  void validate() const;
};

struct FieldSample {
  double phase = 0.0;    // arg f in (-pi, pi]
  double log_abs = 0.0;  // log |f|
  bool masked = false;
};

// Evaluates one field value; masked at Gamma poles and on evaluation failure.
FieldSample sample_field(FieldId id, cplx z);

// nx x ny cells, (nx + 1) x (ny + 1) nodes.
struct XRayField {
  FieldId id = FieldId::rotated_r;
  Window window;
  int nx = 0, ny = 0;
  std::vector<FieldSample> samples;  // row-major, (ny + 1) rows of (nx + 1)
  std::vector<std::uint8_t> cell_mask;  // ny rows of nx; 1 = skipped by tracing
  int masked_nodes = 0;
  int masked_cells = 0;

  double x(int i) const { return window.x_lo + (window.x_hi - window.x_lo) * i / nx; }
  double y(int j) const { return window.y_lo + (window.y_hi - window.y_lo) * j / ny; }
  const FieldSample& at(int i, int j) const { return samples[std::size_t(j) * (nx + 1) + i]; }
};

// Defaults: rotated_r needs |y| <= 8.
XRayField field_grid(FieldId id, const Window& w, int nx, int ny, int jobs = 1);

// About 8 cells per expected zero spacing along the t direction
// (local density theta'(t) / 2 pi), at least 16 each way.
std::pair<int, int> default_resolution(FieldId id, const Window& w);

struct Point {
  double x = 0.0, y = 0.0;
};
using Polyline = std::vector<Point>;

struct CurveSet {
  std::vector<Polyline> real_lines;  // Im f = 0
  std::vector<Polyline> imag_lines;  // Re f = 0
  // imag_lines crossing the designated axis: y = 0 (rotated_r) or
  // x = 1/2 (completed_r); sorted along the axis.
  std::vector<Point> crossings;
  // Cells where a real line meets an imaginary line (zeros and poles of f).
  std::vector<Point> intersections;
  int saddle_cells = 0;
};

CurveSet trace_curves(const XRayField& field);

// Coordinates of the crossings along the axis (x for rotated, y for completed).
std::vector<double> crossing_positions(const CurveSet& c, FieldId id);

// CSV: "# header" line, then curve_id,family,vertex_index,x,y.
std::string curves_to_csv(const CurveSet& c, const std::string& header_line);
CurveSet curves_from_csv(const std::string& text);  // polylines only
std::string render_svg(const CurveSet& c, const XRayField& field, const std::string& title = {});

}  // namespace raux
