#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "raux/errors.hpp"
#include "raux/xray.hpp"
#include "raux/zeros.hpp"

using namespace raux;

namespace {

const XRayField& figure1() {
  static const XRayField f = field_grid(FieldId::rotated_r, {200040, 200060, -2, 4}, 800, 240);
  return f;
}

}  // namespace

TEST_CASE("figure-1 window: crossings are the sign changes of Z") {
  const XRayField& f = figure1();
  CHECK(f.masked_nodes == 0);
  const CurveSet c = trace_curves(f);
  const auto xs = crossing_positions(c, f.id);
  const auto zz = z_zeros(200040, 200060);
  REQUIRE(xs.size() == zz.size());
  const double dx = 20.0 / 800;
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(xs[i] - zz[i]) < dx);
  // Imaginary lines all start at the bottom of the window.
  int from_bottom = 0;
  for (const auto& l : c.imag_lines)
    from_bottom += std::abs(l.front().y - f.window.y_lo) < 1e-12 || std::abs(l.back().y - f.window.y_lo) < 1e-12;
  CHECK(from_bottom == static_cast<int>(c.imag_lines.size()));
}

TEST_CASE("zeros sit on intersections of the two families") {
  const XRayField& f = figure1();
  const CurveSet c = trace_curves(f);
  // t = x + iy  <->  s = 1/2 - y + ix
  const auto zs = locate_zeros({0.5 - f.window.y_hi, 0.5 - f.window.y_lo, f.window.x_lo, f.window.x_hi});
  int left_of_line = 0;
  const double cell = std::max(20.0 / 800, 6.0 / 240);
  for (const auto& z : zs) {
    left_of_line += z.beta < 0.5;
    double best = 1e300;
    for (const auto& p : c.intersections) best = std::min(best, std::hypot(p.x - z.gamma, p.y - (0.5 - z.beta)));
    CHECK(best <= 1.5 * cell);
  }
  CHECK(c.intersections.size() == zs.size());
  CHECK(left_of_line >= 1);
}

TEST_CASE("tracing depends on phase only") {
  XRayField f = field_grid(FieldId::rotated_r, {1000, 1010, -1, 1}, 64, 32);
  const CurveSet a = trace_curves(f);
  for (auto& s : f.samples) s.log_abs += 12.5;  // f -> e^{12.5} f
  const CurveSet b = trace_curves(f);
  CHECK(curves_to_csv(a, "") == curves_to_csv(b, ""));
}

TEST_CASE("refinement moves crossings by less than a coarse cell") {
  const Window w{1000, 1010, -1, 1};
  const XRayField f1 = field_grid(FieldId::rotated_r, w, 64, 32);
  const XRayField f2 = field_grid(FieldId::rotated_r, w, 128, 64);
  const auto x1 = crossing_positions(trace_curves(f1), f1.id);
  const auto x2 = crossing_positions(trace_curves(f2), f2.id);
  REQUIRE(x1.size() == x2.size());
  for (std::size_t i = 0; i < x1.size(); ++i) CHECK(std::abs(x1[i] - x2[i]) <= 10.0 / 64);
}

TEST_CASE("completed field: poles and crossings") {
  // Cells containing s = 0, -2, ..., -20 are masked and nothing else.
  const XRayField f = field_grid(FieldId::completed_r, {-21.25, 4.75, -3, 3}, 52, 17);
  CHECK(f.masked_cells == 11);
  for (int j = 0; j < f.ny; ++j)
    for (int i = 0; i < f.nx; ++i)
      if (f.cell_mask[std::size_t(j) * f.nx + i]) {
        const double xc = 0.5 * (f.x(i) + f.x(i + 1));
        CHECK(std::abs(xc - 2.0 * std::round(xc / 2.0)) < 0.25 + 1e-12);
        CHECK(f.y(j) < 0.0);
        CHECK(f.y(j + 1) > 0.0);
      }

  // Critical-line crossings = zeros of zeta on (0, 100).
  const XRayField g = field_grid(FieldId::completed_r, {-2.5, 3.5, 0, 100}, 24, 2000);
  const auto ys = crossing_positions(trace_curves(g), g.id);
  const auto zz = z_zeros(0, 100);
  REQUIRE(ys.size() == zz.size());
  for (std::size_t i = 0; i < ys.size(); ++i) CHECK(std::abs(ys[i] - zz[i]) < 0.05);
}

TEST_CASE("zero-free window: the families never meet") {
  const XRayField f = field_grid(FieldId::completed_r, {4, 10, 100, 110}, 32, 32);
  const CurveSet c = trace_curves(f);
  CHECK(!c.imag_lines.empty());
  CHECK(c.intersections.empty());
}

TEST_CASE("CSV round trip and SVG") {
  const XRayField f = field_grid(FieldId::rotated_r, {1000, 1010, -1, 1}, 64, 32);
  const CurveSet c = trace_curves(f);
  const std::string csv = curves_to_csv(c, "raux test");
  CHECK(csv.rfind("# raux test\ncurve_id,family,vertex_index,x,y\n", 0) == 0);
  const CurveSet back = curves_from_csv(csv);
  REQUIRE(back.real_lines.size() == c.real_lines.size());
  REQUIRE(back.imag_lines.size() == c.imag_lines.size());
  for (std::size_t k = 0; k < c.imag_lines.size(); ++k) {
    REQUIRE(back.imag_lines[k].size() == c.imag_lines[k].size());
    for (std::size_t v = 0; v < c.imag_lines[k].size(); ++v) {
      CHECK(back.imag_lines[k][v].x == c.imag_lines[k][v].x);
      CHECK(back.imag_lines[k][v].y == c.imag_lines[k][v].y);
    }
  }
  CHECK_THROWS_AS(curves_from_csv("0,green,0,1,2\n"), DomainError);

  const std::string svg = render_svg(CurveSet{}, field_grid(FieldId::completed_r, {-3, 4, 0, 60}, 16, 32));
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  // Guides at t = 2 pi, 8 pi, 18 pi (< 60) plus the critical line.
  std::size_t lines = 0;
  for (std::size_t p = svg.find("<line"); p != std::string::npos; p = svg.find("<line", p + 1)) ++lines;
  CHECK(lines == 4);
  CHECK(svg.find("<polyline") == std::string::npos);
}

TEST_CASE("defaults and preconditions") {
  CHECK_THROWS_AS(field_grid(FieldId::rotated_r, {0, 10, -9, 1}, 16, 16), DomainError);
  CHECK_THROWS_AS(field_grid(FieldId::rotated_r, {0, 10, -1, 1}, 8, 16), DomainError);
  CHECK_THROWS_AS(field_from_string("zeta"), DomainError);
  const auto [nx, ny] = default_resolution(FieldId::rotated_r, {200040, 200060, -2, 4});
  // ~1.65 zeros per unit length near 2e5, 8 cells each
  CHECK(nx == doctest::Approx(8 * 20 * std::log(200060 / (2 * M_PI)) / (2 * M_PI)).epsilon(0.01));
  CHECK(ny >= 16);
}
