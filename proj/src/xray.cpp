#include "raux/xray.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "raux/errors.hpp"
#include "raux/raux_core.hpp"
#include "raux/special_fn.hpp"

namespace raux {

std::string to_string(FieldId id) { return id == FieldId::rotated_r ? "rotated_r" : "completed_r"; }

FieldId field_from_string(const std::string& s) {
  if (s == "rotated" || s == "rotated_r") return FieldId::rotated_r;
  if (s == "completed" || s == "completed_r") return FieldId::completed_r;
  throw DomainError("unknown field '" + s + "' (rotated|completed)");
}

void Window::validate() const {
  if (!(x_lo < x_hi) || !(y_lo < y_hi)) throw DomainError("window: need x_lo < x_hi and y_lo < y_hi");
}

FieldSample sample_field(FieldId id, cplx z) {
  FieldSample out;
  try {
    if (id == FieldId::rotated_r) {
      const EvalResult th = theta(z);
      const ScaledEval r = r_aux_integral_scaled(cplx(0.5 - z.imag(), z.real()));
      const double m = std::abs(r.value.mantissa);
      if (!(m > 0.0)) throw DomainError("zero sample");
      out.phase = std::arg(r.value.mantissa) + th.value.real();
      out.log_abs = std::log(m) + r.value.log_scale - th.value.imag();
    } else {
      const CompletedFactor cf = completed_factor(z);
      const ScaledEval r = r_aux_integral_scaled(z);
      const double m = std::abs(r.value.mantissa);
      if (!(m > 0.0)) throw DomainError("zero sample");
      out.phase = std::arg(r.value.mantissa) + cf.arg;
      out.log_abs = std::log(m) + r.value.log_scale + cf.log_abs;
    }
    out.phase = std::remainder(out.phase, kTwoPi);
    if (!std::isfinite(out.phase) || !std::isfinite(out.log_abs)) out.masked = true;
  } catch (const Error&) {
    out = {};
    out.masked = true;
  }
  return out;
}

XRayField field_grid(FieldId id, const Window& w, int nx, int ny, int jobs) {
  w.validate();
  if (nx < 16 || ny < 16) throw DomainError("x-ray grid needs at least 16 cells each way");
  if (id == FieldId::rotated_r && (std::abs(w.y_lo) > 8.0 || std::abs(w.y_hi) > 8.0))
    throw DomainError("rotated field: window must satisfy |Im t| <= 8");
  XRayField f;
  f.id = id;
  f.window = w;
  f.nx = nx;
  f.ny = ny;
  f.samples.resize(std::size_t(nx + 1) * (ny + 1));

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int j; (j = next++) <= ny;)
      for (int i = 0; i <= nx; ++i) f.samples[std::size_t(j) * (nx + 1) + i] = sample_field(id, {f.x(i), f.y(j)});
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < std::max(1, jobs); ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& s : f.samples) f.masked_nodes += s.masked;
  f.cell_mask.assign(std::size_t(nx) * ny, 0);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      bool m = f.at(i, j).masked || f.at(i + 1, j).masked || f.at(i, j + 1).masked || f.at(i + 1, j + 1).masked;
      if (id == FieldId::completed_r && f.y(j) <= 0.0 && f.y(j + 1) >= 0.0) {
        // Gamma(s/2) poles at s = 0, -2, -4, ...
        const double x0 = f.x(i), x1 = f.x(i + 1);
        for (double p = std::min(0.0, 2.0 * std::floor(x1 / 2.0)); p >= x0 && !m; p -= 2.0) m = p <= x1;
      }
      f.cell_mask[std::size_t(j) * nx + i] = m;
      f.masked_cells += m;
    }
  return f;
}

std::pair<int, int> default_resolution(FieldId id, const Window& w) {
  w.validate();
  auto density = [](double t) { return std::log(std::max(std::abs(t), 20.0) / kTwoPi) / kTwoPi; };
  const double sx = w.x_hi - w.x_lo, sy = w.y_hi - w.y_lo;
  if (id == FieldId::rotated_r) {
    const int nx = std::max(16, int(std::ceil(8.0 * sx * density(std::max(std::abs(w.x_lo), std::abs(w.x_hi))))));
    return {nx, std::max(16, int(std::ceil(sy / (sx / nx))))};
  }
  const int ny = std::max(16, int(std::ceil(8.0 * sy * density(std::max(std::abs(w.y_lo), std::abs(w.y_hi))))));
  return {std::max(16, int(std::ceil(sx / (sy / ny)))), ny};
}

namespace {

struct Seg {
  std::uint64_t ka, kb;
  Point a, b;
  int cell;
};

bool intersect(const Point& p, const Point& p2, const Point& q, const Point& q2, Point& out) {
  const double rx = p2.x - p.x, ry = p2.y - p.y, sx = q2.x - q.x, sy = q2.y - q.y;
  const double den = rx * sy - ry * sx;
  if (den == 0.0) return false;
  const double u = ((q.x - p.x) * sy - (q.y - p.y) * sx) / den;
  const double v = ((q.x - p.x) * ry - (q.y - p.y) * rx) / den;
  if (u < 0.0 || u > 1.0 || v < 0.0 || v > 1.0) return false;
  out = {p.x + u * rx, p.y + u * ry};
  return true;
}

std::vector<Polyline> assemble(const std::vector<Seg>& segs) {
  std::unordered_map<std::uint64_t, std::vector<int>> adj;
  for (int k = 0; k < int(segs.size()); ++k) {
    adj[segs[k].ka].push_back(k);
    adj[segs[k].kb].push_back(k);
  }
  std::vector<char> used(segs.size(), 0);
  std::vector<Polyline> out;
  // Extends from key `at` through unused segments; appends the far points.
  auto extend = [&](std::uint64_t at, Polyline& line) {
    for (;;) {
      int nxt = -1;
      for (int k : adj[at])
        if (!used[k]) {
          nxt = k;
          break;
        }
      if (nxt < 0) return;
      used[nxt] = 1;
      const Seg& s = segs[nxt];
      if (s.ka == at) {
        line.push_back(s.b);
        at = s.kb;
      } else {
        line.push_back(s.a);
        at = s.ka;
      }
    }
  };
  for (int k = 0; k < int(segs.size()); ++k) {
    if (used[k]) continue;
    used[k] = 1;
    Polyline fwd{segs[k].a, segs[k].b};
    extend(segs[k].kb, fwd);
    Polyline back;
    extend(segs[k].ka, back);
    std::reverse(back.begin(), back.end());
    back.insert(back.end(), fwd.begin(), fwd.end());
    out.push_back(std::move(back));
  }
  return out;
}

}  // namespace

CurveSet trace_curves(const XRayField& f) {
  const int nx = f.nx, ny = f.ny;
  auto hkey = [&](int i, int j) { return (std::uint64_t(j) * (nx + 1) + i) * 2; };
  auto vkey = [&](int i, int j) { return (std::uint64_t(j) * (nx + 1) + i) * 2 + 1; };
  std::vector<Seg> segs[2];  // 0: Re f = 0 (imag lines), 1: Im f = 0 (real lines)
  CurveSet cs;
  std::map<int, double> center_phase;  // saddle cells, sampled on demand

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (f.cell_mask[std::size_t(j) * nx + i]) continue;
      const int cell = j * nx + i;
      const int ci[4] = {i, i + 1, i + 1, i}, cj[4] = {j, j, j + 1, j + 1};
      for (int fam = 0; fam < 2; ++fam) {
        double v[4];
        for (int c = 0; c < 4; ++c) {
          const double ph = f.at(ci[c], cj[c]).phase;
          v[c] = fam == 0 ? std::cos(ph) : std::sin(ph);
        }
        auto pos = [&](int c) { return v[c] >= 0.0; };
        // edges: 0 bottom c0-c1, 1 right c1-c2, 2 top c3-c2, 3 left c0-c3
        const int ea[4] = {0, 1, 3, 0}, eb[4] = {1, 2, 2, 3};
        const std::uint64_t ek[4] = {hkey(i, j), vkey(i + 1, j), hkey(i, j + 1), vkey(i, j)};
        Point ep[4];
        int hit[4], nh = 0;
        for (int e = 0; e < 4; ++e) {
          const int a = ea[e], b = eb[e];
          if (pos(a) == pos(b)) continue;
          const double r = v[a] / (v[a] - v[b]);
          ep[e] = {f.x(ci[a]) + r * (f.x(ci[b]) - f.x(ci[a])), f.y(cj[a]) + r * (f.y(cj[b]) - f.y(cj[a]))};
          hit[nh++] = e;
        }
        auto add = [&](int e1, int e2) { segs[fam].push_back({ek[e1], ek[e2], ep[e1], ep[e2], cell}); };
        if (nh == 2) {
          add(hit[0], hit[1]);
        } else if (nh == 4) {
          auto it = center_phase.find(cell);
          if (it == center_phase.end()) {
            ++cs.saddle_cells;
            const FieldSample c = sample_field(f.id, {0.5 * (f.x(i) + f.x(i + 1)), 0.5 * (f.y(j) + f.y(j + 1))});
            it = center_phase.emplace(cell, c.masked ? 0.0 : c.phase).first;
          }
          const double vc = fam == 0 ? std::cos(it->second) : std::sin(it->second);
          if ((vc >= 0.0) == pos(0)) {
            add(0, 1);  // c0's sign joins through the centre: cut off c1 and c3
            add(2, 3);
          } else {
            add(3, 0);
            add(1, 2);
          }
        }
      }
    }

  // Family intersections, cell by cell.
  {
    std::unordered_map<int, std::vector<int>> by_cell;
    for (int k = 0; k < int(segs[1].size()); ++k) by_cell[segs[1][k].cell].push_back(k);
    for (const Seg& s : segs[0]) {
      auto it = by_cell.find(s.cell);
      if (it == by_cell.end()) continue;
      for (int k : it->second) {
        Point p;
        if (intersect(s.a, s.b, segs[1][k].a, segs[1][k].b, p)) cs.intersections.push_back(p);
      }
    }
  }

  // Axis crossings of the imaginary lines, half-open so a vertex on the axis
  // counts once.
  for (const Seg& s : segs[0]) {
    if (f.id == FieldId::rotated_r) {
      const double lo = std::min(s.a.y, s.b.y), hi = std::max(s.a.y, s.b.y);
      if (lo < 0.0 && 0.0 <= hi) {
        const double r = s.a.y == s.b.y ? 0.0 : (0.0 - s.a.y) / (s.b.y - s.a.y);
        cs.crossings.push_back({s.a.x + r * (s.b.x - s.a.x), 0.0});
      }
    } else {
      const double lo = std::min(s.a.x, s.b.x), hi = std::max(s.a.x, s.b.x);
      if (lo < 0.5 && 0.5 <= hi) {
        const double r = s.a.x == s.b.x ? 0.0 : (0.5 - s.a.x) / (s.b.x - s.a.x);
        cs.crossings.push_back({0.5, s.a.y + r * (s.b.y - s.a.y)});
      }
    }
  }
  std::sort(cs.crossings.begin(), cs.crossings.end(),
            [](const Point& a, const Point& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });

  cs.imag_lines = assemble(segs[0]);
  cs.real_lines = assemble(segs[1]);
  return cs;
}

std::vector<double> crossing_positions(const CurveSet& c, FieldId id) {
  std::vector<double> out;
  for (const auto& p : c.crossings) out.push_back(id == FieldId::rotated_r ? p.x : p.y);
  std::sort(out.begin(), out.end());
  return out;
}

std::string curves_to_csv(const CurveSet& c, const std::string& header_line) {
  std::ostringstream o;
  o << std::setprecision(17);
  if (!header_line.empty()) o << "# " << header_line << "\n";
  o << "curve_id,family,vertex_index,x,y\n";
  int id = 0;
  for (int fam = 0; fam < 2; ++fam)
    for (const auto& line : fam == 0 ? c.real_lines : c.imag_lines) {
      for (std::size_t k = 0; k < line.size(); ++k)
        o << id << ',' << (fam == 0 ? "real" : "imag") << ',' << k << ',' << line[k].x << ',' << line[k].y << '\n';
      ++id;
    }
  return o.str();
}

CurveSet curves_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<int, std::pair<bool, Polyline>> curves;  // id -> (is_imag, vertices)
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.rfind("curve_id", 0) == 0) continue;
    std::istringstream ls(line);
    std::string f[5];
    for (int k = 0; k < 5; ++k)
      if (!std::getline(ls, f[k], ',')) throw DomainError("curve CSV line " + std::to_string(lineno) + ": expected 5 fields");
    if (f[1] != "real" && f[1] != "imag") throw DomainError("curve CSV line " + std::to_string(lineno) + ": bad family");
    auto& c = curves[std::stoi(f[0])];
    c.first = f[1] == "imag";
    if (std::stoul(f[2]) != c.second.size())
      throw DomainError("curve CSV line " + std::to_string(lineno) + ": vertex index out of order");
    c.second.push_back({std::stod(f[3]), std::stod(f[4])});
  }
  CurveSet cs;
  for (auto& [id, c] : curves) (c.first ? cs.imag_lines : cs.real_lines).push_back(std::move(c.second));
  return cs;
}

std::string render_svg(const CurveSet& c, const XRayField& f, const std::string& title) {
  const Window& w = f.window;
  const double W = 900.0;
  const double H = std::clamp(W * (w.y_hi - w.y_lo) / (w.x_hi - w.x_lo), 200.0, 1800.0);
  auto px = [&](double x) { return (x - w.x_lo) / (w.x_hi - w.x_lo) * W; };
  auto py = [&](double y) { return H - (y - w.y_lo) / (w.y_hi - w.y_lo) * H; };
  std::ostringstream o;
  o << std::fixed << std::setprecision(2);
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) o << "<title>" << title << "</title>\n";

  // Guides at t = 2 pi n^2 and the critical line.
  o << "<g stroke=\"#999\" stroke-width=\"0.6\" stroke-dasharray=\"4 3\">\n";
  const bool t_is_x = f.id == FieldId::rotated_r;
  const double t_lo = t_is_x ? w.x_lo : w.y_lo, t_hi = t_is_x ? w.x_hi : w.y_hi;
  for (long n = std::max(1L, long(std::ceil(std::sqrt(std::max(t_lo, 0.0) / kTwoPi)))); kTwoPi * n * n <= t_hi; ++n) {
    const double t = kTwoPi * double(n) * n;
    if (t < t_lo) continue;
    if (t_is_x)
      o << "<line x1=\"" << px(t) << "\" y1=\"0\" x2=\"" << px(t) << "\" y2=\"" << H << "\"/>\n";
    else
      o << "<line x1=\"0\" y1=\"" << py(t) << "\" x2=\"" << W << "\" y2=\"" << py(t) << "\"/>\n";
  }
  o << "</g>\n<g stroke=\"#444\" stroke-width=\"0.8\">\n";
  if (t_is_x && w.y_lo <= 0.0 && 0.0 <= w.y_hi)
    o << "<line x1=\"0\" y1=\"" << py(0.0) << "\" x2=\"" << W << "\" y2=\"" << py(0.0) << "\"/>\n";
  if (!t_is_x && w.x_lo <= 0.5 && 0.5 <= w.x_hi)
    o << "<line x1=\"" << px(0.5) << "\" y1=\"0\" x2=\"" << px(0.5) << "\" y2=\"" << H << "\"/>\n";
  o << "</g>\n";

  auto draw = [&](const std::vector<Polyline>& lines, const char* color, const char* cls) {
    o << "<g class=\"" << cls << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\">\n";
    for (const auto& l : lines) {
      o << "<polyline points=\"";
      for (const auto& p : l) o << px(p.x) << ',' << py(p.y) << ' ';
      o << "\"/>\n";
    }
    o << "</g>\n";
  };
  draw(c.real_lines, "#c0392b", "real");
  draw(c.imag_lines, "#2060c0", "imag");
  o << "</svg>\n";
  return o.str();
}

}  // namespace raux
