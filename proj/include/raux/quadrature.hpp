#pragma once

// Composite Gauss-Legendre quadrature for smooth (possibly complex-valued)
// integrands on finite intervals.

#include <cmath>
#include <span>
#include <vector>

namespace raux {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// n-point rule, computed by Newton iteration on P_n and cached.
const GaussRule& gauss_legendre(int n);

// Integrate f over [breaks.front(), breaks.back()], splitting at every break
// and into panels no wider than max_width.
template <class F>
auto integrate_composite(F&& f, std::span<const double> breaks, double max_width, int order = 16) {
  const GaussRule& g = gauss_legendre(order);
  using R = decltype(f(0.0));
  R total{};
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    const double lo = breaks[b], hi = breaks[b + 1];
    if (!(hi > lo)) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_width)));
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * width, half = 0.5 * width;
      R acc{};
      for (std::size_t k = 0; k < g.x.size(); ++k) acc += g.w[k] * f(mid + half * g.x[k]);
      total += half * acc;
    }
  }
  return total;
}

}  // namespace raux
