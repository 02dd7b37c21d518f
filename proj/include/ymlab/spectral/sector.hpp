#pragma once

// Sector operators on the unit S^4.  A function f(theta) Y(omega) with Y an
// S^3 harmonic of degree l contributes
//   -f'' - 3 cot(theta) f' + l(l+2) f / sin^2(theta)
// to -Delta.  Cells are centred at theta_j = (j + 1/2) pi / N; the weak form
// against sin^3 is assembled with the face weights sin^3 at the cell
// boundaries, which vanish at both poles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "ymlab/errors.hpp"
#include "ymlab/numerics/tridiagonal.hpp"
#include "ymlab/spectral/potential.hpp"

namespace ymlab::spectral {

struct SectorGrid {
  std::size_t n = 0;
  double h = 0.0;
  std::vector<double> theta;     // cell centres
  std::vector<double> face_w;    // sin^3 at faces, size n + 1
  std::vector<double> mass;      // int_cell sin^3
  std::vector<double> angular;   // int_cell sin

  explicit SectorGrid(std::size_t cells) : n(cells) {
    if (cells < 8) throw parameter_error("sector grid needs at least 8 cells");
    h = pi / static_cast<double>(n);
    theta.resize(n);
    face_w.assign(n + 1, 0.0);
    mass.resize(n);
    angular.resize(n);
    for (std::size_t f = 1; f < n; ++f) {
      const double s = std::sin(h * static_cast<double>(f));
      face_w[f] = s * s * s;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double a = h * static_cast<double>(j), b = a + h;
      theta[j] = a + 0.5 * h;
      const double sa = std::sin(a), sb = std::sin(b);
      // cos a - cos b, and 1 - cos a cos b, without cancellation.
      const double d = 2.0 * std::sin(theta[j]) * std::sin(0.5 * h);
      const double one_minus = 2.0 * std::sin(0.5 * h) * std::sin(0.5 * h) + sa * sb;
      angular[j] = d;
      mass[j] = d * (sa * sa + sb * sb + one_minus) / 3.0;
    }
  }

  std::size_t size() const { return n; }
};

inline double sector_multiplicity(std::size_t l) { return static_cast<double>((l + 1) * (l + 1)); }

// Stiffness of kappa (-Delta_l) + q(theta) with respect to the sin^3 mass.
inline numerics::SymTridiagonal sector_operator(const SectorGrid& g, std::size_t l, double kappa,
                                                const std::function<double(double)>& q) {
  numerics::SymTridiagonal t;
  t.diag.resize(g.n);
  t.off.resize(g.n - 1);
  const double ll = static_cast<double>(l) * static_cast<double>(l + 2);
  for (std::size_t j = 0; j < g.n; ++j) {
    t.diag[j] = kappa * ((g.face_w[j] + g.face_w[j + 1]) / g.h + ll * g.angular[j]) + q(g.theta[j]) * g.mass[j];
    if (j + 1 < g.n) t.off[j] = -kappa * g.face_w[j + 1] / g.h;
  }
  return t;
}

// -Delta + 2 - V_eps in sector l.
inline numerics::SymTridiagonal schrodinger_sector(const SectorGrid& g, std::size_t l, const RadialPotential& v) {
  return sector_operator(g, l, 1.0, [&](double th) { return 2.0 - v.shifted(th); });
}

// -Delta + 2 in sector l.
inline numerics::SymTridiagonal free_sector(const SectorGrid& g, std::size_t l) {
  return sector_operator(g, l, 1.0, [](double) { return 2.0; });
}

// Diagonal of the V_eps-weighted mass.
inline std::vector<double> weighted_mass(const SectorGrid& g, const RadialPotential& v) {
  std::vector<double> m(g.n);
  for (std::size_t j = 0; j < g.n; ++j) {
    const double w = v.shifted(g.theta[j]);
    if (!(w > 0.0)) throw parameter_error("weighted mass: V_eps must be positive");
    m[j] = g.mass[j] * w;
  }
  return m;
}

inline double grid_max(const SectorGrid& g, const std::function<double(double)>& f) {
  double m = -std::numeric_limits<double>::infinity();
  for (double th : g.theta) m = std::max(m, f(th));
  return m;
}

}  // namespace ymlab::spectral
