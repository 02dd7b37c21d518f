#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

#include "ymlab/errors.hpp"
#include "ymlab/numerics/tridiagonal.hpp"
#include "ymlab/spectral/potential.hpp"
#include "ymlab/spectral/sector.hpp"

namespace ymlab::spectral {

// Radial |W|, |F| on the unit S^4 and the constant gamma1; Phi^t = R - t (2 sqrt6 |W| + 3 gamma1 |F|).
struct GaugeProblem {
  std::function<double(double)> weyl_norm = [](double) { return 0.0; };
  std::function<double(double)> curvature_norm = [](double) { return 0.0; };
  double gamma1 = 4.0 * std::sqrt(3.0) / 3.0;
  double scalar_curvature = s4_scalar_curvature;
  std::size_t grid = 2000;

  double phi(double theta, double t) const {
    return scalar_curvature - t * (2.0 * std::sqrt(6.0) * weyl_norm(theta) + 3.0 * gamma1 * curvature_norm(theta));
  }

  void validate() const {
    if (!(gamma1 > 0.0)) throw parameter_error("gauge problem: gamma1 must be positive");
    if (grid < 64) throw parameter_error("gauge problem: grid must have at least 64 cells");
    for (std::size_t j = 0; j <= 256; ++j) {
      const double th = pi * static_cast<double>(j) / 256.0;
      if (weyl_norm(th) < 0.0 || curvature_norm(th) < 0.0)
        throw parameter_error("gauge problem: |W| and |F| must be nonnegative");
    }
  }
};

inline GaugeProblem constant_gauge_problem(double f0, double gamma1, std::size_t grid = 2000) {
  GaugeProblem p;
  p.curvature_norm = [f0](double) { return f0; };
  p.gamma1 = gamma1;
  p.grid = grid;
  return p;
}

inline numerics::SymTridiagonal gauge_sector(const SectorGrid& g, const GaugeProblem& p, std::size_t l, double t) {
  return sector_operator(g, l, 6.0, [&](double th) { return p.phi(th, t); });
}

struct GaugeEigenvalue {
  double lambda1 = 0.0;        // lowest eigenvalue, sector 0
  double lambda1_sector1 = 0.0;
  bool radial_minimal = true;  // sector 0 below sector 1
};

// Lowest eigenvalue of -6 Delta + Phi^t.  Sector 0 carries it; sector 1 is
// computed as a check.
inline GaugeEigenvalue lambda1_Lt_report(const GaugeProblem& p, double t) {
  p.validate();
  const SectorGrid g(p.grid);
  GaugeEigenvalue r;
  r.lambda1 = numerics::kth_eigenvalue(gauge_sector(g, p, 0, t), g.mass, 0);
  r.lambda1_sector1 = numerics::kth_eigenvalue(gauge_sector(g, p, 1, t), g.mass, 0);
  r.radial_minimal = r.lambda1 <= r.lambda1_sector1;
  return r;
}

inline double lambda1_Lt(const GaugeProblem& p, double t) { return lambda1_Lt_report(p, t).lambda1; }

// || f ||_{L^2(S^4)} for a radial f.
inline double l2_norm_s4(const std::function<double(double)>& f) {
  return std::sqrt(integrate_s4([&](double th) { double x = f(th); return x * x; }));
}

// Y / (2 sqrt6 ||W|| + 3 gamma1 ||F||).
inline double t0_lower_bound(const GaugeProblem& p) {
  const double denom = 2.0 * std::sqrt(6.0) * l2_norm_s4(p.weyl_norm) + 3.0 * p.gamma1 * l2_norm_s4(p.curvature_norm);
  if (!(denom > 0.0)) throw parameter_error("t0_lower_bound: W and F both vanish");
  return s4_yamabe / denom;
}

// Smallest t in (0, 1] with lambda1(L^t) = 0, or 1 if lambda1(L^1) >= 0.
inline double find_t0(const GaugeProblem& p) {
  p.validate();
  const SectorGrid g(p.grid);
  auto negative = [&](double t) { return numerics::count_below(gauge_sector(g, p, 0, t), g.mass, 0.0) > 0; };
  if (!(numerics::kth_eigenvalue(gauge_sector(g, p, 0, 0.0), g.mass, 0) > 0.0))
    throw precondition_error("find_t0: lambda1(L^0) <= 0, the Yamabe class is not positive");
  if (!negative(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-15) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (negative(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace ymlab::spectral
