#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "ymlab/errors.hpp"
#include "ymlab/numerics/tridiagonal.hpp"
#include "ymlab/spectral/potential.hpp"
#include "ymlab/spectral/sector.hpp"

namespace ymlab::spectral {

struct ClosedFormLevel {
  std::size_t k;
  double eigenvalue;      // k (k + 3)
  std::size_t multiplicity;  // (k + 1)(k + 2)(2k + 3) / 6
};

inline std::vector<ClosedFormLevel> s4_spectrum_closed_form(std::size_t kmax) {
  std::vector<ClosedFormLevel> out;
  for (std::size_t k = 0; k <= kmax; ++k)
    out.push_back({k, static_cast<double>(k * (k + 3)), (k + 1) * (k + 2) * (2 * k + 3) / 6});
  return out;
}

struct Eigenvalue {
  double value;
  std::size_t multiplicity;
  std::size_t sector;
};

struct SpectrumResult {
  std::vector<Eigenvalue> eigenvalues;  // ascending
  std::size_t count = 0;                // multiplicity-weighted
  std::size_t max_sector = 0;           // last sector examined
  double certificate_margin = 0.0;      // positivity margin of sector max_sector + 1
  double epsilon = 0.0;
  std::size_t count_check = 0;          // the same count at epsilon / 10
  bool epsilon_stable = true;
  std::size_t grid = 0;
};

inline constexpr std::size_t max_sectors = 10000;

namespace detail {

inline double certificate(std::size_t l, double vmax) {
  const double ll = static_cast<double>(l) * static_cast<double>(l + 2);
  return ll + 2.0 - vmax;
}

inline std::size_t count_negative(const SectorGrid& g, const RadialPotential& v, std::size_t& last_l,
                                  double& margin, std::vector<Eigenvalue>* collect) {
  const double vmax = grid_max(g, [&](double th) { return v.shifted(th); });
  std::size_t total = 0;
  for (std::size_t l = 0;; ++l) {
    if (l > max_sectors) throw truncation_error("count_nonpositive: no positivity certificate up to l = 10^4");
    if (certificate(l, vmax) > 0.0) {
      last_l = l == 0 ? 0 : l - 1;
      margin = certificate(l, vmax);
      return total;
    }
    const auto t = schrodinger_sector(g, l, v);
    const std::size_t c = numerics::count_below(t, g.mass, 0.0);
    total += c * (l + 1) * (l + 1);
    if (collect)
      for (std::size_t k = 0; k < c; ++k)
        collect->push_back({numerics::kth_eigenvalue(t, g.mass, k), (l + 1) * (l + 1), l});
  }
}

}  // namespace detail

// Multiplicity-weighted number of negative eigenvalues of -Delta + 2 - V_eps.
// Sectors are scanned until l(l+2) + 2 exceeds max V_eps on the grid.
inline SpectrumResult count_nonpositive(const RadialPotential& v, std::size_t grid = 2000,
                                        bool with_eigenvalues = false) {
  if (grid < 256) throw parameter_error("count_nonpositive: grid size must be at least 256");
  const SectorGrid g(grid);
  SpectrumResult r;
  r.grid = grid;
  r.epsilon = v.epsilon();
  r.count = detail::count_negative(g, v, r.max_sector, r.certificate_margin,
                                   with_eigenvalues ? &r.eigenvalues : nullptr);
  std::size_t l2 = 0;
  double m2 = 0.0;
  r.count_check = detail::count_negative(g, v.with_epsilon(0.1 * v.epsilon()), l2, m2, nullptr);
  r.epsilon_stable = r.count_check == r.count;
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(),
            [](const Eigenvalue& a, const Eigenvalue& b) { return a.value < b.value; });
  return r;
}

// 36 e^2 rank ||V||^2 / Y(S^4)^2.
inline double clr_bound(const RadialPotential& v, std::size_t rank = 1) {
  if (rank < 1) throw parameter_error("clr_bound: rank must be >= 1");
  return 36.0 * e_squared * static_cast<double>(rank) * v.l2_squared() / s4_yamabe_squared;
}

// Eigenvalues mu <= mu_max of (-Delta + 2) psi = mu V_eps psi over all
// sectors, with multiplicities.  Sector l is bounded below by
// (l(l+2) + 2) / max V_eps.
inline std::vector<Eigenvalue> weighted_spectrum_below(const SectorGrid& g, const RadialPotential& v,
                                                       double mu_max) {
  const std::vector<double> m = weighted_mass(g, v);
  const double vmax = grid_max(g, [&](double th) { return v.shifted(th); });
  std::vector<Eigenvalue> out;
  for (std::size_t l = 0;; ++l) {
    if (l > max_sectors) throw truncation_error("weighted spectrum: sector scan exceeded l = 10^4");
    if (detail::certificate(l, 0.0) / vmax > mu_max) break;
    const auto t = free_sector(g, l);
    for (double mu : numerics::eigenvalues_below(t, m, std::nextafter(mu_max, 2.0 * mu_max + 1.0)))
      out.push_back({mu, (l + 1) * (l + 1), l});
  }
  std::sort(out.begin(), out.end(), [](const Eigenvalue& a, const Eigenvalue& b) { return a.value < b.value; });
  return out;
}

// The lowest eigenvalues of the weighted problem carrying at least n_eigs
// states counted with multiplicity.
inline SpectrumResult weighted_spectrum(const RadialPotential& v, std::size_t n_eigs, std::size_t grid = 2000) {
  if (n_eigs == 0) throw parameter_error("weighted_spectrum: n_eigs must be >= 1");
  const SectorGrid g(grid);
  const double vmax = grid_max(g, [&](double th) { return v.shifted(th); });
  double mu_max = 4.0 / vmax;
  std::vector<Eigenvalue> all;
  for (;;) {
    all = weighted_spectrum_below(g, v, mu_max);
    std::size_t states = 0;
    for (const auto& e : all) states += e.multiplicity;
    if (states >= n_eigs) break;
    mu_max *= 2.0;
  }
  SpectrumResult r;
  r.grid = grid;
  r.epsilon = v.epsilon();
  std::size_t states = 0;
  for (const auto& e : all) {
    if (states >= n_eigs) break;
    r.eigenvalues.push_back(e);
    states += e.multiplicity;
    r.max_sector = std::max(r.max_sector, e.sector);
  }
  r.count = states;
  return r;
}

struct HeatTrace {
  double t = 0.0;
  double partial = 0.0;   // sum over computed eigenvalues
  double tail = 0.0;      // Weyl-law bound on the rest
  double mu_max = 0.0;
  double weyl_a = 0.0;    // N(mu) ~ a mu^2
  std::size_t states = 0;
  double bound = 0.0;     // 36 ||V_eps||^2 / Y^2 t^-2
};

// h(t) = sum_i exp(-2 mu_i t) with a tail certificate.  The cutoff mu_max is
// doubled until the tail is below tail_fraction of the partial sum.
inline HeatTrace heat_trace(const RadialPotential& v, double t, std::size_t grid = 2000,
                            double tail_fraction = 0.01, double mu_cap = 1e5) {
  if (!(t > 0.0)) throw parameter_error("heat_trace: t must be positive");
  const SectorGrid g(grid);
  HeatTrace h;
  h.t = t;
  h.bound = 36.0 * v.l2_squared_shifted() / s4_yamabe_squared / (t * t);
  double mu_max = std::max(8.0 / t, 16.0);
  for (;;) {
    const auto spec = weighted_spectrum_below(g, v, mu_max);
    double partial = 0.0;
    std::size_t states = 0;
    for (const auto& e : spec) {
      partial += static_cast<double>(e.multiplicity) * std::exp(-2.0 * e.value * t);
      states += e.multiplicity;
    }
    // Largest N(mu) / mu^2 over the upper half of the computed range.
    double a = 0.0;
    std::size_t running = 0;
    for (const auto& e : spec) {
      running += e.multiplicity;
      if (e.value >= 0.5 * mu_max) a = std::max(a, static_cast<double>(running) / (e.value * e.value));
    }
    if (a == 0.0) a = static_cast<double>(states) / (0.25 * mu_max * mu_max);
    const double x = 2.0 * mu_max * t;
    const double tail = a * std::exp(-x) * (x + 1.0) / (2.0 * t * t);
    h.partial = partial;
    h.tail = tail;
    h.mu_max = mu_max;
    h.weyl_a = a;
    h.states = states;
    if (tail <= tail_fraction * partial) return h;
    if (mu_max > mu_cap)
      throw resolution_error("heat_trace: tail bound stays above the requested fraction; refine the spectrum");
    mu_max *= 2.0;
  }
}

struct BirmanSchwinger {
  std::size_t negative_count = 0;  // N_0 of -Delta + 2 - V_eps
  std::size_t weighted_count = 0;  // #{mu <= 1}
  bool holds() const { return negative_count <= weighted_count; }
};

inline BirmanSchwinger birman_schwinger_compare(const RadialPotential& v, std::size_t grid = 2000) {
  BirmanSchwinger b;
  b.negative_count = count_nonpositive(v, grid).count;
  const SectorGrid g(grid);
  for (const auto& e : weighted_spectrum_below(g, v, 1.0)) b.weighted_count += e.multiplicity;
  return b;
}

}  // namespace ymlab::spectral
