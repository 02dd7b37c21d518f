#pragma once

// Symmetric tridiagonal pencils (T, M) with M diagonal and positive.
// Counts come from the inertia of the LDL^T factorisation of T - sigma M;
// eigenvalues follow by bisection on the count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "ymlab/errors.hpp"

namespace ymlab::numerics {

struct SymTridiagonal {
  std::vector<double> diag;  // size n
  std::vector<double> off;   // size n - 1, off[j] couples j and j + 1

  std::size_t size() const { return diag.size(); }
};

namespace detail {

inline void check_pencil(const SymTridiagonal& t, std::span<const double> mass) {
  if (t.diag.empty()) throw dimension_error("tridiagonal: empty matrix");
  if (t.off.size() + 1 != t.diag.size())
    throw dimension_error("tridiagonal: off-diagonal length must be n - 1");
  if (!mass.empty() && mass.size() != t.diag.size())
    throw dimension_error("tridiagonal: mass length must match the diagonal");
}

inline double mass_at(std::span<const double> mass, std::size_t j) {
  return mass.empty() ? 1.0 : mass[j];
}

}  // namespace detail

// Number of eigenvalues of T x = lambda M x strictly below sigma.  An empty
// mass span means M = I.
inline std::size_t count_below(const SymTridiagonal& t, std::span<const double> mass,
                               double sigma) {
  detail::check_pencil(t, mass);
  const std::size_t n = t.size();
  // Pivots that hit zero exactly are nudged to the negative side; the
  // eigenvalue then sits at sigma and is not counted as strictly below.
  constexpr double tiny = std::numeric_limits<double>::min() * 16.0;
  std::size_t negatives = 0;
  double pivot = t.diag[0] - sigma * detail::mass_at(mass, 0);
  if (pivot == 0.0) pivot = tiny;
  if (pivot < 0.0) ++negatives;
  for (std::size_t j = 1; j < n; ++j) {
    const double b = t.off[j - 1];
    pivot = t.diag[j] - sigma * detail::mass_at(mass, j) - b * b / pivot;
    if (pivot == 0.0) pivot = tiny;
    if (pivot < 0.0) ++negatives;
  }
  return negatives;
}

inline std::size_t count_below(const SymTridiagonal& t, double sigma) {
  return count_below(t, std::span<const double>{}, sigma);
}

// Gershgorin interval of M^{-1/2} T M^{-1/2}.
inline std::pair<double, double> gershgorin_bounds(const SymTridiagonal& t,
                                                   std::span<const double> mass) {
  detail::check_pencil(t, mass);
  const std::size_t n = t.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t j = 0; j < n; ++j) {
    const double mj = detail::mass_at(mass, j);
    if (!(mj > 0.0)) throw parameter_error("tridiagonal: mass must be positive");
    double radius = 0.0;
    if (j > 0) radius += std::abs(t.off[j - 1]) / std::sqrt(mj * detail::mass_at(mass, j - 1));
    if (j + 1 < n) radius += std::abs(t.off[j]) / std::sqrt(mj * detail::mass_at(mass, j + 1));
    const double centre = t.diag[j] / mj;
    lo = std::min(lo, centre - radius);
    hi = std::max(hi, centre + radius);
  }
  const double pad = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return {lo - pad, hi + pad};
}

// k-th smallest eigenvalue (0-based) of the pencil, by bisection on the
// inertia count.  Converges to a few ulps of the eigenvalue magnitude.
inline double kth_eigenvalue(const SymTridiagonal& t, std::span<const double> mass,
                             std::size_t k) {
  if (k >= t.size()) throw parameter_error("tridiagonal: eigenvalue index out of range");
  auto [lo, hi] = gershgorin_bounds(t, mass);
  for (int it = 0; it < 256; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) break;
    if (count_below(t, mass, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

inline double kth_eigenvalue(const SymTridiagonal& t, std::size_t k) {
  return kth_eigenvalue(t, std::span<const double>{}, k);
}

// All eigenvalues strictly below sigma, ascending.
inline std::vector<double> eigenvalues_below(const SymTridiagonal& t,
                                             std::span<const double> mass, double sigma) {
  const std::size_t count = count_below(t, mass, sigma);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(kth_eigenvalue(t, mass, k));
  return out;
}

// The lowest `count` eigenvalues, ascending.
inline std::vector<double> lowest_eigenvalues(const SymTridiagonal& t,
                                              std::span<const double> mass, std::size_t count) {
  count = std::min(count, t.size());
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(kth_eigenvalue(t, mass, k));
  return out;
}

}  // namespace ymlab::numerics
