#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "ymlab/errors.hpp"
#include "ymlab/lieforms/algebra.hpp"
#include "ymlab/lieforms/forms.hpp"
#include "ymlab/numerics/rng.hpp"

namespace ymlab::lieforms {

inline constexpr double sqrt2 = std::numbers::sqrt2;
inline const double gamma1_ceiling = 4.0 * std::sqrt(3.0) / 3.0;

struct AscentOptions {
  std::size_t n_samples = 64;
  std::size_t ascent_steps = 500;
  std::uint64_t seed = 0;
};

namespace detail {

// Maximises f over the unit sphere in R^k by projected gradient ascent from
// n_samples Gaussian starts; start s draws from stream (seed, s).
template <class Value, class Gradient>
double sphere_ascent(std::size_t k, const AscentOptions& opt, Value&& f, Gradient&& grad) {
  if (opt.n_samples == 0) throw parameter_error("ascent: n_samples must be >= 1");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < opt.n_samples; ++s) {
    auto eng = numerics::stream(opt.seed, s);
    std::normal_distribution<double> nd;
    Eigen::VectorXd x(k);
    for (std::size_t i = 0; i < k; ++i) x(i) = nd(eng);
    x.normalize();
    double fx = f(x);
    double step = 0.5;
    for (std::size_t it = 0; it < opt.ascent_steps && step > 1e-14; ++it) {
      Eigen::VectorXd g = grad(x);
      g -= g.dot(x) * x;
      if (g.norm() < 1e-15) break;
      const Eigen::VectorXd y = (x + step * g).normalized();
      const double fy = f(y);
      if (fy > fx) {
        x = y;
        fx = fy;
        step *= 1.25;
      } else {
        step *= 0.5;
      }
    }
    best = std::max(best, fx);
  }
  return best;
}

}  // namespace detail

// sup |[A, B]| / (|A| |B|) over the algebra.
inline double estimate_gamma0(const LieAlgebra& g, const AscentOptions& opt = {}) {
  if (g.is_abelian()) return 0.0;
  const std::size_t d = g.dim();
  std::vector<Eigen::MatrixXd> c(d, Eigen::MatrixXd(d, d));
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      for (std::size_t e = 0; e < d; ++e) c[e](a, b) = g.structure_constant(a, b, e);
  auto bracket = [&](const Eigen::VectorXd& x) {
    const auto a = x.head(d), b = x.tail(d);
    Eigen::VectorXd v(d);
    for (std::size_t e = 0; e < d; ++e) v(e) = a.dot(c[e] * b);
    return v;
  };
  // Unit a and b from the two halves of x.
  auto split = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(2 * d);
    y.head(d) = x.head(d).normalized();
    y.tail(d) = x.tail(d).normalized();
    return y;
  };
  auto value = [&](const Eigen::VectorXd& x) {
    if (x.head(d).norm() == 0.0 || x.tail(d).norm() == 0.0) return 0.0;
    return bracket(split(x)).squaredNorm();
  };
  auto gradient = [&](const Eigen::VectorXd& x) {
    const double na = x.head(d).norm(), nb = x.tail(d).norm();
    const Eigen::VectorXd y = split(x);
    const Eigen::VectorXd v = bracket(y);
    Eigen::VectorXd ga = Eigen::VectorXd::Zero(d), gb = Eigen::VectorXd::Zero(d);
    for (std::size_t e = 0; e < d; ++e) {
      ga += 2.0 * v(e) * (c[e] * y.tail(d));
      gb += 2.0 * v(e) * (c[e].transpose() * y.head(d));
    }
    ga = (ga - ga.dot(y.head(d)) * y.head(d)) / na;
    gb = (gb - gb.dot(y.tail(d)) * y.tail(d)) / nb;
    Eigen::VectorXd out(2 * d);
    out << ga, gb;
    return out;
  };
  return std::sqrt(std::max(0.0, detail::sphere_ascent(2 * d, opt, value, gradient)));
}

// Symmetrised cubic form K(x, x, x) = <omega, [omega, omega]> on the
// coefficients of omega in the basis w_s (x) T_a of Lambda^2_+(g).
inline std::vector<double> gamma1_cubic(const LieAlgebra& g) {
  const std::size_t k = 3 * g.dim();
  std::vector<TwoForm> e;
  for (std::size_t i = 0; i < k; ++i) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
    x(i) = 1.0;
    e.push_back(self_dual_from_coefficients(g, x));
  }
  std::vector<double> raw(k * k * k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t l = 0; l < k; ++l) {
      const TwoForm b = bracket_two_forms(e[j], e[l]);
      for (std::size_t i = 0; i < k; ++i) raw[(i * k + j) * k + l] = inner(e[i], b);
    }
  std::vector<double> sym(raw.size());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t l = 0; l < k; ++l) {
        auto r = [&](std::size_t p, std::size_t q, std::size_t s) { return raw[(p * k + q) * k + s]; };
        sym[(i * k + j) * k + l] =
            (r(i, j, l) + r(i, l, j) + r(j, i, l) + r(j, l, i) + r(l, i, j) + r(l, j, i)) / 6.0;
      }
  return sym;
}

// <omega, [omega, omega]> / |omega|^3 for a self-dual g-valued 2-form.
inline double gamma1_ratio(const TwoForm& omega) {
  const double s = norm(omega);
  if (s == 0.0) throw parameter_error("gamma1_ratio: omega must be nonzero");
  return inner(omega, bracket_two_forms(omega, omega)) / (s * s * s);
}

// sup over Lambda^2_+(g) \ {0} of <omega, [omega, omega]> / |omega|^3, n = 4.
inline double estimate_gamma1(const LieAlgebra& g, const AscentOptions& opt = {}) {
  if (g.is_abelian()) return 0.0;
  const std::size_t k = 3 * g.dim();
  const std::vector<double> t = gamma1_cubic(g);
  auto value = [&](const Eigen::VectorXd& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < k; ++l) s += t[(i * k + j) * k + l] * x(i) * x(j) * x(l);
    return s;
  };
  auto gradient = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd gr = Eigen::VectorXd::Zero(k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < k; ++l) gr(i) += 3.0 * t[(i * k + j) * k + l] * x(j) * x(l);
    return gr;
  };
  return std::max(0.0, detail::sphere_ascent(k, opt, value, gradient));
}

// gamma0 sqrt((n-1)/(2n)) |A|^2 - |[A, A]|.
inline double sharp_bracket_residual(const OneForm& a, double gamma0) {
  const double n = static_cast<double>(a.n());
  const double a2 = inner(a, a);
  return gamma0 * std::sqrt((n - 1.0) / (2.0 * n)) * a2 - norm(bracket_one_forms(a, a));
}

// sqrt((n-1)/n) sqrt(|Z|^2 + 2 gamma0^2 |Phi|^2) |A|^2 - |<Z(A) + [Phi, A], A>|.
inline double bsharp_residual(const Eigen::MatrixXd& z, const TwoForm& phi, const OneForm& a, double gamma0) {
  const double a2 = inner(a, a);
  if (a2 == 0.0) throw parameter_error("bsharp_residual: A must be nonzero");
  if (std::abs(z.trace()) > 1e-12 * std::max(1.0, z.norm()))
    throw parameter_error("bsharp_residual: Z must be trace-free");
  const double n = static_cast<double>(a.n());
  const double phi2 = inner(phi, phi);
  const double lhs = std::abs(inner(endo_action(z, a) + endo_action(phi, a), a));
  return std::sqrt((n - 1.0) / n) * std::sqrt(z.squaredNorm() + 2.0 * gamma0 * gamma0 * phi2) * a2 - lhs;
}

// <Z(A), B> - <Z(B), A> and <[Phi, A], B> - <[Phi, B], A>.
inline double z_symmetry_residual(const Eigen::MatrixXd& z, const OneForm& a, const OneForm& b) {
  return inner(endo_action(z, a), b) - inner(endo_action(z, b), a);
}

inline double phi_symmetry_residual(const TwoForm& phi, const OneForm& a, const OneForm& b) {
  return inner(endo_action(phi, a), b) - inner(endo_action(phi, b), a);
}

// <Z(A), [Phi, B]>.
inline double range_orthogonality_residual(const Eigen::MatrixXd& z, const TwoForm& phi, const OneForm& a,
                                           const OneForm& b) {
  return inner(endo_action(z, a), endo_action(phi, b));
}

// Trace of the Z-action on Lambda^1(g).
inline double z_action_trace(const LieAlgebra& g, const Eigen::MatrixXd& z) { return endo_matrix(g, z).trace(); }

struct JacobiPotential {
  double a_lower;  // (R - 3 gamma1 t0 |F|) / 12
  double b_lower;  // -V
  double v;        // (3/4 |Z|^2 + 3 alpha^2 |F|^2)^{1/2}
};

inline double jacobi_alpha(double t0, double gamma1) { return 2.0 - std::sqrt(3.0) / 12.0 * gamma1 * t0; }

// 3 alpha^2 + 9/16 (gamma1 t0)^2 as a polynomial in x = gamma1 t0.
inline double jacobi_quadratic(double x) { return 0.625 * x * x - std::sqrt(3.0) * x + 12.0; }

inline JacobiPotential jacobi_potential(double r_scalar, double z_norm, double f_norm, double t0, double gamma1) {
  if (!(t0 > 0.0 && t0 <= 1.0)) throw parameter_error("jacobi_potential: t0 must lie in (0, 1]");
  if (!(gamma1 > 0.0 && gamma1 <= gamma1_ceiling + 1e-12))
    throw parameter_error("jacobi_potential: gamma1 must lie in (0, 4 sqrt 3 / 3]");
  if (z_norm < 0.0 || f_norm < 0.0) throw parameter_error("jacobi_potential: norms must be nonnegative");
  const double alpha = jacobi_alpha(t0, gamma1);
  const double v = std::sqrt(0.75 * z_norm * z_norm + 3.0 * alpha * alpha * f_norm * f_norm);
  return {(r_scalar - 3.0 * gamma1 * t0 * f_norm) / 12.0, -v, v};
}

inline JacobiPotential jacobi_potential(double r_scalar, const Eigen::MatrixXd& z, const TwoForm& f, double t0,
                                        double gamma1) {
  if (symmetry_residual(z) > 1e-12 * std::max(1.0, z.norm()))
    throw parameter_error("jacobi_potential: Z must be symmetric");
  return jacobi_potential(r_scalar, z.norm(), norm(f), t0, gamma1);
}

}  // namespace ymlab::lieforms
