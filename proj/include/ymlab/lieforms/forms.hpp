#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "ymlab/errors.hpp"
#include "ymlab/lieforms/algebra.hpp"

namespace ymlab::lieforms {

// A = sum_i e^i (x) A_i on an orthonormal coframe of R^n.
struct OneForm {
  std::vector<Eigen::MatrixXd> comp;

  std::size_t n() const { return comp.size(); }
  std::size_t m() const { return comp.empty() ? 0 : static_cast<std::size_t>(comp.front().rows()); }

  static OneForm zero(std::size_t n, std::size_t m) {
    return OneForm{std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(m, m))};
  }
};

// F = 1/2 sum_{i,j} e^i ^ e^j (x) F_ij with F_ji = -F_ij, stored densely.
struct TwoForm {
  std::size_t dim = 0;
  std::vector<Eigen::MatrixXd> comp;  // dim * dim entries, row major

  std::size_t n() const { return dim; }
  std::size_t m() const { return comp.empty() ? 0 : static_cast<std::size_t>(comp.front().rows()); }
  Eigen::MatrixXd& at(std::size_t i, std::size_t j) { return comp[i * dim + j]; }
  const Eigen::MatrixXd& at(std::size_t i, std::size_t j) const { return comp[i * dim + j]; }

  static TwoForm zero(std::size_t n, std::size_t m) {
    return TwoForm{n, std::vector<Eigen::MatrixXd>(n * n, Eigen::MatrixXd::Zero(m, m))};
  }

  // Sets F_ij = x and F_ji = -x.
  void set(std::size_t i, std::size_t j, const Eigen::MatrixXd& x) {
    at(i, j) = x;
    at(j, i) = -x;
  }

  double antisymmetry_residual() const {
    double r = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) r = std::max(r, (at(i, j) + at(j, i)).cwiseAbs().maxCoeff());
    return r;
  }
};

namespace detail {

inline void same_shape(const OneForm& a, const OneForm& b, const char* who) {
  if (a.n() != b.n() || a.m() != b.m()) throw dimension_error(std::string(who) + ": 1-form shapes differ");
}

inline void same_shape(const TwoForm& a, const TwoForm& b, const char* who) {
  if (a.n() != b.n() || a.m() != b.m() || a.comp.size() != a.dim * a.dim || b.comp.size() != b.dim * b.dim)
    throw dimension_error(std::string(who) + ": 2-form shapes differ");
}

}  // namespace detail

inline double inner(const Eigen::MatrixXd& p, const Eigen::MatrixXd& q) { return fiber_inner(p, q); }

// <P, Q> = -1/2 sum_i tr(P_i Q_i).
inline double inner(const OneForm& p, const OneForm& q) {
  detail::same_shape(p, q, "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) s += fiber_inner(p.comp[i], q.comp[i]);
  return s;
}

// <F, G> = -1/4 sum_{i,j} tr(F_ij G_ij).
inline double inner(const TwoForm& f, const TwoForm& g) {
  detail::same_shape(f, g, "inner");
  double s = 0.0;
  for (std::size_t k = 0; k < f.comp.size(); ++k) s += fiber_inner(f.comp[k], g.comp[k]);
  return 0.5 * s;
}

inline double norm(const OneForm& a) { return std::sqrt(std::max(0.0, inner(a, a))); }
inline double norm(const TwoForm& f) { return std::sqrt(std::max(0.0, inner(f, f))); }

// [A, B]_jk = 1/2 ([A_j, B_k] + [B_j, A_k]), so that [A, A]_jk = [A_j, A_k].
inline TwoForm bracket_one_forms(const OneForm& a, const OneForm& b) {
  detail::same_shape(a, b, "bracket_one_forms");
  TwoForm out = TwoForm::zero(a.n(), a.m());
  for (std::size_t j = 0; j < a.n(); ++j)
    for (std::size_t k = 0; k < a.n(); ++k)
      out.at(j, k) = 0.5 * (commutator(a.comp[j], b.comp[k]) + commutator(b.comp[j], a.comp[k]));
  return out;
}

// [phi, psi]_ij = sum_k ([phi_ik, psi_kj] - [phi_jk, psi_ki]).
inline TwoForm bracket_two_forms(const TwoForm& phi, const TwoForm& psi) {
  detail::same_shape(phi, psi, "bracket_two_forms");
  const std::size_t n = phi.n();
  TwoForm out = TwoForm::zero(n, phi.m());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        out.at(i, j) += commutator(phi.at(i, k), psi.at(k, j)) - commutator(phi.at(j, k), psi.at(k, i));
  return out;
}

inline double symmetry_residual(const Eigen::MatrixXd& z) { return (z - z.transpose()).cwiseAbs().maxCoeff(); }

// (Z(A))_i = sum_j Z_ij A_j.
inline OneForm endo_action(const Eigen::MatrixXd& z, const OneForm& a) {
  if (static_cast<std::size_t>(z.rows()) != a.n() || z.rows() != z.cols())
    throw dimension_error("endo_action: Z must be n x n");
  if (symmetry_residual(z) > 1e-12 * std::max(1.0, z.cwiseAbs().maxCoeff()))
    throw parameter_error("endo_action: Z must be symmetric");
  OneForm out = OneForm::zero(a.n(), a.m());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) out.comp[i] += z(i, j) * a.comp[j];
  return out;
}

// ([Phi, A])_i = sum_j [Phi_ji, A_j].
inline OneForm endo_action(const TwoForm& phi, const OneForm& a) {
  if (phi.n() != a.n() || phi.m() != a.m()) throw dimension_error("endo_action: Phi and A shapes differ");
  OneForm out = OneForm::zero(a.n(), a.m());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) out.comp[i] += commutator(phi.at(j, i), a.comp[j]);
  return out;
}

inline OneForm operator+(OneForm a, const OneForm& b) {
  detail::same_shape(a, b, "operator+");
  for (std::size_t i = 0; i < a.n(); ++i) a.comp[i] += b.comp[i];
  return a;
}

inline OneForm operator*(double s, OneForm a) {
  for (auto& c : a.comp) c *= s;
  return a;
}

inline TwoForm operator*(double s, TwoForm f) {
  for (auto& c : f.comp) c *= s;
  return f;
}

// Orthonormal basis e^k (x) T_a of Lambda^1(g), ordered k-major.
inline OneForm basis_one_form(const LieAlgebra& g, std::size_t n, std::size_t k, std::size_t a) {
  OneForm e = OneForm::zero(n, g.rep_dim());
  e.comp[k] = g.generator(a);
  return e;
}

inline Eigen::VectorXd coefficients(const LieAlgebra& g, const OneForm& a) {
  const std::size_t d = g.dim();
  Eigen::VectorXd out(a.n() * d);
  for (std::size_t k = 0; k < a.n(); ++k) out.segment(k * d, d) = g.coefficients(a.comp[k]);
  return out;
}

// Matrix of an endomorphism of Lambda^1(g) in the basis e^k (x) T_a.
template <class Action>
Eigen::MatrixXd endo_matrix(const LieAlgebra& g, std::size_t n, Action&& act) {
  const std::size_t d = g.dim();
  Eigen::MatrixXd m(n * d, n * d);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < d; ++a) m.col(k * d + a) = coefficients(g, act(basis_one_form(g, n, k, a)));
  return m;
}

inline Eigen::MatrixXd endo_matrix(const LieAlgebra& g, const Eigen::MatrixXd& z) {
  return endo_matrix(g, static_cast<std::size_t>(z.rows()), [&](const OneForm& a) { return endo_action(z, a); });
}

inline Eigen::MatrixXd endo_matrix(const LieAlgebra& g, const TwoForm& phi) {
  return endo_matrix(g, phi.n(), [&](const OneForm& a) { return endo_action(phi, a); });
}

// Real 2-forms on R^4 with unit norm spanning Lambda^2_+, in the orientation
// e1 ^ e2 ^ e3 ^ e4.
inline std::vector<Eigen::Matrix4d> self_dual_basis() {
  const double r = 1.0 / std::sqrt(2.0);
  auto form = [&](int i, int j, int k, int l) {
    Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
    w(i, j) = r;
    w(j, i) = -r;
    w(k, l) = r;
    w(l, k) = -r;
    return w;
  };
  return {form(0, 1, 2, 3), form(0, 2, 3, 1), form(0, 3, 1, 2)};
}

// Hodge star on 2-forms over R^4.
inline TwoForm hodge_star(const TwoForm& f) {
  if (f.n() != 4) throw dimension_error("hodge_star: base dimension must be 4");
  TwoForm out = TwoForm::zero(4, f.m());
  static const int perm[3][4] = {{0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  for (const auto& p : perm) {
    out.set(p[0], p[1], f.at(p[2], p[3]));
    out.set(p[2], p[3], f.at(p[0], p[1]));
  }
  return out;
}

inline double self_duality_residual(const TwoForm& f) {
  const TwoForm s = hodge_star(f);
  double r = 0.0;
  for (std::size_t k = 0; k < f.comp.size(); ++k) r = std::max(r, (s.comp[k] - f.comp[k]).cwiseAbs().maxCoeff());
  return r;
}

// omega = sum_{s, a} x(s * d + a) w_s (x) T_a with w_s from self_dual_basis().
inline TwoForm self_dual_from_coefficients(const LieAlgebra& g, const Eigen::VectorXd& x) {
  const std::size_t d = g.dim();
  if (static_cast<std::size_t>(x.size()) != 3 * d) throw dimension_error("self_dual_from_coefficients: length");
  const auto basis = self_dual_basis();
  TwoForm out = TwoForm::zero(4, g.rep_dim());
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t a = 0; a < d; ++a) {
      const double c = x(static_cast<Eigen::Index>(s * d + a));
      if (c == 0.0) continue;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          if (basis[s](i, j) != 0.0) out.at(i, j) += c * basis[s](i, j) * g.generator(a);
    }
  return out;
}

// Gaussian coefficients over the generators, normalised to unit length.
template <class Engine>
OneForm random_one_form(const LieAlgebra& g, std::size_t n, Engine& eng) {
  std::normal_distribution<double> nd;
  OneForm a = OneForm::zero(n, g.rep_dim());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t b = 0; b < g.dim(); ++b) a.comp[i] += nd(eng) * g.generator(b);
  const double s = norm(a);
  return s > 0.0 ? (1.0 / s) * a : a;
}

template <class Engine>
TwoForm random_two_form(const LieAlgebra& g, std::size_t n, Engine& eng) {
  std::normal_distribution<double> nd;
  TwoForm f = TwoForm::zero(n, g.rep_dim());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Eigen::MatrixXd x = Eigen::MatrixXd::Zero(g.rep_dim(), g.rep_dim());
      for (std::size_t b = 0; b < g.dim(); ++b) x += nd(eng) * g.generator(b);
      f.set(i, j, x);
    }
  const double s = norm(f);
  return s > 0.0 ? (1.0 / s) * f : f;
}

template <class Engine>
TwoForm random_self_dual(const LieAlgebra& g, Engine& eng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXd x(3 * g.dim());
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = nd(eng);
  return self_dual_from_coefficients(g, x.normalized());
}

// Symmetric trace-free n x n matrix with unit Frobenius norm.
template <class Engine>
Eigen::MatrixXd random_tracefree_symmetric(std::size_t n, Engine& eng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd z(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) z(i, j) = z(j, i) = nd(eng);
  z -= (z.trace() / static_cast<double>(n)) * Eigen::MatrixXd::Identity(n, n);
  return z / z.norm();
}

}  // namespace ymlab::lieforms
