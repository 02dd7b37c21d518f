#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ymlab/errors.hpp"

namespace ymlab::lieforms {

// Fiber metric on antisymmetric matrices: <X, Y> = -1/2 tr(X Y).
inline double fiber_inner(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw dimension_error("fiber_inner: matrix shapes differ");
  return -0.5 * (x.cwiseProduct(y.transpose())).sum();
}

inline double fiber_norm(const Eigen::MatrixXd& x) { return std::sqrt(std::max(0.0, fiber_inner(x, x))); }

inline Eigen::MatrixXd commutator(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return x * y - y * x;
}

// A matrix Lie algebra g inside so(m), given by generators T_a orthonormal
// under the fiber metric.  Structure constants c[a][b][c] = <[T_a, T_b], T_c>.
class LieAlgebra {
 public:
  static constexpr double tolerance = 1e-12;

  LieAlgebra(std::string name, std::vector<Eigen::MatrixXd> generators)
      : name_(std::move(name)), gens_(std::move(generators)) {
    if (gens_.empty()) throw dimension_error(name_ + ": no generators");
    m_ = static_cast<std::size_t>(gens_.front().rows());
    for (const auto& t : gens_) {
      if (static_cast<std::size_t>(t.rows()) != m_ || static_cast<std::size_t>(t.cols()) != m_)
        throw dimension_error(name_ + ": generators must be square of equal size");
      if ((t + t.transpose()).cwiseAbs().maxCoeff() > tolerance)
        throw parameter_error(name_ + ": generators must be antisymmetric");
    }
    const std::size_t d = gens_.size();
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        const double g = fiber_inner(gens_[a], gens_[b]);
        if (std::abs(g - (a == b ? 1.0 : 0.0)) > tolerance)
          throw parameter_error(name_ + ": generators are not orthonormal under -1/2 tr");
      }
    c_.assign(d * d * d, 0.0);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        const Eigen::MatrixXd ab = commutator(gens_[a], gens_[b]);
        for (std::size_t c = 0; c < d; ++c) c_[(a * d + b) * d + c] = fiber_inner(ab, gens_[c]);
        if (span_residual(ab) > tolerance * std::max(1.0, ab.norm()))
          throw parameter_error(name_ + ": generators do not close under the bracket");
      }
    if (antisymmetry_residual() > tolerance) throw parameter_error(name_ + ": structure constants not antisymmetric");
    if (jacobi_residual() > tolerance) throw parameter_error(name_ + ": Jacobi identity fails");
  }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return gens_.size(); }
  std::size_t rep_dim() const { return m_; }
  const Eigen::MatrixXd& generator(std::size_t a) const { return gens_.at(a); }
  const std::vector<Eigen::MatrixXd>& generators() const { return gens_; }

  double structure_constant(std::size_t a, std::size_t b, std::size_t c) const {
    const std::size_t d = dim();
    return c_[(a * d + b) * d + c];
  }

  bool is_abelian() const {
    for (double v : c_)
      if (std::abs(v) > tolerance) return false;
    return true;
  }

  Eigen::MatrixXd from_coefficients(const Eigen::VectorXd& x) const {
    if (static_cast<std::size_t>(x.size()) != dim()) throw dimension_error(name_ + ": coefficient length");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m_, m_);
    for (std::size_t a = 0; a < dim(); ++a) out += x(a) * gens_[a];
    return out;
  }

  Eigen::VectorXd coefficients(const Eigen::MatrixXd& x) const {
    Eigen::VectorXd out(dim());
    for (std::size_t a = 0; a < dim(); ++a) out(a) = fiber_inner(x, gens_[a]);
    return out;
  }

  // Frobenius distance from x to the span of the generators.
  double span_residual(const Eigen::MatrixXd& x) const {
    return (x - from_coefficients(coefficients(x))).norm();
  }

  double antisymmetry_residual() const {
    double r = 0.0;
    for (std::size_t a = 0; a < dim(); ++a)
      for (std::size_t b = 0; b < dim(); ++b)
        for (std::size_t c = 0; c < dim(); ++c)
          r = std::max(r, std::abs(structure_constant(a, b, c) + structure_constant(b, a, c)));
    return r;
  }

  double jacobi_residual() const {
    const std::size_t d = dim();
    double r = 0.0;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t f = 0; f < d; ++f) {
            double s = 0.0;
            for (std::size_t e = 0; e < d; ++e)
              s += structure_constant(a, b, e) * structure_constant(e, c, f) +
                   structure_constant(b, c, e) * structure_constant(e, a, f) +
                   structure_constant(c, a, e) * structure_constant(e, b, f);
            r = std::max(r, std::abs(s));
          }
    return r;
  }

 private:
  std::string name_;
  std::vector<Eigen::MatrixXd> gens_;
  std::size_t m_ = 0;
  std::vector<double> c_;
};

namespace detail {

// X = P + iQ acting on C^k, written as a real 2k x 2k matrix.
inline Eigen::MatrixXd realify(const Eigen::MatrixXcd& x) {
  const Eigen::Index k = x.rows();
  Eigen::MatrixXd out(2 * k, 2 * k);
  out.topLeftCorner(k, k) = x.real();
  out.topRightCorner(k, k) = -x.imag();
  out.bottomLeftCorner(k, k) = x.imag();
  out.bottomRightCorner(k, k) = x.real();
  return out;
}

inline std::vector<Eigen::MatrixXd> from_hermitian(const std::vector<Eigen::MatrixXcd>& h) {
  const std::complex<double> i_over_root2(0.0, 1.0 / std::sqrt(2.0));
  std::vector<Eigen::MatrixXd> out;
  for (const auto& m : h) out.push_back(realify(i_over_root2 * m));
  return out;
}

inline Eigen::MatrixXd elementary(std::size_t m, std::size_t i, std::size_t j) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, m);
  e(i, j) = 1.0;
  e(j, i) = -1.0;
  return e;
}

}  // namespace detail

// su(2) through the realified spin-1/2 representation on R^4.
inline LieAlgebra su2() {
  using C = std::complex<double>;
  Eigen::MatrixXcd s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, C(0, -1), C(0, 1), 0;
  s3 << 1, 0, 0, -1;
  return LieAlgebra("su(2)", detail::from_hermitian({s1, s2, s3}));
}

// so(3) as the anti-self-dual factor of so(4).
inline LieAlgebra so3() {
  const double r = 1.0 / std::sqrt(2.0);
  using detail::elementary;
  return LieAlgebra("so(3)", {r * (elementary(4, 0, 1) - elementary(4, 2, 3)),
                              r * (elementary(4, 0, 2) - elementary(4, 3, 1)),
                              r * (elementary(4, 0, 3) - elementary(4, 1, 2))});
}

// so(3) in its defining representation on R^3.
inline LieAlgebra so3_vector() {
  using detail::elementary;
  return LieAlgebra("so(3) on R^3", {elementary(3, 1, 2), elementary(3, 2, 0), elementary(3, 0, 1)});
}

// u(1)^k as k commuting rotation blocks on R^{2k}.
inline LieAlgebra u1k(std::size_t k) {
  if (k == 0) throw parameter_error("u(1)^k needs k >= 1");
  std::vector<Eigen::MatrixXd> g;
  for (std::size_t b = 0; b < k; ++b) g.push_back(detail::elementary(2 * k, 2 * b + 1, 2 * b));
  return LieAlgebra("u(1)^" + std::to_string(k), std::move(g));
}

// su(3) through the realified defining representation on R^6.
inline LieAlgebra su3() {
  using C = std::complex<double>;
  const C i(0, 1);
  std::vector<Eigen::MatrixXcd> l(8, Eigen::MatrixXcd::Zero(3, 3));
  l[0](0, 1) = l[0](1, 0) = 1;
  l[1](0, 1) = -i;
  l[1](1, 0) = i;
  l[2](0, 0) = 1;
  l[2](1, 1) = -1;
  l[3](0, 2) = l[3](2, 0) = 1;
  l[4](0, 2) = -i;
  l[4](2, 0) = i;
  l[5](1, 2) = l[5](2, 1) = 1;
  l[6](1, 2) = -i;
  l[6](2, 1) = i;
  const double r3 = 1.0 / std::sqrt(3.0);
  l[7](0, 0) = l[7](1, 1) = r3;
  l[7](2, 2) = -2.0 * r3;
  return LieAlgebra("su(3)", detail::from_hermitian(l));
}

inline LieAlgebra algebra_by_name(const std::string& name) {
  if (name == "su2" || name == "su(2)") return su2();
  if (name == "so3" || name == "so(3)") return so3();
  if (name == "so3-vector") return so3_vector();
  if (name == "su3" || name == "su(3)") return su3();
  if (name.rfind("u1^", 0) == 0) return u1k(static_cast<std::size_t>(std::stoul(name.substr(3))));
  if (name == "u1" || name == "u(1)") return u1k(1);
  throw parameter_error("unknown algebra '" + name + "'");
}

}  // namespace ymlab::lieforms
