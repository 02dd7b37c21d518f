#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <array>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ymlab/errors.hpp"
#include "ymlab/numerics/gauss_legendre.hpp"
#include "ymlab/quadrupole/profile.hpp"

namespace ymlab::quadrupole {

inline long charge(long n_plus, long n_minus) {
  if (n_plus <= 0 || n_minus <= 0) throw parameter_error("charge: n_plus and n_minus must be positive");
  if (n_plus % 2 == 0 || n_minus % 2 == 0) throw parameter_error("charge: n_plus and n_minus must be odd");
  const long num = n_plus * n_plus - n_minus * n_minus;
  assert(num % 8 == 0);
  return num / 8;
}

inline long taubes_lower_bound(long kappa) { return 2 * (std::labs(kappa) + 1); }

inline const std::array<std::string, 6> term_names = {
    "(a1')^2 G1", "(a1 + a2 a3)^2 / G1", "(a2')^2 G2", "(a2 + a1 a3)^2 / G2", "(a3')^2 G3", "(a3 + a1 a2)^2 / G3"};

struct EnergyBreakdown {
  std::array<double, 6> terms{};  // integrals over (0, pi/3), without the pi^2
  double total = 0.0;
  bool literal = false;
};

struct Weights {
  double g1, g2, g3;
};

inline Weights weights_at(double theta) {
  const double f1 = 2.0 * std::sin(third_pi + theta);
  const double f2 = 2.0 * std::sin(third_pi - theta);
  const double f3 = 2.0 * std::sin(theta);
  return {f2 * f3 / f1, f3 * f1 / f2, f1 * f2 / f3};
}

// Values and derivatives at a point.
struct PointState {
  std::array<double, 3> a{}, da{};
};

// Six integrand values at one point, literal selects the unsquared fourth term.
inline std::array<double, 6> integrand_terms(const PointState& s, const Weights& g, bool literal = false) {
  const auto& a = s.a;
  const auto& d = s.da;
  const double n1 = a[0] + a[1] * a[2], n2 = a[1] + a[0] * a[2], n3 = a[2] + a[0] * a[1];
  return {d[0] * d[0] * g.g1, n1 * n1 / g.g1, d[1] * d[1] * g.g2,
          (literal ? n2 : n2 * n2) / g.g2, d[2] * d[2] * g.g3, n3 * n3 / g.g3};
}

namespace detail {

// Node index j in [-3, N + 2] of component c, mapped through the reflection
// conditions onto a stored (component, node).
inline std::pair<int, long> reflect(int c, long j, long n) {
  if (j < 0) {
    static constexpr int left[3] = {1, 0, 2};
    return {left[c], -1 - j};
  }
  if (j >= n) {
    static constexpr int right[3] = {2, 1, 0};
    return {right[c], 2 * n - 1 - j};
  }
  return {c, j};
}

using Stencil = std::vector<std::pair<long, double>>;  // (stacked index, coefficient)

inline long stacked_index(int c, long j, long n) { return static_cast<long>(c) * n + j; }

inline Stencil value_stencil(int c, long j, long n) {
  const auto [cc, jj] = reflect(c, j, n);
  return {{stacked_index(cc, jj, n), 1.0}};
}

// Fourth-order central difference at node j (ghosts from reflection).
inline Stencil derivative_stencil(int c, long j, long n, double h) {
  static constexpr long off[4] = {-2, -1, 1, 2};
  static constexpr double coef[4] = {1.0, -8.0, 8.0, -1.0};
  Stencil s;
  for (int k = 0; k < 4; ++k) {
    const auto [cc, jj] = reflect(c, j + off[k], n);
    s.emplace_back(stacked_index(cc, jj, n), coef[k] / (12.0 * h));
  }
  return s;
}

inline void add_scaled(Stencil& out, const Stencil& in, double w) {
  if (w == 0.0) return;
  for (const auto& [i, v] : in) out.emplace_back(i, v * w);
}

// Cubic Hermite on [theta_j, theta_j + h] at local t, for value and derivative.
inline std::pair<Stencil, Stencil> hermite_stencils(int c, long j, long n, double h, double t) {
  const double h00 = (2.0 * t - 3.0) * t * t + 1.0, h10 = ((t - 2.0) * t + 1.0) * t;
  const double h01 = (3.0 - 2.0 * t) * t * t, h11 = (t - 1.0) * t * t;
  const double d00 = 6.0 * t * (t - 1.0), d10 = (3.0 * t - 4.0) * t + 1.0;
  const double d01 = -d00, d11 = (3.0 * t - 2.0) * t;
  const Stencil v0 = value_stencil(c, j, n), v1 = value_stencil(c, j + 1, n);
  const Stencil s0 = derivative_stencil(c, j, n, h), s1 = derivative_stencil(c, j + 1, n, h);
  Stencil val, der;
  add_scaled(val, v0, h00);
  add_scaled(val, s0, h * h10);
  add_scaled(val, v1, h01);
  add_scaled(val, s1, h * h11);
  add_scaled(der, v0, d00 / h);
  add_scaled(der, s0, d10);
  add_scaled(der, v1, d01 / h);
  add_scaled(der, s1, d11);
  return {val, der};
}

// Lagrange weights at x for nodes 1/2, 3/2, 5/2, 7/2 (units of h), and of
// the derivative.
inline std::array<double, 4> lagrange_weights(double x, bool derivative) {
  static constexpr double nodes[4] = {0.5, 1.5, 2.5, 3.5};
  std::array<double, 4> w{};
  for (int i = 0; i < 4; ++i) {
    double denom = 1.0;
    for (int k = 0; k < 4; ++k)
      if (k != i) denom *= nodes[i] - nodes[k];
    if (!derivative) {
      double num = 1.0;
      for (int k = 0; k < 4; ++k)
        if (k != i) num *= x - nodes[k];
      w[i] = num / denom;
    } else {
      double sum = 0.0;
      for (int m = 0; m < 4; ++m) {
        if (m == i) continue;
        double prod = 1.0;
        for (int k = 0; k < 4; ++k)
          if (k != i && k != m) prod *= x - nodes[k];
        sum += prod;
      }
      w[i] = sum / denom;
    }
  }
  return w;
}

}  // namespace detail

// One-sided cubic extrapolation of the stored samples to an endpoint,
// ignoring the reflection conditions.
struct EndpointState {
  PointState left, right;
};

inline EndpointState endpoint_state(const Profile& p) {
  const long n = static_cast<long>(p.size());
  const double h = p.h();
  const auto wv = detail::lagrange_weights(0.0, false);
  const auto wd = detail::lagrange_weights(0.0, true);
  EndpointState e;
  for (int c = 0; c < 3; ++c) {
    const auto& v = p.component(c);
    for (int i = 0; i < 4; ++i) {
      e.left.a[c] += wv[i] * v(i);
      e.left.da[c] += wd[i] * v(i) / h;
      e.right.a[c] += wv[i] * v(n - 1 - i);
      e.right.da[c] -= wd[i] * v(n - 1 - i) / h;
    }
  }
  return e;
}

// Endpoint limits against (0, 0, l) at theta = 0 and (0, 3, 0) at pi/3.
inline double boundary_residual(const Profile& p) {
  const auto e = endpoint_state(p);
  const std::array<double, 3> lt = {0.0, 0.0, static_cast<double>(p.boundary_target_l)}, rt = {0.0, 3.0, 0.0};
  double r = 0.0;
  for (int c = 0; c < 3; ++c) r = std::max({r, std::abs(e.left.a[c] - lt[c]), std::abs(e.right.a[c] - rt[c])});
  return r;
}

// Reflection conditions: a1(-t) = a2(t), a3 even at 0; a1(pi/3 + t) = a3(pi/3 - t), a2 even at pi/3.
inline double symmetry_residual(const Profile& p) {
  const auto e = endpoint_state(p);
  const auto& l = e.left;
  const auto& r = e.right;
  return std::max({std::abs(l.a[0] - l.a[1]), std::abs(l.da[0] + l.da[1]), std::abs(l.da[2]),
                   std::abs(r.a[0] - r.a[2]), std::abs(r.da[0] + r.da[2]), std::abs(r.da[1])});
}

// Throws divergent_integral_error when a weight blowing up at an endpoint
// multiplies a factor that does not vanish there.
inline void check_compatibility(const Profile& p) {
  const auto e = endpoint_state(p);
  double scale = 1.0;
  for (int c = 0; c < 3; ++c) scale = std::max(scale, p.component(c).cwiseAbs().maxCoeff());
  // One-sided extrapolation is exact to O(h^4) in values and O(h^3) in slopes.
  const double h = p.h();
  const double vtol = (1e-6 + h * h) * scale * scale, dtol = (1e-6 + 10.0 * h * h) * scale;
  auto fail = [](int term, const char* where) {
    throw divergent_integral_error(term_names[term], std::string("energy: term ") + term_names[term] +
                                                         " diverges at theta = " + where +
                                                         " (numerator does not vanish)");
  };
  const auto& l = e.left.a;
  const auto& r = e.right.a;
  if (std::abs(l[0] + l[1] * l[2]) > vtol) fail(1, "0");
  if (std::abs(l[1] + l[0] * l[2]) > vtol) fail(3, "0");
  if (std::abs(e.left.da[2]) > dtol) fail(4, "0");
  if (std::abs(r[0] + r[1] * r[2]) > vtol) fail(1, "pi/3");
  if (std::abs(r[2] + r[0] * r[1]) > vtol) fail(5, "pi/3");
  if (std::abs(e.right.da[1]) > dtol) fail(2, "pi/3");
}

// Discretized energy on a fixed grid: the six terms are quadratic forms in
// linear maps of the stacked nodes, so gradient and Hessian are exact.
class EnergyModel {
 public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  explicit EnergyModel(std::size_t nodes, std::size_t order = 4) : n_(static_cast<long>(nodes)) {
    if (nodes < 8) throw parameter_error("energy: grid must have at least 8 nodes");
    h_ = third_pi / static_cast<double>(nodes);
    const auto rule = numerics::gauss_legendre(order);
    std::vector<std::array<std::vector<Eigen::Triplet<double>>, 2>> trip(3);
    long q = 0;
    // Panels between consecutive nodes, the first and last clipped to the interval.
    for (long j = -1; j < n_; ++j) {
      const double t0 = (static_cast<double>(j) + 0.5) * h_;
      const double lo = std::max(t0, 0.0), hi = std::min(t0 + h_, third_pi);
      const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
      for (std::size_t k = 0; k < rule.nodes.size(); ++k, ++q) {
        const double th = mid + half * rule.nodes[k];
        theta_.push_back(th);
        w_.push_back(half * rule.weights[k]);
        for (int c = 0; c < 3; ++c) {
          const auto [val, der] = detail::hermite_stencils(c, j, n_, h_, (th - t0) / h_);
          for (const auto& [i, v] : val) trip[c][0].emplace_back(q, i, v);
          for (const auto& [i, v] : der) trip[c][1].emplace_back(q, i, v);
        }
      }
    }
    for (int c = 0; c < 3; ++c) {
      p_[c].resize(q, 3 * n_);
      d_[c].resize(q, 3 * n_);
      p_[c].setFromTriplets(trip[c][0].begin(), trip[c][0].end());
      d_[c].setFromTriplets(trip[c][1].begin(), trip[c][1].end());
    }
    w_vec_ = Eigen::Map<const Eigen::VectorXd>(w_.data(), q);
    g_.resize(q);
    for (long k = 0; k < q; ++k) g_[k] = weights_at(theta_[k]);
  }

  long nodes() const { return n_; }
  double h() const { return h_; }

  EnergyBreakdown evaluate(const Eigen::VectorXd& x, bool literal = false) const {
    const State s = state(x);
    EnergyBreakdown e;
    e.literal = literal;
    for (std::size_t k = 0; k < g_.size(); ++k) {
      PointState ps;
      for (int c = 0; c < 3; ++c) {
        ps.a[c] = s.u[c](k);
        ps.da[c] = s.v[c](k);
      }
      const auto t = integrand_terms(ps, g_[k], literal);
      for (int i = 0; i < 6; ++i) e.terms[i] += w_[k] * t[i];
    }
    double sum = 0.0;
    for (double t : e.terms) sum += t;
    e.total = std::numbers::pi * std::numbers::pi * sum;
    return e;
  }

  double total(const Eigen::VectorXd& x) const { return evaluate(x).total; }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    const State s = state(x);
    const Residuals r = residuals(s);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
    for (int k = 0; k < 6; ++k) g += jacobian(s, r, k).transpose() * (w_vec_.cwiseProduct(r.r[k]));
    return 2.0 * pi2() * g;
  }

  Sparse hessian(const Eigen::VectorXd& x) const {
    const State s = state(x);
    const Residuals r = residuals(s);
    Sparse h(3 * n_, 3 * n_);
    for (int k = 0; k < 6; ++k) {
      const Sparse j = jacobian(s, r, k);
      h += Sparse(j.transpose() * w_vec_.asDiagonal() * j);
    }
    // Second derivatives of the bilinear numerators.
    static constexpr int pairs[3][2] = {{1, 2}, {0, 2}, {0, 1}};
    for (int m = 0; m < 3; ++m) {
      const Eigen::VectorXd coef = w_vec_.cwiseProduct(r.r[2 * m + 1]).cwiseProduct(r.inv_sqrt[m]);
      const Sparse cross = p_[pairs[m][0]].transpose() * coef.asDiagonal() * p_[pairs[m][1]];
      h += cross;
      h += Sparse(cross.transpose());
    }
    return 2.0 * pi2() * h;
  }

  // Values and derivatives at a point of the interval from the same interpolant.
  PointState interpolate(const Eigen::VectorXd& x, double theta) const {
    if (!(theta > 0.0 && theta < third_pi)) throw parameter_error("interpolate: theta must lie in (0, pi/3)");
    const long j = static_cast<long>(std::floor(theta / h_ - 0.5));
    const double t0 = (static_cast<double>(j) + 0.5) * h_;
    PointState ps;
    for (int c = 0; c < 3; ++c) {
      const auto [val, der] = detail::hermite_stencils(c, j, n_, h_, (theta - t0) / h_);
      for (const auto& [i, v] : val) ps.a[c] += v * x(i);
      for (const auto& [i, v] : der) ps.da[c] += v * x(i);
    }
    return ps;
  }

 private:
  struct State {
    std::array<Eigen::VectorXd, 3> u, v;
  };
  struct Residuals {
    std::array<Eigen::VectorXd, 6> r;
    std::array<Eigen::VectorXd, 3> sqrt_g, inv_sqrt;
  };

  static double pi2() { return std::numbers::pi * std::numbers::pi; }

  State state(const Eigen::VectorXd& x) const {
    if (x.size() != 3 * n_) throw dimension_error("energy: profile size does not match the model grid");
    State s;
    for (int c = 0; c < 3; ++c) {
      s.u[c] = p_[c] * x;
      s.v[c] = d_[c] * x;
    }
    return s;
  }

  Residuals residuals(const State& s) const {
    const Eigen::Index q = w_vec_.size();
    Residuals r;
    for (int c = 0; c < 3; ++c) {
      r.sqrt_g[c].resize(q);
      r.inv_sqrt[c].resize(q);
    }
    for (Eigen::Index k = 0; k < q; ++k) {
      const auto& g = g_[static_cast<std::size_t>(k)];
      const double gs[3] = {g.g1, g.g2, g.g3};
      for (int c = 0; c < 3; ++c) {
        r.sqrt_g[c](k) = std::sqrt(gs[c]);
        r.inv_sqrt[c](k) = 1.0 / r.sqrt_g[c](k);
      }
    }
    const auto& u = s.u;
    r.r[0] = r.sqrt_g[0].cwiseProduct(s.v[0]);
    r.r[1] = r.inv_sqrt[0].cwiseProduct(u[0] + u[1].cwiseProduct(u[2]));
    r.r[2] = r.sqrt_g[1].cwiseProduct(s.v[1]);
    r.r[3] = r.inv_sqrt[1].cwiseProduct(u[1] + u[0].cwiseProduct(u[2]));
    r.r[4] = r.sqrt_g[2].cwiseProduct(s.v[2]);
    r.r[5] = r.inv_sqrt[2].cwiseProduct(u[2] + u[0].cwiseProduct(u[1]));
    return r;
  }

  Sparse jacobian(const State& s, const Residuals& r, int k) const {
    const int c = k / 2;
    if (k % 2 == 0) return r.sqrt_g[c].asDiagonal() * d_[c];
    static constexpr int others[3][2] = {{1, 2}, {0, 2}, {0, 1}};
    const int a = others[c][0], b = others[c][1];
    Sparse j = p_[c];
    j += Sparse(s.u[b].asDiagonal() * p_[a]);
    j += Sparse(s.u[a].asDiagonal() * p_[b]);
    return r.inv_sqrt[c].asDiagonal() * j;
  }

  long n_;
  double h_;
  std::vector<double> theta_, w_;
  Eigen::VectorXd w_vec_;
  std::vector<Weights> g_;
  std::array<Sparse, 3> p_, d_;
};

inline EnergyBreakdown energy(const Profile& p, bool literal = false) {
  if (!p.a1.allFinite() || !p.a2.allFinite() || !p.a3.allFinite()) throw parameter_error("energy: non-finite profile");
  check_compatibility(p);
  return EnergyModel(p.size()).evaluate(p.stacked(), literal);
}

// Integrand of each term at theta from the profile's interpolant.
inline std::array<double, 6> integrand_at(const Profile& p, double theta, bool literal = false) {
  return integrand_terms(EnergyModel(p.size()).interpolate(p.stacked(), theta), weights_at(theta), literal);
}

}  // namespace ymlab::quadrupole
