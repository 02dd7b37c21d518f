#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "ymlab/errors.hpp"
#include "ymlab/quadrupole/energy.hpp"
#include "ymlab/quadrupole/profile.hpp"

namespace ymlab::quadrupole {

struct MinimizeReport {
  Profile profile;
  std::vector<double> energies;  // accepted iterates, starting value first
  double gradient_norm = 0.0;    // L2 norm of the discrete first variation on free nodes
  std::size_t iterations = 0;
  bool converged = false;
  std::string status;
};

namespace detail {

inline std::vector<long> free_indices(const Profile& p) {
  std::vector<long> idx;
  const long n = static_cast<long>(p.size());
  for (int c = 0; c < 3; ++c)
    for (long j = 0; j < n; ++j)
      if (p.theta(j) > p.delta && p.theta(j) < third_pi - p.delta) idx.push_back(c * n + j);
  return idx;
}

}  // namespace detail

// Damped Newton on the interior nodes with Armijo backtracking; plateau
// nodes within delta of either endpoint stay fixed.  When the Hessian is
// not positive definite a multiple of the identity is added.
inline MinimizeReport minimize_energy(const Profile& start, std::size_t max_iters = 200, double tol = 1e-7) {
  if (!(tol > 0.0)) throw parameter_error("minimize_energy: tol must be positive");
  check_compatibility(start);
  const EnergyModel model(start.size());
  const std::vector<long> free = detail::free_indices(start);
  if (free.empty()) throw parameter_error("minimize_energy: no free interior nodes");
  const auto nf = static_cast<Eigen::Index>(free.size());
  const double h = model.h();

  MinimizeReport rep;
  rep.profile = start;
  Eigen::VectorXd x = start.stacked();
  double e = model.total(x);
  if (!std::isfinite(e)) throw parameter_error("minimize_energy: starting energy is not finite");
  rep.energies.push_back(e);

  using Sparse = Eigen::SparseMatrix<double>;
  Sparse select(x.size(), nf);
  {
    std::vector<Eigen::Triplet<double>> t;
    for (Eigen::Index k = 0; k < nf; ++k) t.emplace_back(free[static_cast<std::size_t>(k)], k, 1.0);
    select.setFromTriplets(t.begin(), t.end());
  }

  auto reduced_gradient = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return select.transpose() * model.gradient(y);
  };
  Eigen::VectorXd g = reduced_gradient(x);
  rep.gradient_norm = g.norm() / std::sqrt(h);
  rep.status = "max_iters";
  Eigen::SimplicialLDLT<Sparse> solver;

  for (; rep.iterations < max_iters; ++rep.iterations) {
    if (rep.gradient_norm < tol) {
      rep.converged = true;
      rep.status = "converged";
      break;
    }
    const Sparse hf = Sparse(select.transpose() * Sparse(model.hessian(x)) * select);
    double shift = 0.0;
    Eigen::VectorXd step;
    const double diag_scale = hf.diagonal().cwiseAbs().maxCoeff();
    for (int attempt = 0;; ++attempt) {
      Sparse m = hf;
      if (shift > 0.0) {
        Sparse id(nf, nf);
        id.setIdentity();
        m += shift * id;
      }
      solver.compute(m);
      if (solver.info() == Eigen::Success && (solver.vectorD().array() > 0.0).all()) {
        step = -solver.solve(g);
        break;
      }
      if (attempt > 60) throw resolution_error("minimize_energy: could not regularize the Hessian");
      shift = shift == 0.0 ? 1e-10 * diag_scale : 4.0 * shift;
    }
    const double slope = g.dot(step);
    if (-slope <= 8.0 * std::numeric_limits<double>::epsilon() * std::abs(e)) {
      rep.status = "rounding_floor";
      break;
    }
    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial;
    double e_trial = e;
    while (alpha > 1e-14) {
      trial = x + alpha * (select * step);
      e_trial = model.total(trial);
      if (std::isfinite(e_trial) && e_trial <= e + 1e-4 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // At rounding level no decrease is measurable; the current iterate stands.
      rep.status = "stalled";
      break;
    }
    x = trial;
    e = e_trial;
    rep.energies.push_back(e);
    g = reduced_gradient(x);
    rep.gradient_norm = g.norm() / std::sqrt(h);
  }
  if (rep.gradient_norm < tol) {
    rep.converged = true;
    rep.status = "converged";
  }
  rep.profile.assign(x);
  return rep;
}

struct GrowthRow {
  long l = 0;
  long kappa = 0;
  long taubes = 0;
  double test_energy = 0.0;
  double minimized_energy = 0.0;
  double ratio = 0.0;  // test-profile energy / l^2
  std::string minimizer_status = "skipped";
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  double slope = 0.0;  // least squares slope of log E(a_l) against log l
};

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw parameter_error("loglog_slope: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

// Per l: bundle (l, 3) charge, Taubes bound, energies of the test profile and
// of the minimizer started from it.
inline GrowthReport growth_report(const std::vector<long>& l_list, std::size_t grid_size = 1024,
                                  bool minimize = true, std::size_t max_iters = 200, double tol = 1e-7) {
  if (l_list.empty()) throw parameter_error("growth_report: empty l list");
  GrowthReport r;
  std::vector<double> ls, es;
  for (long l : l_list) {
    if (l < 3 || l % 2 == 0) throw parameter_error("growth_report: l must be odd and at least 3");
    GrowthRow row;
    row.l = l;
    row.kappa = charge(l, 3);
    row.taubes = taubes_lower_bound(row.kappa);
    const Profile p = build_test_profile(l, default_delta, grid_size);
    row.test_energy = energy(p).total;
    row.ratio = row.test_energy / static_cast<double>(l * l);
    if (minimize) {
      const auto m = minimize_energy(p, max_iters, tol);
      row.minimized_energy = m.energies.back();
      row.minimizer_status = m.status;
    } else {
      row.minimized_energy = row.test_energy;
    }
    ls.push_back(static_cast<double>(l));
    es.push_back(row.test_energy);
    r.rows.push_back(row);
  }
  if (ls.size() >= 2) r.slope = loglog_slope(ls, es);
  return r;
}

inline void write_growth_csv(std::ostream& os, const GrowthReport& r) {
  os << "l,kappa,taubes_bound,test_energy,minimized_energy,energy_over_l2,minimizer_status\n";
  os.precision(12);
  for (const auto& row : r.rows)
    os << row.l << ',' << row.kappa << ',' << row.taubes << ',' << row.test_energy << ',' << row.minimized_energy
       << ',' << row.ratio << ',' << row.minimizer_status << '\n';
}

}  // namespace ymlab::quadrupole
