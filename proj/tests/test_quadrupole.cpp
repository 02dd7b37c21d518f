#include <catch2/catch.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "ymlab/quadrupole/energy.hpp"
#include "ymlab/quadrupole/minimize.hpp"
#include "ymlab/quadrupole/profile.hpp"

using namespace ymlab;
using namespace ymlab::quadrupole;

namespace {

// Adaptive-quadrature values of the analytic test-profile integrand
// (tests/oracles/quadrupole_energy_oracle.py).
constexpr double oracle_total_l3 = 696.4762799272648;
constexpr double oracle_total_l7 = 2322.591109401597;
constexpr double oracle_total_l9 = 3623.482972981062;
constexpr double oracle_total_l15 = 9477.496359088658;
constexpr std::array<double, 6> oracle_terms_l3 = {0.0, 3.5741446062712496, 32.76785858253692,
                                                   0.7289696448487879, 32.76785858253691, 0.7289696448487879};
constexpr std::array<double, 6> oracle_terms_l15 = {0.0, 89.35361515678123, 32.76785858253692,
                                                    0.7289696448487879, 819.1964645634229, 18.2242411212197};

// a1 = 0, a2 = 3 sin^2(3t/2), a3 = l cos^2(3t/2): compatible at both ends but
// with no plateaus.
Profile smooth_profile(long l, std::size_t n) {
  Profile p = empty_profile(n, l, default_delta);
  for (Eigen::Index j = 0; j < p.theta.size(); ++j) {
    const double s = std::sin(1.5 * p.theta(j)), c = std::cos(1.5 * p.theta(j));
    p.a2(j) = 3.0 * s * s;
    p.a3(j) = static_cast<double>(l) * c * c;
  }
  return p;
}

double observed_order(double e1, double e2, double e3) { return std::log2(std::abs(e1 - e2) / std::abs(e2 - e3)); }

}  // namespace

TEST_CASE("charge and Taubes bound", "[quadrupole]") {
  CHECK(charge(5, 3) == 2);
  CHECK(charge(3, 3) == 0);
  CHECK(charge(7, 3) == 5);
  CHECK(charge(3, 7) == -5);
  CHECK(taubes_lower_bound(2) == 6);
  CHECK(taubes_lower_bound(0) == 2);
  CHECK(taubes_lower_bound(5) == 12);
  CHECK(taubes_lower_bound(-5) == 12);
  for (long l = 3; l <= 39; l += 2) {
    CHECK((l * l - 9) % 8 == 0);
    CHECK(charge(l, 3) == (l * l - 9) / 8);
  }
  CHECK_THROWS_AS(charge(4, 3), parameter_error);
  CHECK_THROWS_AS(charge(3, 0), parameter_error);
  CHECK_THROWS_AS(charge(-3, 3), parameter_error);
}

TEST_CASE("test profile construction", "[quadrupole]") {
  for (long l : {3L, 7L, 15L}) {
    const Profile p = build_test_profile(l);
    CHECK(p.size() == 1024);
    CHECK(p.a1.cwiseAbs().maxCoeff() == 0.0);
    CHECK(boundary_residual(p) < 1e-12);
    CHECK(symmetry_residual(p) < 1e-10);
    CHECK(p.a2.minCoeff() >= 0.0);
    CHECK(p.a2.maxCoeff() <= 3.0);
    CHECK(p.a3.maxCoeff() == Approx(static_cast<double>(l)).epsilon(1e-15));
    CHECK(p.a3.minCoeff() >= 0.0);
  }
  const Ramp ramp(default_delta);
  double max_slope = 0.0, min_slope = 1.0;
  for (int k = 0; k <= 100000; ++k) {
    const double th = third_pi * k / 100000.0;
    max_slope = std::max(max_slope, ramp.derivative(th));
    min_slope = std::min(min_slope, ramp.derivative(th));
  }
  CHECK(max_slope <= 5.0);
  CHECK(min_slope >= 0.0);
  // a3' = -(l/3) a2'(pi/3 - t), so sup |a3'| <= 5 l / 3; at l = 15 that is 25.
  const Profile p15 = build_test_profile(15);
  double sup = 0.0;
  for (Eigen::Index j = 0; j + 1 < p15.theta.size(); ++j)
    sup = std::max(sup, std::abs(p15.a3(j + 1) - p15.a3(j)) / p15.h());
  CHECK(sup <= 25.0);
  CHECK(p15.a3.maxCoeff() == 15.0);

  CHECK_THROWS_AS(build_test_profile(3, 0.25), parameter_error);
  CHECK_THROWS_AS(build_test_profile(3, std::numbers::pi / 12.0), parameter_error);
  CHECK_THROWS_AS(build_test_profile(3, 0.0), parameter_error);
  CHECK_THROWS_AS(build_test_profile(3, default_delta, 32), parameter_error);
  CHECK_THROWS_AS(build_test_profile(0), parameter_error);
}

TEST_CASE("profile text round trip", "[quadrupole]") {
  const Profile p = build_test_profile(7, default_delta, 128);
  std::stringstream ss;
  write_profile(ss, p);
  const Profile q = read_profile(ss);
  CHECK(q.boundary_target_l == 7);
  CHECK(q.delta == p.delta);
  CHECK((q.stacked() - p.stacked()).cwiseAbs().maxCoeff() == 0.0);
  std::stringstream bad("# l 3\n0.1 0 0\n");
  CHECK_THROWS_AS(read_profile(bad), parameter_error);
}

TEST_CASE("energy of the zero triple vanishes", "[quadrupole]") {
  Profile z = empty_profile(256, 3, default_delta);
  const auto e = energy(z);
  CHECK(e.total == 0.0);
  for (double t : e.terms) CHECK(t == 0.0);
}

TEST_CASE("test profile energies agree with the adaptive-quadrature oracle", "[quadrupole]") {
  const auto e3 = energy(build_test_profile(3, default_delta, 4096));
  const auto e15 = energy(build_test_profile(15, default_delta, 4096));
  for (int k = 0; k < 6; ++k) {
    CHECK(e3.terms[k] == Approx(oracle_terms_l3[k]).epsilon(1e-10).margin(1e-12));
    CHECK(e15.terms[k] == Approx(oracle_terms_l15[k]).epsilon(1e-10).margin(1e-12));
    CHECK(e3.terms[k] >= 0.0);
  }
  double sum = 0.0;
  for (double t : e3.terms) sum += t;
  CHECK(e3.total == Approx(std::numbers::pi * std::numbers::pi * sum).epsilon(1e-12));
  CHECK(e3.total == Approx(oracle_total_l3).epsilon(1e-11));
  CHECK(e15.total == Approx(oracle_total_l15).epsilon(1e-11));
  CHECK(energy(build_test_profile(7, default_delta, 4096)).total == Approx(oracle_total_l7).epsilon(1e-11));
  CHECK(energy(build_test_profile(9, default_delta, 4096)).total == Approx(oracle_total_l9).epsilon(1e-11));
}

TEST_CASE("Richardson extrapolation over grids 512 to 4096 reproduces E3", "[quadrupole]") {
  std::vector<double> e;
  for (std::size_t n : {512, 1024, 2048, 4096}) e.push_back(energy(build_test_profile(3, default_delta, n)).total);
  const double p = observed_order(e[1], e[2], e[3]);
  CHECK(p > 3.5);
  const double r = std::pow(2.0, p);
  const double extrapolated = e[3] + (e[3] - e[2]) / (r - 1.0);
  CHECK(extrapolated == Approx(oracle_total_l3).epsilon(1e-12));
}

TEST_CASE("energy quadrature converges at order at least 1.9", "[quadrupole]") {
  std::vector<double> t, s;
  for (std::size_t n : {64, 128, 256, 512}) {
    t.push_back(energy(build_test_profile(3, default_delta, n)).total);
    s.push_back(energy(smooth_profile(5, n)).total);
  }
  for (std::size_t i = 0; i + 2 < t.size(); ++i) {
    CHECK(observed_order(t[i], t[i + 1], t[i + 2]) >= 1.9);
    CHECK(observed_order(s[i], s[i + 1], s[i + 2]) >= 1.9);
  }
}

TEST_CASE("energy is exactly quadratic in l/3 when a1 vanishes", "[quadrupole]") {
  auto e = [](long l) { return energy(build_test_profile(l)).total; };
  const double e3 = e(3), e9 = e(9);
  const double c1 = (e9 - e3) / (9.0 - 1.0);
  const double c0 = e3 - c1;
  for (long l : {5L, 7L, 15L, 27L, 39L}) {
    const double x = static_cast<double>(l) / 3.0;
    CHECK(std::abs(e(l) - (c0 + c1 * x * x)) <= 1e-10 * e(l));
  }
  CHECK(c0 > 0.0);
  CHECK(c1 > 0.0);
}

TEST_CASE("incompatible profiles are rejected with the diverging term", "[quadrupole]") {
  Profile p = build_test_profile(3, default_delta, 256);
  p.a2.array() += 0.5;
  try {
    energy(p);
    FAIL("expected divergent_integral_error");
  } catch (const divergent_integral_error& e) {
    CHECK(e.term_name == term_names[1]);
  }
  // a2 keeps rising into pi/3: only the G2-weighted slope term diverges.
  Profile q = build_test_profile(3, default_delta, 256);
  for (Eigen::Index j = 0; j < q.theta.size(); ++j)
    if (q.theta(j) > third_pi - q.delta) q.a2(j) += 0.5 * (q.theta(j) - (third_pi - q.delta));
  try {
    energy(q);
    FAIL("expected divergent_integral_error");
  } catch (const divergent_integral_error& e) {
    CHECK(e.term_name == term_names[2]);
  }
  Profile r = build_test_profile(3, default_delta, 256);
  for (Eigen::Index j = 0; j < r.theta.size(); ++j) r.a3(j) += 0.1 * r.theta(j);
  CHECK_THROWS_AS(energy(r), divergent_integral_error);
}

TEST_CASE("singular weights stay bounded near the endpoints", "[quadrupole]") {
  for (const Profile& p : {build_test_profile(7), smooth_profile(7, 1024)}) {
    for (double eps : {1e-3, 1e-4}) {
      for (double th : {eps, third_pi - eps}) {
        const auto t = integrand_at(p, th);
        for (double v : t) {
          CHECK(std::isfinite(v));
          CHECK(std::abs(v) < 1e3);
        }
      }
    }
    // Bounded as the endpoint is approached: the 1e-4 value does not exceed
    // the 1e-3 value by more than a constant.
    const auto a = integrand_at(p, 1e-3), b = integrand_at(p, 1e-4);
    for (int k = 0; k < 6; ++k) CHECK(std::abs(b[k]) <= 2.0 * std::abs(a[k]) + 1e-9);
  }
}

TEST_CASE("literal fourth term is the unsquared integrand", "[quadrupole]") {
  const Profile p = build_test_profile(3, default_delta, 1024);
  const auto sq = energy(p), lit = energy(p, true);
  CHECK(lit.literal);
  for (int k : {0, 1, 2, 4, 5}) CHECK(lit.terms[k] == sq.terms[k]);
  CHECK(lit.terms[3] != Approx(sq.terms[3]));
  CHECK(lit.terms[3] > 0.0);
}

TEST_CASE("analytic gradient and Hessian match finite differences", "[quadrupole]") {
  Profile p = smooth_profile(5, 96);
  for (Eigen::Index j = 0; j < p.theta.size(); ++j) p.a1(j) = 0.3 * std::sin(6.0 * p.theta(j));
  const EnergyModel m(p.size());
  const Eigen::VectorXd x = p.stacked();
  const Eigen::VectorXd g = m.gradient(x);
  const auto hess = m.hessian(x);
  const double step = 1e-5;
  for (Eigen::Index i : {5, 40, 96 + 17, 96 + 60, 192 + 3, 192 + 90}) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += step;
    xm(i) -= step;
    const double fd = (m.total(xp) - m.total(xm)) / (2.0 * step);
    CHECK(g(i) == Approx(fd).epsilon(1e-6).margin(1e-7));
    const Eigen::VectorXd hd = (m.gradient(xp) - m.gradient(xm)) / (2.0 * step);
    const Eigen::VectorXd hc = hess.col(i);
    CHECK((hd - hc).cwiseAbs().maxCoeff() <= 1e-5 * (1.0 + hc.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("minimizer descends monotonically and converges for (3,3)", "[quadrupole]") {
  const Profile p = build_test_profile(3);
  const auto r = minimize_energy(p, 200, 1e-7);
  CHECK(r.converged);
  CHECK(r.gradient_norm < 1e-6);
  for (std::size_t i = 1; i < r.energies.size(); ++i) CHECK(r.energies[i] <= r.energies[i - 1]);
  CHECK(r.energies.back() < r.energies.front());
  CHECK(r.energies.back() == Approx(energy(r.profile).total).epsilon(1e-12));
  CHECK(symmetry_residual(r.profile) <= 10.0 * symmetry_residual(p));
  CHECK(boundary_residual(r.profile) <= boundary_residual(p) + 1e-12);
  // Plateau nodes are untouched.
  for (Eigen::Index j = 0; j < p.theta.size(); ++j)
    if (p.theta(j) <= p.delta || p.theta(j) >= third_pi - p.delta) {
      CHECK(r.profile.a1(j) == p.a1(j));
      CHECK(r.profile.a2(j) == p.a2(j));
      CHECK(r.profile.a3(j) == p.a3(j));
    }
}

TEST_CASE("minimized energy does not exceed the test profile for (7,3)", "[quadrupole]") {
  const Profile p = build_test_profile(7);
  const auto r = minimize_energy(p, 50, 1e-7);
  CHECK(r.energies.back() <= energy(p).total);
  for (std::size_t i = 1; i < r.energies.size(); ++i) CHECK(r.energies[i] <= r.energies[i - 1]);
}

TEST_CASE("minimizer input validation", "[quadrupole]") {
  Profile bad = build_test_profile(3, default_delta, 128);
  bad.a2.array() += 1.0;
  CHECK_THROWS_AS(minimize_energy(bad), divergent_integral_error);
  CHECK_THROWS_AS(minimize_energy(build_test_profile(3, default_delta, 128), 10, 0.0), parameter_error);
}

TEST_CASE("growth report", "[quadrupole]") {
  const auto small = growth_report({3, 7, 11}, 512);
  REQUIRE(small.rows.size() == 3);
  CHECK(small.rows[0].kappa == 0);
  CHECK(small.rows[1].kappa == 5);
  CHECK(small.rows[2].kappa == 14);
  CHECK(small.rows[1].taubes == 12);
  for (const auto& row : small.rows) CHECK(row.minimized_energy <= row.test_energy);

  std::vector<long> ls;
  for (long l = 7; l <= 39; l += 2) ls.push_back(l);
  const auto big = growth_report(ls, 1024, false);
  CHECK(big.slope <= 2.05);
  CHECK(big.slope > 1.5);
  double lowest = 1e300;
  for (const auto& row : big.rows) lowest = std::min(lowest, static_cast<double>(row.taubes) / row.test_energy);
  // Taubes bound (l^2 - 1) / 4 over c0 + c1 (l/3)^2 tends to 9 / (4 c1).
  const double c1 = (big.rows.back().test_energy - big.rows.front().test_energy) / ((39.0 * 39.0 - 49.0) / 9.0);
  CHECK(lowest >= 0.5 * 9.0 / (4.0 * c1));

  std::stringstream csv;
  write_growth_csv(csv, small);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "l,kappa,taubes_bound,test_energy,minimized_energy,energy_over_l2,minimizer_status");
  CHECK_THROWS_AS(growth_report({4}), parameter_error);
  CHECK_THROWS_AS(growth_report({1}), parameter_error);
}
