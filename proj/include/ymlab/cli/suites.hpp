#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ymlab/invariants/bounds.hpp"
#include "ymlab/invariants/geometry.hpp"
#include "ymlab/lieforms/algebra.hpp"
#include "ymlab/lieforms/forms.hpp"
#include "ymlab/lieforms/sharp.hpp"
#include "ymlab/numerics/rng.hpp"
#include "ymlab/quadrupole/energy.hpp"
#include "ymlab/quadrupole/minimize.hpp"
#include "ymlab/quadrupole/profile.hpp"
#include "ymlab/spectral/gauge.hpp"
#include "ymlab/spectral/potential.hpp"
#include "ymlab/spectral/spectrum.hpp"

namespace ymlab::cli {

// One property: passed when value compares against threshold as stated in relation.
struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  double seconds = 0.0;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  void at_most(std::string what, double value, double bound, std::string detail = {}) {
    checks.push_back({std::move(what), value <= bound, value, bound, "<=", std::move(detail)});
  }
  void at_least(std::string what, double value, double bound, std::string detail = {}) {
    checks.push_back({std::move(what), value >= bound, value, bound, ">=", std::move(detail)});
  }
  void holds(std::string what, bool ok, std::string detail = {}) {
    checks.push_back({std::move(what), ok, ok ? 1.0 : 0.0, 1.0, "==", std::move(detail)});
  }
};

inline nlohmann::json to_json(const Check& c) {
  nlohmann::json j = {{"name", c.name}, {"passed", c.passed}, {"relation", c.relation}};
  // Non-finite values are not representable in JSON.
  j["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(std::to_string(c.value));
  j["threshold"] = c.threshold;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

inline nlohmann::json to_json(const SuiteResult& s) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : s.checks) checks.push_back(to_json(c));
  return {{"suite", s.name}, {"passed", s.passed()}, {"checks", checks}, {"warnings", s.warnings}};
}

namespace detail {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline double rel_error(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::string num(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace detail

struct LieformsOptions {
  std::string algebra = "su2";
  std::size_t samples = 10000;
  std::size_t n = 4;
  std::uint64_t seed = 0;
  double runtime_limit = 0.0;  // seconds; 0 leaves runtime unchecked
};

// Exact for su(2) and so(3); estimated by ascent otherwise.
inline double gamma0_for(const std::string& name, const lieforms::LieAlgebra& g) {
  if (name == "su2" || name == "su(2)" || name == "so3" || name == "so(3)") return lieforms::sqrt2;
  lieforms::AscentOptions opt;
  opt.seed = 7;
  return lieforms::estimate_gamma0(g, opt);
}

// Sample k draws from stream (seed, k): Z, Phi, A, B in that order.
inline SuiteResult lieforms_suite(const LieformsOptions& opt) {
  using namespace lieforms;
  if (opt.samples == 0) throw parameter_error("lieforms suite: samples must be positive");
  if (opt.n < 2) throw parameter_error("lieforms suite: n must be at least 2");
  const detail::Stopwatch clock;
  const LieAlgebra g = algebra_by_name(opt.algebra);
  const double gamma0 = gamma0_for(opt.algebra, g);
  double sym = 0.0, trace = 0.0, orth = 0.0;
  double sharp = std::numeric_limits<double>::infinity(), bsharp = sharp;
  for (std::size_t k = 0; k < opt.samples; ++k) {
    auto eng = numerics::stream(opt.seed, k);
    const Eigen::MatrixXd z = random_tracefree_symmetric(opt.n, eng);
    const TwoForm phi = random_two_form(g, opt.n, eng);
    const OneForm a = random_one_form(g, opt.n, eng), b = random_one_form(g, opt.n, eng);
    sym = std::max({sym, std::abs(z_symmetry_residual(z, a, b)), std::abs(phi_symmetry_residual(phi, a, b))});
    trace = std::max(trace, std::abs(z_action_trace(g, z)));
    orth = std::max(orth, std::abs(range_orthogonality_residual(z, phi, a, b)));
    sharp = std::min(sharp, sharp_bracket_residual(a, gamma0));
    bsharp = std::min(bsharp, bsharp_residual(z, phi, a, gamma0));
  }
  SuiteResult s;
  s.name = "lieforms";
  const std::string on = std::to_string(opt.samples) + " samples of " + opt.algebra + " in n = " + std::to_string(opt.n);
  s.at_most("Z and Phi actions are symmetric", sym, 1e-12, on);
  s.at_most("Z action is trace-free", trace, 1e-12, on);
  s.at_most("range orthogonality <Z(A), [Phi, B]> = 0", orth, 1e-12, on);
  s.at_least("sharp bracket inequality", sharp, -1e-12, on);
  s.at_least("bilinear form bound", bsharp, -1e-12, on);
  s.seconds = clock.seconds();
  if (opt.runtime_limit > 0.0) s.at_most("runtime in seconds", s.seconds, opt.runtime_limit);
  return s;
}

inline SuiteResult gamma_suite(std::uint64_t seed = 7) {
  using namespace lieforms;
  AscentOptions opt;
  opt.seed = seed;
  const detail::Stopwatch clock;
  const double g0 = estimate_gamma0(su2(), opt);
  const double g1 = estimate_gamma1(su2(), opt);
  SuiteResult s;
  s.name = "gamma";
  s.at_least("gamma0(su2) lower", g0, sqrt2 - 1e-4);
  s.at_most("gamma0(su2) upper", g0, sqrt2 + 1e-9);
  s.at_most("gamma1(su2)", g1, gamma1_ceiling + 1e-9);
  s.seconds = clock.seconds();
  return s;
}

inline double observed_order(double e1, double e2, double e3) {
  return std::log2(std::abs(e1 - e2) / std::abs(e2 - e3));
}

inline SuiteResult quadrupole_suite() {
  using namespace quadrupole;
  const detail::Stopwatch clock;
  SuiteResult s;
  s.name = "quadrupole";

  std::vector<long> ls;
  for (long l = 3; l <= 39; l += 2) ls.push_back(l);
  const auto rep = growth_report(ls, 1024, false);
  bool exact = true;
  std::string bad;
  for (const auto& row : rep.rows) {
    const long kappa = (row.l * row.l - 9) / 8;
    if (row.kappa != kappa || row.taubes != 2 * (kappa + 1)) {
      exact = false;
      bad += " l=" + std::to_string(row.l);
    }
  }
  s.holds("charge and Taubes columns are integer-exact for odd l in [3, 39]", exact, bad);

  double e3 = 0.0, e9 = 0.0;
  for (const auto& row : rep.rows) {
    if (row.l == 3) e3 = row.test_energy;
    if (row.l == 9) e9 = row.test_energy;
  }
  const double c1 = (e9 - e3) / 8.0;
  const double c0 = e3 - c1;
  double worst = 0.0;
  for (const auto& row : rep.rows) {
    const double x = static_cast<double>(row.l) / 3.0;
    worst = std::max(worst, detail::rel_error(c0 + c1 * x * x, row.test_energy));
  }
  s.at_most("E(a_l) = c0 + c1 (l/3)^2, fit at l = 3, 9", worst, 1e-10,
            "c0 = " + detail::num(c0) + ", c1 = " + detail::num(c1));
  s.at_most("log-log slope of E(a_l) against l", rep.slope, 2.05);

  const auto m = minimize_energy(build_test_profile(3), 200, 1e-7);
  bool monotone = true;
  for (std::size_t i = 1; i < m.energies.size(); ++i) monotone = monotone && m.energies[i] <= m.energies[i - 1];
  s.holds("minimizer energies are nonincreasing", monotone, std::to_string(m.energies.size()) + " iterates");
  s.at_most("final discrete gradient norm, (3,3)", m.gradient_norm, 1e-6, m.status);

  std::vector<double> e;
  for (std::size_t n : {64, 128, 256, 512}) e.push_back(energy(build_test_profile(3, default_delta, n)).total);
  double order = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 2 < e.size(); ++i) order = std::min(order, observed_order(e[i], e[i + 1], e[i + 2]));
  s.at_least("energy quadrature convergence order, grids 64..512", order, 1.9);
  s.seconds = clock.seconds();
  return s;
}

// Multiplicity-weighted count of k(k+3) + 2 - c <= 0 on the round S^4.
inline std::size_t closed_form_count(double c) {
  std::size_t n = 0;
  for (std::size_t k = 0;; ++k) {
    const double kk = static_cast<double>(k);
    if (kk * (kk + 3.0) + 2.0 - c > 0.0) return n;
    n += (k + 1) * (k + 2) * (2 * k + 3) / 6;
  }
}

inline SuiteResult counting_suite(std::size_t grid = 2000, double runtime_limit = 120.0) {
  using namespace spectral;
  const detail::Stopwatch clock;
  SuiteResult s;
  s.name = "spectral counting";
  for (double c : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    const auto v = constant_potential(c);
    const auto r = count_nonpositive(v, grid);
    const auto expected = closed_form_count(c);
    const std::string tag = "V = " + std::to_string(static_cast<int>(c));
    s.holds("N0 matches closed form, " + tag, r.count == expected,
            "N0 = " + std::to_string(r.count) + ", closed form " + std::to_string(expected));
    s.at_least("CLR bound dominates N0, " + tag, clr_bound(v), static_cast<double>(r.count));
  }
  s.seconds = clock.seconds();
  s.at_most("runtime in seconds", s.seconds, runtime_limit);
  return s;
}

inline const std::vector<double>& heat_times() {
  static const std::vector<double> t = {0.05, 0.1, 0.5, 1.0, 5.0};
  return t;
}

// s^2 sum_k m_k exp(-2 (k(k+3) + 2) s).
inline double closed_form_scaled_trace(double s) {
  double sum = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double kk = static_cast<double>(k);
    const double m = static_cast<double>((k + 1) * (k + 2) * (2 * k + 3) / 6);
    const double term = m * std::exp(-2.0 * (kk * (kk + 3.0) + 2.0) * s);
    sum += term;
    if (k > 10 && term < 1e-18 * sum) break;
  }
  return s * s * sum;
}

inline SuiteResult heat_suite(std::size_t grid = 2000) {
  using namespace spectral;
  const detail::Stopwatch clock;
  SuiteResult s;
  s.name = "heat trace";
  for (const auto& v : {constant_potential(2.0), gaussian_bump(20.0, 0.4), double_bump(12.0, 0.5)}) {
    double tail_ratio = 0.0, excess = -std::numeric_limits<double>::infinity();
    for (double t : heat_times()) {
      const auto h = heat_trace(v, t, grid);
      tail_ratio = std::max(tail_ratio, h.tail / h.partial);
      excess = std::max(excess, t * t * (h.partial + h.tail) - t * t * h.bound);
    }
    s.at_most("t^2 (h(t) + tail) - 36 |V_eps|^2 / Y^2, " + v.label(), excess, 0.0);
    s.at_most("tail / partial sum, " + v.label(), tail_ratio, 0.01);
  }
  const double c = 2.0, t = 0.05;
  const auto v = constant_potential(c);
  const auto h = heat_trace(v, t, grid);
  const double ceps = c + v.epsilon();
  const double plateau = t * t * (h.partial + h.tail) / (ceps * ceps);
  s.at_most("small-t plateau relative to 1/24, V = 2, t = 0.05", detail::rel_error(plateau, 1.0 / 24.0), 0.05,
            "t^2 h(t) / c^2 = " + std::to_string(plateau));
  s.seconds = clock.seconds();
  return s;
}

inline SuiteResult birman_schwinger_suite(std::size_t grid = 2000) {
  using namespace spectral;
  const detail::Stopwatch clock;
  SuiteResult s;
  s.name = "birman-schwinger";
  for (double c : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    const auto b = birman_schwinger_compare(constant_potential(c), grid);
    s.holds("N0 = #{mu <= 1}, V = " + std::to_string(static_cast<int>(c)), b.negative_count == b.weighted_count,
            std::to_string(b.negative_count) + " vs " + std::to_string(b.weighted_count));
  }
  for (const auto& v : {gaussian_bump(40.0, 0.4), double_bump(25.0, 0.6)}) {
    const auto b = birman_schwinger_compare(v, grid);
    s.holds("N0 <= #{mu <= 1}, " + v.label(), b.holds(),
            std::to_string(b.negative_count) + " vs " + std::to_string(b.weighted_count));
  }
  s.seconds = clock.seconds();
  return s;
}

inline SuiteResult gauge_suite() {
  using namespace spectral;
  const detail::Stopwatch clock;
  SuiteResult s;
  s.name = "gauge fixing";
  const double g1 = lieforms::gamma1_ceiling;
  for (double f0 : {2.0, 3.0, 10.0}) {
    const auto p = constant_gauge_problem(f0, g1);
    const double t0 = find_t0(p);
    const double expect = 4.0 / (g1 * f0);
    const std::string tag = "f0 = " + detail::num(f0);
    s.at_most("|t0 - 4 / (gamma1 f0)|, " + tag, std::abs(t0 - expect), 1e-8);
    s.at_most("|t0 - lower bound|, " + tag, std::abs(t0 - t0_lower_bound(p)), 1e-8);
    double prev = std::numeric_limits<double>::infinity(), rise = 0.0;
    for (int i = 0; i <= 20; ++i) {
      const double l1 = lambda1_Lt(p, i / 20.0);
      rise = std::max(rise, l1 - prev);
      prev = l1;
    }
    s.at_most("largest increase of lambda1(L^t) over t in [0, 1], " + tag, rise, 0.0);
  }
  GaugeProblem p;
  p.gamma1 = g1;
  p.curvature_norm = [](double th) { return 3.0 * std::exp(-(1.0 - std::cos(th)) / 0.3); };
  p.weyl_norm = [](double th) { return 0.5 * (1.0 + std::cos(th)); };
  double prev = std::numeric_limits<double>::infinity(), rise = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double l1 = lambda1_Lt(p, i / 20.0);
    rise = std::max(rise, l1 - prev);
    prev = l1;
  }
  s.at_most("largest increase of lambda1(L^t), concentrated |F| with |W| != 0", rise, 0.0);
  s.seconds = clock.seconds();
  return s;
}

inline SuiteResult bounds_suite() {
  using namespace invariants;
  const detail::Stopwatch clock;
  SuiteResult s;
  s.name = "bound evaluators";
  const double y_s4 = 8.0 * std::sqrt(6.0) * pi;
  s.at_most("einstein_energy_bound(2, 0) vs 8 sqrt6 pi, relative", detail::rel_error(einstein_energy_bound(2, 0.0), y_s4),
            1e-12);
  s.at_most("|b1 bound at rho1 = 1/24|", std::abs(betti_bounds(1.0 / 24.0, 0.0).b1), 1e-12);
  s.at_most("b+ bound at rho+ = 1 vs 3 e^2, relative", detail::rel_error(betti_bounds(0.0, 1.0).bplus, 3.0 * e2), 1e-12);
  for (const auto& r : catalog()) {
    const double lhs = 0.75 * invariants::detail::need(r.int_Z2, "int_Z2", r).value;
    const double rhs = cgb_tracefree(r);
    const double scale = 12.0 * pi2 * std::abs(r.chi) + 1.5 * invariants::detail::need(r.int_W2, "int_W2", r).value +
                         invariants::detail::need(r.int_R2, "int_R2", r).value / 16.0;
    s.at_most("Chern-Gauss-Bonnet, " + r.name, std::abs(lhs - rhs) / scale, 1e-10);
  }
  s.seconds = clock.seconds();
  return s;
}

// In strict mode the sphere coefficient disagreement is a failure, not a warning.
inline SuiteResult sphere_comparison_suite(double dim_g = 3.0, bool strict = false) {
  using namespace invariants;
  SuiteResult s;
  s.name = "sphere cross-check";
  const auto c = sphere_index_comparison(dim_g);
  s.at_most("constant term vs -9 e^2 d, relative", detail::rel_error(c.direct_constant, c.stated_constant), 1e-15);
  const auto s4 = find_record(catalog(), "S4");
  const auto b = ym_index_bound(s4, 1.0, 0.0, dim_g);
  const bool mismatch = !invariants::detail::close(c.direct_slope, c.stated_slope, 1e-12);
  s.holds("int |F|^2 coefficient discrepancy detected", mismatch, "ratio " + detail::num(c.slope_ratio));
  s.holds("discrepancy reported as a warning", mismatch && !b.warnings.empty());
  for (const auto& w : b.warnings) s.warnings.push_back(w);
  if (strict) s.at_most("int |F|^2 coefficient ratio - 1 (strict)", std::abs(c.slope_ratio - 1.0), 1e-12);
  return s;
}

}  // namespace ymlab::cli
