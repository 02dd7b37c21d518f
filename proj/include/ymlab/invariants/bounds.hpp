#pragma once

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ymlab/errors.hpp"
#include "ymlab/invariants/geometry.hpp"

namespace ymlab::invariants {

inline constexpr double e_number = std::numbers::e;
inline constexpr double e2 = e_number * e_number;

struct BoundReport {
  std::string name;
  double value = 0.0;
  std::map<std::string, double> inputs;
  bool vacuous = false;  // value <= 0
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
};

inline nlohmann::json to_json(const BoundReport& b) {
  return {{"name", b.name}, {"value", b.value}, {"inputs", b.inputs},
          {"vacuous", b.vacuous}, {"notes", b.notes}, {"warnings", b.warnings}};
}

// -|Ric|^2/8 + R^2/24 from the Ricci eigenvalues.
inline double sigma2_pointwise(const std::array<double, 4>& ric, double scalar) {
  const double trace = ric[0] + ric[1] + ric[2] + ric[3];
  if (std::abs(trace - scalar) > 1e-10 * std::max(1.0, std::abs(scalar)))
    throw parameter_error("sigma2_pointwise: Ricci eigenvalues do not sum to R");
  double norm2 = 0.0;
  for (double x : ric) norm2 += x * x;
  return -norm2 / 8.0 + scalar * scalar / 24.0;
}

namespace detail {

inline double usable(const std::optional<Field>& f, const char* field, const GeometryRecord& r, bool allow_external) {
  const Field& v = need(f, field, r);
  if (v.external && !allow_external)
    throw precondition_error("record " + r.name + ": field " + field + " is external (" + v.provenance +
                             "); pass allow_external to use it");
  return v.value;
}

inline double positive_yamabe(const GeometryRecord& r, bool allow_external) {
  const double y = usable(r.yamabe, "yamabe", r, allow_external);
  if (!(y > 0.0)) throw parameter_error("record " + r.name + ": Yamabe invariant must be positive");
  return y;
}

}  // namespace detail

struct RhoInvariants {
  double rho1 = 0.0;
  double rho_plus = 0.0;
};

// rho1 = 4 int sigma2 / Y^2, rho+ = 24 int |W+|^2 / Y^2.  A vanishing
// numerator gives 0 for any positive Y, so an external Y is not needed then.
inline RhoInvariants rho_invariants(const GeometryRecord& r, bool allow_external = false) {
  if (!r.yamabe_positive) throw parameter_error("rho_invariants: record " + r.name + " does not have positive Yamabe invariant");
  const double s = detail::usable(r.int_sigma2, "int_sigma2", r, allow_external);
  const double w = detail::usable(r.int_Wplus2, "int_Wplus2", r, allow_external);
  RhoInvariants out;
  if (s != 0.0 || w != 0.0) {
    const double y = detail::positive_yamabe(r, allow_external);
    out.rho1 = 4.0 * s / (y * y);
    out.rho_plus = 24.0 * w / (y * y);
  }
  return out;
}

// Constant and int |F|^2 slope of the index bound on the round sphere, by
// substitution into the general bound and as stated in the closed form for S^4.
struct SphereComparison {
  double direct_constant = 0.0, direct_slope = 0.0;
  double stated_constant = 0.0, stated_slope = 0.0;
  double slope_ratio = 0.0;
};

inline SphereComparison sphere_index_comparison(double dim_g) {
  SphereComparison c;
  const double y2 = 384.0 * pi2;
  c.direct_constant = 144.0 * e2 * dim_g / y2 * (-24.0 * pi2);
  c.direct_slope = 144.0 * e2 * dim_g / y2 * 12.0;
  c.stated_constant = -9.0 * e2 * dim_g;
  c.stated_slope = 9.0 * e2 * dim_g / (4.0 * pi2);
  c.slope_ratio = c.direct_slope / c.stated_slope;
  return c;
}

inline bool is_round_sphere(const GeometryRecord& r) {
  return r.chi == 2 && r.int_W2 && r.int_W2->value == 0.0 && r.yamabe && !r.yamabe->external &&
         detail::close(r.yamabe->value * r.yamabe->value, 384.0 * pi2, 1e-12);
}

// (144 e^2 d / Y^2) { -12 pi^2 chi + 12 int|F|^2 + 3 sqrt2 int|W||F| + 3 int|W|^2 }.
inline BoundReport ym_index_bound(const GeometryRecord& r, double int_F2, double int_WF, double dim_g,
                                  bool allow_external = false) {
  if (int_F2 < 0.0 || int_WF < 0.0) throw parameter_error("ym_index_bound: curvature integrals must be nonnegative");
  if (!(dim_g >= 1.0)) throw parameter_error("ym_index_bound: dim g_E must be at least 1");
  const double y = detail::positive_yamabe(r, allow_external);
  const double w2 = detail::usable(r.int_W2, "int_W2", r, allow_external);
  BoundReport b;
  b.name = "yang-mills index plus nullity";
  const double pref = 144.0 * e2 * dim_g / (y * y);
  b.value = pref * (-12.0 * pi2 * r.chi + 12.0 * int_F2 + 3.0 * std::sqrt(2.0) * int_WF + 3.0 * w2);
  b.inputs = {{"chi", static_cast<double>(r.chi)}, {"yamabe", y}, {"int_W2", w2},
              {"int_F2", int_F2}, {"int_WF", int_WF}, {"dim_g", dim_g}};
  b.vacuous = !(b.value > 0.0);
  b.notes.push_back("geometry " + r.name + ": Yamabe " + r.yamabe->provenance);
  if (is_round_sphere(r)) {
    const auto c = sphere_index_comparison(dim_g);
    const double stated = c.stated_constant + c.stated_slope * int_F2;
    b.inputs["sphere_stated_value"] = stated;
    b.notes.push_back("round sphere: constant term -9 e^2 d in both forms");
    if (!detail::close(c.direct_slope, c.stated_slope, 1e-12)) {
      b.warnings.push_back("round sphere: int |F|^2 coefficient is 9 e^2 d / (2 pi^2) by substitution but 9 e^2 d / (4 pi^2) "
                           "in the closed form for S^4 (ratio " + std::to_string(c.slope_ratio) + "); closed-form value " +
                           std::to_string(stated));
    }
  }
  return b;
}

// 24 pi sqrt(chi / (3 + (i + n) / (24 e^2))).
inline double einstein_energy_bound(int chi, double index_plus_nullity) {
  if (chi <= 0) throw parameter_error("einstein_energy_bound: chi must be positive for positive-scalar Einstein metrics");
  if (index_plus_nullity < 0.0) throw parameter_error("einstein_energy_bound: index plus nullity must be nonnegative");
  return 24.0 * pi * std::sqrt(static_cast<double>(chi) / (3.0 + index_plus_nullity / (24.0 * e2)));
}

struct BettiBounds {
  double b1 = 0.0;     // 9 e^2 (1 - 24 rho1)
  double bplus = 0.0;  // 3 e^2 (2 sqrt(rho+) - 1)^2
};

inline BettiBounds betti_bounds(double rho1, double rho_plus) {
  if (rho_plus < 0.0) throw parameter_error("betti_bounds: rho+ must be nonnegative");
  const double s = 2.0 * std::sqrt(rho_plus) - 1.0;
  return {9.0 * e2 * (1.0 - 24.0 * rho1), 3.0 * e2 * s * s};
}

// Every bound available for one record.
inline std::vector<BoundReport> bounds_report(const GeometryRecord& r, double int_F2, double int_WF, double dim_g,
                                              bool allow_external = false) {
  std::vector<BoundReport> out;
  out.push_back(ym_index_bound(r, int_F2, int_WF, dim_g, allow_external));
  const auto rho = rho_invariants(r, allow_external);
  const auto bb = betti_bounds(rho.rho1, rho.rho_plus);
  BoundReport b1;
  b1.name = "b1";
  b1.value = bb.b1;
  b1.inputs = {{"rho1", rho.rho1}};
  b1.vacuous = !(b1.value > 0.0);
  if (r.b1) b1.inputs["b1_actual"] = r.b1->value;
  out.push_back(b1);
  BoundReport bp;
  bp.name = "b+";
  bp.value = bb.bplus;
  bp.inputs = {{"rho_plus", rho.rho_plus}};
  bp.vacuous = !(bp.value > 0.0);
  if (r.bplus) bp.inputs["bplus_actual"] = r.bplus->value;
  out.push_back(bp);
  if (r.einstein && r.chi > 0) {
    BoundReport eb;
    eb.name = "einstein normalized total scalar curvature";
    // The bound decreases in index plus nullity, so 0 is always admissible.
    const bool known = r.index_plus_nullity && (allow_external || !r.index_plus_nullity->external);
    const double ipn = known ? r.index_plus_nullity->value : 0.0;
    eb.value = einstein_energy_bound(r.chi, ipn);
    eb.inputs = {{"chi", static_cast<double>(r.chi)}, {"index_plus_nullity", ipn}};
    if (!r.index_plus_nullity) eb.notes.push_back("index plus nullity unknown; 0 gives the largest bound");
    else if (!known) eb.notes.push_back("index plus nullity is external and was not used; 0 gives the largest bound");
    if (r.scalar_curvature && r.volume)
      eb.inputs["actual"] = r.scalar_curvature->value * std::sqrt(r.volume->value);
    out.push_back(eb);
  }
  return out;
}

}  // namespace ymlab::invariants
