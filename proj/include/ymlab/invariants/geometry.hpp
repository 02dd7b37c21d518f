#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ymlab/errors.hpp"

namespace ymlab::invariants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double pi2 = pi * pi;

// A number together with where it came from.  External values rest on facts
// that are not derived here; evaluators refuse them unless told otherwise.
struct Field {
  double value = 0.0;
  std::string provenance;
  bool external = false;
};

// Integrated curvature data of a model four-manifold.  |W|^2 uses the norm of
// W as an endomorphism of the two-forms.
struct GeometryRecord {
  std::string name;
  int chi = 0;
  std::optional<Field> yamabe, volume, scalar_curvature;
  std::optional<Field> int_R2, int_W2, int_Wplus2, int_Z2, int_sigma2;
  std::optional<Field> b1, bplus, index_plus_nullity;
  bool einstein = false;
  bool yamabe_metric = false;
  bool kahler = false;
  bool yamabe_positive = true;
  std::string norm_convention = "End(Lambda2)";
};

namespace detail {

inline bool close(double a, double b, double rel = 1e-10) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

inline const Field& need(const std::optional<Field>& f, const char* field, const GeometryRecord& r) {
  if (!f) throw parameter_error("record " + r.name + ": field " + field + " is missing");
  return *f;
}

}  // namespace detail

// (3/4) int |Z|^2 = -12 pi^2 chi + (3/2) int |W|^2 + (1/16) int R^2.
inline double cgb_tracefree(const GeometryRecord& r) {
  const double w2 = detail::need(r.int_W2, "int_W2", r).value;
  const double r2 = detail::need(r.int_R2, "int_R2", r).value;
  const double v = -12.0 * pi2 * r.chi + 1.5 * w2 + r2 / 16.0;
  if (v < -1e-10 * std::max(1.0, 12.0 * pi2 * std::abs(r.chi)))
    throw inconsistent_record_error("Chern-Gauss-Bonnet",
                                    "record " + r.name + ": Chern-Gauss-Bonnet gives a negative int |Z|^2");
  return std::max(v, 0.0);
}

inline double tracefree_energy(const GeometryRecord& r) { return cgb_tracefree(r) * 4.0 / 3.0; }

// Checks the identities tying the stored fields together; throws
// inconsistent_record_error naming the first one violated.
inline void validate(const GeometryRecord& r) {
  auto fail = [&](const std::string& id, const std::string& msg) {
    throw inconsistent_record_error(id, "record " + r.name + ": " + msg);
  };
  auto check_finite = [&](const std::optional<Field>& f, const char* name) {
    if (f && !std::isfinite(f->value)) fail("finite fields", std::string(name) + " is not finite");
  };
  check_finite(r.yamabe, "yamabe");
  check_finite(r.volume, "volume");
  check_finite(r.scalar_curvature, "scalar_curvature");
  check_finite(r.int_R2, "int_R2");
  check_finite(r.int_W2, "int_W2");
  check_finite(r.int_Wplus2, "int_Wplus2");
  check_finite(r.int_Z2, "int_Z2");
  check_finite(r.int_sigma2, "int_sigma2");
  if (r.volume && r.volume->value <= 0.0) fail("positive volume", "volume must be positive");
  if (r.int_W2 && r.int_W2->value < 0.0) fail("nonnegative norms", "int |W|^2 is negative");
  if (r.int_Z2 && r.int_Z2->value < 0.0) fail("nonnegative norms", "int |Z|^2 is negative");
  if (r.int_Wplus2 && r.int_Wplus2->value < 0.0) fail("nonnegative norms", "int |W+|^2 is negative");
  if (r.int_Wplus2 && r.int_W2 && r.int_Wplus2->value > r.int_W2->value * (1.0 + 1e-12))
    fail("W+ part of W", "int |W+|^2 exceeds int |W|^2");
  if (r.yamabe_positive && r.yamabe && !(r.yamabe->value > 0.0)) fail("Yamabe positivity", "Yamabe invariant must be positive");
  if (r.int_W2 && r.int_R2) {
    const double z = tracefree_energy(r);
    if (r.int_Z2 && !detail::close(z, r.int_Z2->value))
      fail("Chern-Gauss-Bonnet", "(3/4) int |Z|^2 differs from -12 pi^2 chi + (3/2) int |W|^2 + (1/16) int R^2");
    if (r.einstein && !detail::close(z, 0.0)) fail("Einstein", "Einstein record with nonzero int |Z|^2");
  }
  if (r.int_sigma2 && r.int_Z2 && r.int_R2) {
    const double s = -r.int_Z2->value / 8.0 + r.int_R2->value / 96.0;
    if (!detail::close(s, r.int_sigma2->value)) fail("sigma2", "int sigma2 differs from -int|Z|^2/8 + int R^2/96");
  }
  if (r.scalar_curvature && r.volume && r.int_R2) {
    const double s = r.scalar_curvature->value;
    if (!detail::close(s * s * r.volume->value, r.int_R2->value)) fail("constant scalar curvature", "int R^2 differs from R^2 vol");
  }
  if (r.yamabe_metric && r.yamabe && r.scalar_curvature && r.volume) {
    const double y = r.scalar_curvature->value * std::sqrt(r.volume->value);
    if (!detail::close(y, r.yamabe->value)) fail("Yamabe metric", "Yamabe invariant differs from R vol^(1/2)");
  }
}

inline Field derived(double v, std::string why) { return {v, std::move(why), false}; }
inline Field external(double v, std::string why) { return {v, std::move(why), true}; }

// Unit round S^4, Fubini-Study CP^2 (Ric = 6g), the product of unit
// two-spheres, and S^3 x S^1 with the unit S^3 and a circle of length 2 pi.
inline std::vector<GeometryRecord> catalog() {
  std::vector<GeometryRecord> out;
  {
    GeometryRecord r;
    r.name = "S4";
    r.chi = 2;
    r.einstein = r.yamabe_metric = true;
    const double vol = 8.0 * pi2 / 3.0;
    r.volume = derived(vol, "volume of the unit four-sphere");
    r.scalar_curvature = derived(12.0, "R = n(n-1) on the unit sphere");
    r.int_R2 = derived(144.0 * vol, "R^2 vol");
    r.yamabe = derived(12.0 * std::sqrt(vol), "R vol^(1/2) for the round metric; Y^2 = 384 pi^2");
    r.int_W2 = derived(0.0, "conformally flat");
    r.int_Wplus2 = derived(0.0, "conformally flat");
    r.int_Z2 = derived(0.0, "Einstein");
    r.int_sigma2 = derived(1.5 * vol, "sigma2 = 3/2 pointwise");
    r.b1 = derived(0.0, "simply connected");
    r.bplus = derived(0.0, "H^2 = 0");
    r.index_plus_nullity = external(0.0, "stability and rigidity of the round metric, not derived here");
    out.push_back(r);
  }
  {
    GeometryRecord r;
    r.name = "CP2";
    r.chi = 3;
    r.einstein = r.yamabe_metric = r.kahler = true;
    const double vol = pi2 / 2.0;
    r.volume = derived(vol, "Fubini-Study volume with Ric = 6g");
    r.scalar_curvature = derived(24.0, "Ric = 6g");
    r.int_R2 = derived(576.0 * vol, "R^2 vol");
    r.yamabe = derived(24.0 * std::sqrt(vol), "R vol^(1/2) for an Einstein metric; Y^2 = 288 pi^2");
    r.int_W2 = derived(12.0 * pi2, "Chern-Gauss-Bonnet with Z = 0");
    r.int_Wplus2 = derived(12.0 * pi2, "anti-self-dual Weyl part vanishes; signature 1 gives 12 pi^2");
    r.int_Z2 = derived(0.0, "Einstein");
    r.int_sigma2 = derived(576.0 / 96.0 * vol, "sigma2 = R^2/96 for Einstein metrics");
    r.b1 = derived(0.0, "simply connected");
    r.bplus = derived(1.0, "intersection form (1)");
    r.index_plus_nullity = external(0.0, "stability of the Fubini-Study metric, not derived here");
    out.push_back(r);
  }
  {
    GeometryRecord r;
    r.name = "S2xS2";
    r.chi = 4;
    r.einstein = r.yamabe_metric = r.kahler = true;
    const double vol = 16.0 * pi2;
    r.volume = derived(vol, "product of unit two-spheres");
    r.scalar_curvature = derived(4.0, "Ric = g");
    r.int_R2 = derived(16.0 * vol, "R^2 vol");
    r.yamabe = derived(4.0 * std::sqrt(vol), "R vol^(1/2) for an Einstein metric");
    r.int_W2 = derived(64.0 * pi2 / 3.0, "Chern-Gauss-Bonnet with Z = 0");
    r.int_Wplus2 = derived(32.0 * pi2 / 3.0, "signature 0 splits |W|^2 evenly");
    r.int_Z2 = derived(0.0, "Einstein");
    r.int_sigma2 = derived(16.0 / 96.0 * vol, "sigma2 = R^2/96 for Einstein metrics");
    r.b1 = derived(0.0, "simply connected");
    r.bplus = derived(1.0, "intersection form of signature 0 and rank 2");
    out.push_back(r);
  }
  {
    GeometryRecord r;
    r.name = "S3xS1";
    r.chi = 0;
    const double vol = 2.0 * pi2 * 2.0 * pi;
    r.volume = derived(vol, "unit S^3 times a circle of length 2 pi");
    r.scalar_curvature = derived(6.0, "Ric = diag(2,2,2,0)");
    r.int_R2 = derived(36.0 * vol, "R^2 vol");
    r.int_W2 = derived(0.0, "conformally flat");
    r.int_Wplus2 = derived(0.0, "conformally flat");
    r.int_Z2 = derived(3.0 * vol, "|Ric|^2 - R^2/4 = 12 - 9");
    r.int_sigma2 = derived(0.0, "sigma2 = -12/8 + 36/24 = 0 pointwise");
    r.yamabe = external(6.0 * std::sqrt(vol), "value of the product metric; the conformal class invariant is not derived here");
    r.b1 = derived(1.0, "H^1 of S^3 x S^1");
    r.bplus = derived(0.0, "H^2 = 0");
    out.push_back(r);
  }
  for (const auto& r : out) validate(r);
  return out;
}

inline GeometryRecord find_record(const std::vector<GeometryRecord>& records, const std::string& name) {
  for (const auto& r : records)
    if (r.name == name) return r;
  throw parameter_error("no geometry record named " + name);
}

// JSON form: numeric fields are objects {value, provenance, external}.
inline nlohmann::json field_to_json(const std::optional<Field>& f) {
  if (!f) return nullptr;
  return {{"value", f->value}, {"provenance", f->provenance}, {"external", f->external}};
}

inline nlohmann::json to_json(const GeometryRecord& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["chi"] = r.chi;
  j["einstein"] = r.einstein;
  j["yamabe_metric"] = r.yamabe_metric;
  j["kahler"] = r.kahler;
  j["yamabe_positive"] = r.yamabe_positive;
  j["norm_convention"] = r.norm_convention;
  j["yamabe"] = field_to_json(r.yamabe);
  j["volume"] = field_to_json(r.volume);
  j["scalar_curvature"] = field_to_json(r.scalar_curvature);
  j["int_R2"] = field_to_json(r.int_R2);
  j["int_W2"] = field_to_json(r.int_W2);
  j["int_Wplus2"] = field_to_json(r.int_Wplus2);
  j["int_Z2"] = field_to_json(r.int_Z2);
  j["int_sigma2"] = field_to_json(r.int_sigma2);
  j["b1"] = field_to_json(r.b1);
  j["bplus"] = field_to_json(r.bplus);
  j["index_plus_nullity"] = field_to_json(r.index_plus_nullity);
  return j;
}

namespace detail {

inline std::optional<Field> field_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  const auto& v = j.at(key);
  if (v.is_number()) return Field{v.get<double>(), "user input", false};
  if (!v.is_object() || !v.contains("value") || !v.at("value").is_number())
    throw parameter_error(std::string("geometry record: field ") + key + " must be a number or {value, ...}");
  Field f;
  f.value = v.at("value").get<double>();
  f.provenance = v.value("provenance", std::string("user input"));
  f.external = v.value("external", false);
  return f;
}

}  // namespace detail

// Reads and validates a record; missing int_Z2 is completed from
// Chern-Gauss-Bonnet.
inline GeometryRecord from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw parameter_error("geometry record must be a JSON object");
  GeometryRecord r;
  r.name = j.value("name", std::string("unnamed"));
  if (!j.contains("chi") || !j.at("chi").is_number_integer()) throw parameter_error("geometry record: integer chi required");
  r.chi = j.at("chi").get<int>();
  r.einstein = j.value("einstein", false);
  r.yamabe_metric = j.value("yamabe_metric", false);
  r.kahler = j.value("kahler", false);
  r.yamabe_positive = j.value("yamabe_positive", true);
  r.norm_convention = j.value("norm_convention", std::string("End(Lambda2)"));
  if (r.norm_convention != "End(Lambda2)")
    throw parameter_error("geometry record: only the End(Lambda2) norm convention for W is supported");
  r.yamabe = detail::field_from_json(j, "yamabe");
  r.volume = detail::field_from_json(j, "volume");
  r.scalar_curvature = detail::field_from_json(j, "scalar_curvature");
  r.int_R2 = detail::field_from_json(j, "int_R2");
  r.int_W2 = detail::field_from_json(j, "int_W2");
  r.int_Wplus2 = detail::field_from_json(j, "int_Wplus2");
  r.int_Z2 = detail::field_from_json(j, "int_Z2");
  r.int_sigma2 = detail::field_from_json(j, "int_sigma2");
  r.b1 = detail::field_from_json(j, "b1");
  r.bplus = detail::field_from_json(j, "bplus");
  r.index_plus_nullity = detail::field_from_json(j, "index_plus_nullity");
  if (!r.int_Z2 && r.int_W2 && r.int_R2) r.int_Z2 = derived(tracefree_energy(r), "Chern-Gauss-Bonnet");
  validate(r);
  return r;
}

}  // namespace ymlab::invariants
