#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "ymlab/invariants/bounds.hpp"
#include "ymlab/invariants/geometry.hpp"
#include "ymlab/numerics/rng.hpp"

using namespace ymlab;
using namespace ymlab::invariants;

TEST_CASE("sigma2 from Ricci eigenvalues", "[invariants]") {
  CHECK(sigma2_pointwise({3, 3, 3, 3}, 12) == Approx(1.5).epsilon(1e-15));
  CHECK(sigma2_pointwise({0, 0, 0, 0}, 0) == 0.0);
  CHECK(sigma2_pointwise({2, 2, 2, 0}, 6) == Approx(0.0).margin(1e-15));
  std::mt19937_64 eng = numerics::stream(11, 0);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 200; ++k) {
    const double lam = u(eng);
    const double r = 4.0 * lam;
    CHECK(sigma2_pointwise({lam, lam, lam, lam}, r) == Approx(r * r / 96.0).epsilon(1e-13).margin(1e-14));
  }
  CHECK_THROWS_AS(sigma2_pointwise({1, 1, 1, 1}, 5), parameter_error);
}

TEST_CASE("catalog records satisfy Chern-Gauss-Bonnet", "[invariants]") {
  const auto cat = catalog();
  REQUIRE(cat.size() == 4);
  for (const auto& r : cat) {
    const double lhs = 0.75 * r.int_Z2->value;
    const double rhs = -12.0 * pi2 * r.chi + 1.5 * r.int_W2->value + r.int_R2->value / 16.0;
    CHECK(lhs == Approx(rhs).epsilon(1e-10).margin(1e-10));
    CHECK(cgb_tracefree(r) == Approx(lhs).margin(1e-10));
    if (r.einstein) CHECK(tracefree_energy(r) == Approx(0.0).margin(1e-10));
  }
  const auto& s4 = find_record(cat, "S4");
  CHECK(s4.yamabe->value * s4.yamabe->value == Approx(384.0 * pi2).epsilon(1e-14));
  CHECK(s4.yamabe->value == Approx(8.0 * std::sqrt(6.0) * pi).epsilon(1e-14));
  CHECK(cgb_tracefree(s4) == Approx(0.0).margin(1e-10));
  CHECK_THROWS_AS(find_record(cat, "T4"), parameter_error);
}

TEST_CASE("Chern-Gauss-Bonnet is linear in int |W|^2", "[invariants]") {
  GeometryRecord r = find_record(catalog(), "S2xS2");
  const double z0 = tracefree_energy(r);
  r.int_W2->value += 1.0;
  CHECK(tracefree_energy(r) - z0 == Approx(2.0).epsilon(1e-12));
  GeometryRecord bad = find_record(catalog(), "S4");
  bad.int_R2->value *= 0.5;
  try {
    cgb_tracefree(bad);
    FAIL("expected inconsistent_record_error");
  } catch (const inconsistent_record_error& e) {
    CHECK(e.identity_name == "Chern-Gauss-Bonnet");
  }
}

TEST_CASE("rho invariants of the model geometries", "[invariants]") {
  const auto cat = catalog();
  const auto s4 = rho_invariants(find_record(cat, "S4"));
  CHECK(s4.rho1 == Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(s4.rho_plus == 0.0);
  const auto cp2 = rho_invariants(find_record(cat, "CP2"));
  CHECK(cp2.rho_plus == Approx(1.0).epsilon(1e-14));
  CHECK(cp2.rho1 == Approx(1.0 / 24.0).epsilon(1e-14));
  CHECK(rho_invariants(find_record(cat, "S2xS2")).rho_plus == Approx(1.0).epsilon(1e-14));
  const auto s3s1 = rho_invariants(find_record(cat, "S3xS1"));
  CHECK(s3s1.rho1 == 0.0);
  CHECK(s3s1.rho_plus == 0.0);
  GeometryRecord neg = find_record(cat, "S4");
  neg.yamabe_positive = false;
  CHECK_THROWS_AS(rho_invariants(neg), parameter_error);
}

TEST_CASE("external fields are refused unless allowed", "[invariants]") {
  const GeometryRecord s3s1 = find_record(catalog(), "S3xS1");
  CHECK_THROWS_AS(ym_index_bound(s3s1, 1.0, 0.0, 3.0), precondition_error);
  CHECK_NOTHROW(ym_index_bound(s3s1, 1.0, 0.0, 3.0, true));
  GeometryRecord r = find_record(catalog(), "S2xS2");
  r.int_sigma2->value = 1.0;  // forces the Yamabe value into rho1
  r.yamabe->external = true;
  CHECK_THROWS_AS(rho_invariants(r), precondition_error);
}

TEST_CASE("index bound on the round sphere", "[invariants]") {
  const GeometryRecord s4 = find_record(catalog(), "S4");
  const auto b = ym_index_bound(s4, 0.0, 0.0, 3.0);
  CHECK(b.value == Approx(-27.0 * e2).epsilon(1e-13));
  CHECK(b.vacuous);
  const auto c = sphere_index_comparison(3.0);
  CHECK(c.direct_constant == Approx(c.stated_constant).epsilon(1e-14));
  CHECK(c.direct_slope == Approx(9.0 * e2 * 3.0 / (2.0 * pi2)).epsilon(1e-14));
  CHECK(c.stated_slope == Approx(9.0 * e2 * 3.0 / (4.0 * pi2)).epsilon(1e-14));
  CHECK(c.slope_ratio == Approx(2.0).epsilon(1e-14));
  CHECK_FALSE(b.warnings.empty());
  const auto big = ym_index_bound(s4, 100.0, 0.0, 3.0);
  CHECK_FALSE(big.vacuous);
  CHECK(big.inputs.at("sphere_stated_value") == Approx(-27.0 * e2 + c.stated_slope * 100.0));
}

TEST_CASE("index bound is affine with the stated coefficients", "[invariants]") {
  const GeometryRecord cp2 = find_record(catalog(), "CP2");
  const double d = 8.0;
  const double y2 = cp2.yamabe->value * cp2.yamabe->value;
  const double pref = 144.0 * e2 * d / y2;
  auto v = [&](double f, double wf) { return ym_index_bound(cp2, f, wf, d).value; };
  CHECK(v(2.0, 0.0) - v(1.0, 0.0) == Approx(12.0 * pref).epsilon(1e-12));
  CHECK(v(1.0, 2.0) - v(1.0, 1.0) == Approx(3.0 * std::sqrt(2.0) * pref).epsilon(1e-12));
  GeometryRecord w = cp2;
  w.int_W2->value += 1.0;
  CHECK(ym_index_bound(w, 1.0, 1.0, d).value - v(1.0, 1.0) == Approx(3.0 * pref).epsilon(1e-12));
  CHECK(v(0.0, 0.0) == Approx(pref * (-36.0 * pi2 + 36.0 * pi2)).margin(1e-9));
  CHECK(ym_index_bound(cp2, 1.0, 1.0, d).warnings.empty());
  CHECK_THROWS_AS(ym_index_bound(cp2, -1.0, 0.0, d), parameter_error);
  CHECK_THROWS_AS(ym_index_bound(cp2, 1.0, 0.0, 0.0), parameter_error);
}

TEST_CASE("Einstein energy bound", "[invariants]") {
  const double s4 = find_record(catalog(), "S4").yamabe->value;
  CHECK(std::abs(einstein_energy_bound(2, 0.0) - s4) <= 1e-12 * s4);
  CHECK(einstein_energy_bound(2, 0.0) == Approx(61.5624).epsilon(1e-5));
  CHECK(einstein_energy_bound(3, 0.0) == Approx(24.0 * pi).epsilon(1e-15));
  double prev = einstein_energy_bound(2, 0.0);
  for (int k = 1; k <= 50; ++k) {
    const double next = einstein_energy_bound(2, k);
    CHECK(next < prev);
    prev = next;
  }
  // CP^2: its own normalized total scalar curvature sits below the bound.
  const GeometryRecord cp2 = find_record(catalog(), "CP2");
  CHECK(cp2.yamabe->value <= einstein_energy_bound(3, 0.0));
  CHECK_THROWS_AS(einstein_energy_bound(0, 0.0), parameter_error);
  CHECK_THROWS_AS(einstein_energy_bound(2, -1.0), parameter_error);
}

TEST_CASE("Betti number bounds", "[invariants]") {
  CHECK(betti_bounds(1.0 / 24.0, 0.0).b1 == Approx(0.0).margin(1e-13));
  CHECK(betti_bounds(0.0, 0.0).b1 == Approx(9.0 * e2).epsilon(1e-15));
  CHECK(betti_bounds(0.0, 0.0).b1 == Approx(66.501).epsilon(1e-4));
  CHECK(betti_bounds(0.0, 1.0).bplus == Approx(3.0 * e2).epsilon(1e-15));
  CHECK(betti_bounds(0.0, 1.0).bplus == Approx(22.167).epsilon(1e-4));
  for (int k = 0; k < 40; ++k) {
    const double r = -0.5 + 0.025 * k;
    CHECK(betti_bounds(r + 0.01, 1.0).b1 < betti_bounds(r, 1.0).b1);
    const double p = 0.25 + 0.1 * k;
    CHECK(betti_bounds(0.0, p + 0.05).bplus > betti_bounds(0.0, p).bplus);
  }
  // The model geometries respect their bounds.
  for (const auto& r : catalog()) {
    const auto rho = rho_invariants(r, true);
    const auto bb = betti_bounds(rho.rho1, rho.rho_plus);
    CHECK(r.b1->value <= bb.b1 + 1e-12);
    CHECK(r.bplus->value <= bb.bplus + 1e-12);
  }
  CHECK_THROWS_AS(betti_bounds(0.0, -0.1), parameter_error);
}

TEST_CASE("geometry records round-trip through JSON", "[invariants]") {
  for (const auto& r : catalog()) {
    const auto j = to_json(r);
    const GeometryRecord back = from_json(j);
    CHECK(back.name == r.name);
    CHECK(back.chi == r.chi);
    CHECK(back.yamabe->value == r.yamabe->value);
    CHECK(back.yamabe->external == r.yamabe->external);
    CHECK(back.int_Z2->value == r.int_Z2->value);
    CHECK(back.int_sigma2->provenance == r.int_sigma2->provenance);
  }
}

TEST_CASE("user records are completed and validated", "[invariants]") {
  nlohmann::json j = {{"name", "round"}, {"chi", 2}, {"int_W2", 0.0}, {"int_R2", 384.0 * pi2},
                      {"yamabe", 8.0 * std::sqrt(6.0) * pi}};
  const auto r = from_json(j);
  REQUIRE(r.int_Z2);
  CHECK(r.int_Z2->value == Approx(0.0).margin(1e-10));
  CHECK(r.int_Z2->provenance == "Chern-Gauss-Bonnet");

  nlohmann::json bad = j;
  bad["int_Z2"] = 5.0;
  try {
    from_json(bad);
    FAIL("expected inconsistent_record_error");
  } catch (const inconsistent_record_error& e) {
    CHECK(e.identity_name == "Chern-Gauss-Bonnet");
  }
  nlohmann::json wplus = j;
  wplus["int_Wplus2"] = 1.0;
  try {
    from_json(wplus);
    FAIL("expected inconsistent_record_error");
  } catch (const inconsistent_record_error& e) {
    CHECK(e.identity_name == "W+ part of W");
  }
  nlohmann::json noy = j;
  noy["yamabe"] = -1.0;
  CHECK_THROWS_AS(from_json(noy), inconsistent_record_error);
  CHECK_THROWS_AS(from_json(nlohmann::json{{"name", "x"}}), parameter_error);
  nlohmann::json conv = j;
  conv["norm_convention"] = "tensor";
  CHECK_THROWS_AS(from_json(conv), parameter_error);
}

TEST_CASE("bounds report collects every evaluator", "[invariants]") {
  const auto reps = bounds_report(find_record(catalog(), "S4"), 0.0, 0.0, 3.0, true);
  REQUIRE(reps.size() == 4);
  CHECK(reps[0].vacuous);
  CHECK(reps[1].name == "b1");
  CHECK(reps[1].value == Approx(0.0).margin(1e-12));
  CHECK(reps[3].value == Approx(reps[3].inputs.at("actual")).epsilon(1e-12));
  const auto j = to_json(reps[0]);
  CHECK(j.at("vacuous").get<bool>());
}

TEST_CASE("external index plus nullity falls back to the weakest bound", "[invariants]") {
  const auto reps = bounds_report(find_record(catalog(), "CP2"), 0.0, 0.0, 3.0, false);
  REQUIRE(reps.size() == 4);
  CHECK(reps[3].inputs.at("index_plus_nullity") == 0.0);
  CHECK(reps[3].value == Approx(24.0 * pi).epsilon(1e-12));
  CHECK_FALSE(reps[3].notes.empty());
}
