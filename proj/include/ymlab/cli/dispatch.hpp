#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ymlab/cli/config.hpp"
#include "ymlab/cli/suites.hpp"
#include "ymlab/errors.hpp"
#include "ymlab/invariants/bounds.hpp"
#include "ymlab/invariants/geometry.hpp"
#include "ymlab/lieforms/algebra.hpp"
#include "ymlab/lieforms/sharp.hpp"
#include "ymlab/quadrupole/energy.hpp"
#include "ymlab/quadrupole/minimize.hpp"
#include "ymlab/quadrupole/profile.hpp"
#include "ymlab/spectral/gauge.hpp"
#include "ymlab/spectral/potential.hpp"
#include "ymlab/spectral/spectrum.hpp"

namespace ymlab::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failed = 1;
inline constexpr int exit_usage = 2;

inline constexpr const char* output_dir_env = "YMLAB_OUTPUT_DIR";

struct Report {
  nlohmann::json result = nlohmann::json::object();
  std::string csv;  // tabular form, written when the format is csv
  SuiteResult checks;
  std::vector<std::string> summary;
};

namespace detail {

inline std::string csv_number(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

inline std::string checks_csv(const SuiteResult& s) {
  std::ostringstream os;
  os << "check,passed,value,relation,threshold\n";
  for (const auto& c : s.checks)
    os << '"' << c.name << "\"," << (c.passed ? "true" : "false") << ',' << csv_number(c.value) << ',' << c.relation
       << ',' << csv_number(c.threshold) << '\n';
  return os.str();
}

inline quadrupole::Profile start_profile(const nlohmann::json& b) {
  const std::string file = b["profile"].get<std::string>();
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw config_error("quadrupole.profile: cannot open '" + file + "'");
    return quadrupole::read_profile(in);
  }
  return quadrupole::build_test_profile(b["l"].get<long>(), b["delta"].get<double>(),
                                        b["grid"].get<std::size_t>());
}

inline spectral::RadialPotential potential(const nlohmann::json& b) {
  const std::string preset = b["preset"].get<std::string>();
  const double value = b["value"].get<double>(), width = b["width"].get<double>(), eps = b["epsilon"].get<double>();
  if (preset == "constant") return spectral::constant_potential(value, eps);
  if (preset == "gaussian") return spectral::gaussian_bump(value, width, eps);
  if (preset == "double-bump") return spectral::double_bump(value, width, eps);
  const std::string file = b["file"].get<std::string>();
  if (file.empty()) throw config_error("spectral.file: required by the file preset");
  if (!std::filesystem::exists(file)) throw config_error("spectral.file: cannot open '" + file + "'");
  return spectral::read_potential_file(file, eps);
}

inline nlohmann::json profile_summary(const quadrupole::Profile& p) {
  return {{"l", p.boundary_target_l}, {"delta", p.delta}, {"grid", p.size()},
          {"boundary_residual", quadrupole::boundary_residual(p)},
          {"symmetry_residual", quadrupole::symmetry_residual(p)}};
}

inline bool nonincreasing(const std::vector<double>& e) {
  for (std::size_t i = 1; i < e.size(); ++i)
    if (e[i] > e[i - 1]) return false;
  return true;
}

}  // namespace detail

inline Report run_liealg_verify(const RunConfig& c) {
  const auto& b = c.block();
  LieformsOptions opt;
  opt.algebra = b["algebra"].get<std::string>();
  opt.samples = b["samples"].get<std::size_t>();
  opt.n = b["n"].get<std::size_t>();
  opt.seed = *c.seed;
  Report r;
  r.checks = lieforms_suite(opt);
  const auto g = lieforms::algebra_by_name(opt.algebra);
  lieforms::AscentOptions ascent;
  ascent.n_samples = b["ascent_samples"].get<std::size_t>();
  ascent.ascent_steps = b["ascent_steps"].get<std::size_t>();
  ascent.seed = *c.seed;
  const double g0 = lieforms::estimate_gamma0(g, ascent);
  const double g1 = lieforms::estimate_gamma1(g, ascent);
  if (opt.algebra == "su2") {
    r.checks.at_least("gamma0(su2) lower", g0, lieforms::sqrt2 - 1e-4);
    r.checks.at_most("gamma0(su2) upper", g0, lieforms::sqrt2 + 1e-9);
    r.checks.at_most("gamma1(su2)", g1, lieforms::gamma1_ceiling + 1e-9);
  }
  r.result = {{"algebra", opt.algebra}, {"dim", g.dim()}, {"n", opt.n}, {"samples", opt.samples},
              {"gamma0_estimate", g0}, {"gamma1_estimate", g1}};
  r.summary.push_back("gamma0 estimate " + detail::csv_number(g0) + ", gamma1 estimate " + detail::csv_number(g1));
  r.csv = detail::checks_csv(r.checks);
  return r;
}

inline Report run_quadrupole_energy(const RunConfig& c) {
  const auto& b = c.block();
  const auto p = detail::start_profile(b);
  const auto e = quadrupole::energy(p, b["literal"].get<bool>());
  Report r;
  r.checks.name = "quadrupole energy";
  nlohmann::json terms = nlohmann::json::object();
  std::ostringstream csv;
  csv << "term,integral\n";
  for (std::size_t i = 0; i < 6; ++i) {
    terms[quadrupole::term_names[i]] = e.terms[i];
    csv << '"' << quadrupole::term_names[i] << "\"," << detail::csv_number(e.terms[i]) << '\n';
  }
  csv << "total," << detail::csv_number(e.total) << '\n';
  r.result = detail::profile_summary(p);
  r.result["terms"] = terms;
  r.result["total"] = e.total;
  r.result["literal"] = e.literal;
  const long l = p.boundary_target_l;
  if (l > 0 && l % 2 == 1) {
    const long kappa = quadrupole::charge(l, 3);
    r.result["kappa"] = kappa;
    r.result["taubes_bound"] = quadrupole::taubes_lower_bound(kappa);
  }
  if (!e.literal) r.checks.at_least("energy is nonnegative", e.total, 0.0);
  r.summary.push_back("E = " + detail::csv_number(e.total));
  r.csv = csv.str();
  return r;
}

inline Report run_quadrupole_minimize(const RunConfig& c) {
  const auto& b = c.block();
  const auto p = detail::start_profile(b);
  const double tol = b["tol"].get<double>();
  const auto m = quadrupole::minimize_energy(p, b["max_iters"].get<std::size_t>(), tol);
  Report r;
  r.checks.name = "quadrupole minimize";
  r.checks.holds("energies are nonincreasing", detail::nonincreasing(m.energies));
  r.checks.at_most("final discrete gradient norm", m.gradient_norm, tol, m.status);
  r.checks.at_most("boundary residual is not increased", quadrupole::boundary_residual(m.profile),
                   quadrupole::boundary_residual(p) + 1e-12);
  r.result = detail::profile_summary(m.profile);
  r.result["energies"] = m.energies;
  r.result["iterations"] = m.iterations;
  r.result["gradient_norm"] = m.gradient_norm;
  r.result["status"] = m.status;
  std::ostringstream csv;
  csv << "iteration,energy\n";
  for (std::size_t i = 0; i < m.energies.size(); ++i) csv << i << ',' << detail::csv_number(m.energies[i]) << '\n';
  r.csv = csv.str();
  const std::string out = b["profile_out"].get<std::string>();
  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw config_error("quadrupole.profile_out: cannot write '" + out + "'");
    quadrupole::write_profile(os, m.profile);
    r.summary.push_back("minimized profile written to " + out);
  }
  r.summary.push_back("E: " + detail::csv_number(m.energies.front()) + " -> " + detail::csv_number(m.energies.back()) +
                      " (" + m.status + ")");
  return r;
}

inline Report run_quadrupole_report(const RunConfig& c) {
  const auto& b = c.block();
  const auto ls = b["l_list"].get<std::vector<long>>();
  const bool minimize = b["minimize"].get<bool>();
  const auto g = quadrupole::growth_report(ls, b["grid"].get<std::size_t>(), minimize, b["max_iters"].get<std::size_t>(),
                                           b["tol"].get<double>());
  Report r;
  r.checks.name = "quadrupole report";
  bool exact = true;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : g.rows) {
    const long kappa = (row.l * row.l - 9) / 8;
    exact = exact && row.kappa == kappa && row.taubes == 2 * (kappa + 1);
    rows.push_back({{"l", row.l}, {"kappa", row.kappa}, {"taubes_bound", row.taubes}, {"test_energy", row.test_energy},
                    {"minimized_energy", row.minimized_energy}, {"energy_over_l2", row.ratio},
                    {"minimizer_status", row.minimizer_status}});
    if (minimize)
      r.checks.at_most("minimized energy <= test energy, l = " + std::to_string(row.l), row.minimized_energy,
                       row.test_energy);
  }
  r.checks.holds("charge and Taubes columns are integer-exact", exact);
  if (g.rows.size() >= 2) r.checks.at_most("log-log slope of E(a_l)", g.slope, 2.05);
  r.result = {{"rows", rows}, {"slope", g.slope}, {"grid", b["grid"]}};
  std::ostringstream csv;
  quadrupole::write_growth_csv(csv, g);
  r.csv = csv.str();
  r.summary.push_back("log-log slope " + detail::csv_number(g.slope));
  return r;
}

inline Report run_spectral_count(const RunConfig& c) {
  const auto& b = c.block();
  const auto v = detail::potential(b);
  const auto s = spectral::count_nonpositive(v, b["grid"].get<std::size_t>(), true);
  const double bound = spectral::clr_bound(v);
  Report r;
  r.checks.name = "spectral count";
  r.checks.at_least("CLR bound dominates N0", bound, static_cast<double>(s.count));
  r.checks.holds("count is stable under epsilon / 10", s.epsilon_stable,
                 std::to_string(s.count) + " vs " + std::to_string(s.count_check));
  r.checks.at_least("sector cutoff certificate margin", s.certificate_margin, 0.0);
  nlohmann::json eig = nlohmann::json::array();
  std::ostringstream csv;
  csv << "eigenvalue,sector,multiplicity\n";
  for (const auto& e : s.eigenvalues) {
    eig.push_back({{"value", e.value}, {"sector", e.sector}, {"multiplicity", e.multiplicity}});
    csv << detail::csv_number(e.value) << ',' << e.sector << ',' << e.multiplicity << '\n';
  }
  r.result = {{"potential", v.label()}, {"epsilon", v.epsilon()}, {"grid", s.grid}, {"N0", s.count},
              {"clr_bound", bound}, {"max_sector", s.max_sector}, {"certificate_margin", s.certificate_margin},
              {"eigenvalues", eig}};
  if (b["preset"] == "constant") {
    const auto expected = closed_form_count(b["value"].get<double>());
    r.result["closed_form_N0"] = expected;
    r.checks.holds("N0 matches the closed form", s.count == expected,
                   std::to_string(s.count) + " vs " + std::to_string(expected));
  }
  r.summary.push_back("N0 = " + std::to_string(s.count));
  r.summary.push_back("CLR bound 36 e^2 |V|^2 / Y^2 = " + detail::csv_number(bound));
  r.csv = csv.str();
  return r;
}

inline Report run_spectral_heat_trace(const RunConfig& c) {
  const auto& b = c.block();
  const auto v = detail::potential(b);
  Report r;
  r.checks.name = "spectral heat-trace";
  nlohmann::json rows = nlohmann::json::array();
  std::ostringstream csv;
  csv << "t,partial,tail,t2_h_plus_tail,bound_constant,states\n";
  for (double t : b["t_list"].get<std::vector<double>>()) {
    const auto h = spectral::heat_trace(v, t, b["grid"].get<std::size_t>());
    const double lhs = t * t * (h.partial + h.tail), rhs = t * t * h.bound;
    const std::string tag = ", t = " + detail::csv_number(t);
    r.checks.at_most("t^2 (h(t) + tail) <= 36 |V_eps|^2 / Y^2" + tag, lhs, rhs);
    r.checks.at_most("tail below 1% of partial sum" + tag, h.tail, 0.01 * h.partial);
    rows.push_back({{"t", t}, {"partial", h.partial}, {"tail", h.tail}, {"t2_h_plus_tail", lhs}, {"bound_constant", rhs},
                    {"mu_max", h.mu_max}, {"states", h.states}});
    csv << detail::csv_number(t) << ',' << detail::csv_number(h.partial) << ',' << detail::csv_number(h.tail) << ','
        << detail::csv_number(lhs) << ',' << detail::csv_number(rhs) << ',' << h.states << '\n';
  }
  r.result = {{"potential", v.label()}, {"epsilon", v.epsilon()}, {"rows", rows}};
  r.csv = csv.str();
  return r;
}

inline Report run_spectral_bs_compare(const RunConfig& c) {
  const auto& b = c.block();
  const auto v = detail::potential(b);
  const auto s = spectral::birman_schwinger_compare(v, b["grid"].get<std::size_t>());
  Report r;
  r.checks.name = "spectral bs-compare";
  const std::string counts = std::to_string(s.negative_count) + " vs " + std::to_string(s.weighted_count);
  r.checks.holds("N0 <= #{mu <= 1}", s.holds(), counts);
  if (b["preset"] == "constant") r.checks.holds("N0 = #{mu <= 1} for a constant potential",
                                                s.negative_count == s.weighted_count, counts);
  r.result = {{"potential", v.label()}, {"N0", s.negative_count}, {"weighted_count", s.weighted_count}};
  r.summary.push_back("N0 = " + std::to_string(s.negative_count) + ", #{mu <= 1} = " + std::to_string(s.weighted_count));
  r.csv = "N0,weighted_count\n" + std::to_string(s.negative_count) + ',' + std::to_string(s.weighted_count) + '\n';
  return r;
}

inline Report run_spectral_find_t0(const RunConfig& c) {
  const auto& b = c.block();
  const double f0 = b["f0"].get<double>(), w0 = b["weyl"].get<double>(), width = b["width"].get<double>();
  spectral::GaugeProblem p;
  p.gamma1 = b["gamma1"].get<double>();
  p.grid = b["grid"].get<std::size_t>();
  p.weyl_norm = [w0](double) { return w0; };
  const bool constant = b["curvature"] == "constant";
  if (constant) p.curvature_norm = [f0](double) { return f0; };
  else p.curvature_norm = [f0, width](double th) { return f0 * std::exp(-(1.0 - std::cos(th)) / (width * width)); };
  const double t0 = spectral::find_t0(p);
  const double lower = spectral::t0_lower_bound(p);
  const double l1 = spectral::lambda1_Lt(p, t0);
  Report r;
  r.checks.name = "spectral find-t0";
  r.checks.at_least("t0 is at least the Yamabe lower bound", t0, std::min(lower, 1.0) - 1e-8);
  if (t0 < 1.0) r.checks.at_most("|lambda1(L^t0)|", std::abs(l1), 1e-6);
  double prev = std::numeric_limits<double>::infinity(), rise = 0.0;
  nlohmann::json curve = nlohmann::json::array();
  for (int i = 0; i <= 20; ++i) {
    const double t = i / 20.0, l = spectral::lambda1_Lt(p, t);
    rise = std::max(rise, l - prev);
    prev = l;
    curve.push_back({{"t", t}, {"lambda1", l}});
  }
  r.checks.at_most("largest increase of lambda1(L^t) on [0, 1]", rise, 0.0);
  r.result = {{"t0", t0}, {"lower_bound", lower}, {"lambda1_at_t0", l1}, {"lambda1_curve", curve}};
  if (constant && w0 == 0.0 && p.gamma1 * f0 > 4.0) {
    const double expected = 4.0 / (p.gamma1 * f0);
    r.result["closed_form_t0"] = expected;
    r.checks.at_most("|t0 - 4 / (gamma1 f0)|", std::abs(t0 - expected), 1e-8);
  }
  r.summary.push_back("t0 = " + detail::csv_number(t0) + ", lower bound " + detail::csv_number(lower));
  std::ostringstream csv;
  csv << "t,lambda1\n";
  for (const auto& row : curve) csv << detail::csv_number(row["t"]) << ',' << detail::csv_number(row["lambda1"]) << '\n';
  r.csv = csv.str();
  return r;
}

inline Report run_bounds_report(const RunConfig& c) {
  const auto& b = c.block();
  invariants::GeometryRecord rec;
  const std::string file = b["record_file"].get<std::string>();
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw config_error("bounds.record_file: cannot open '" + file + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw config_error("bounds.record_file: invalid JSON: " + std::string(e.what()));
    }
    rec = invariants::from_json(j);
  } else {
    rec = invariants::find_record(invariants::catalog(), b["record"].get<std::string>());
  }
  const auto reports = invariants::bounds_report(rec, b["int_F2"].get<double>(), b["int_WF"].get<double>(),
                                                 b["dim_g"].get<double>(), b["allow_external"].get<bool>());
  Report r;
  r.checks.name = "bounds report";
  if (rec.int_Z2 && rec.int_W2 && rec.int_R2) {
    const double lhs = 0.75 * rec.int_Z2->value, rhs = invariants::cgb_tracefree(rec);
    const double scale = 12.0 * invariants::pi2 * std::abs(rec.chi) + 1.5 * rec.int_W2->value + rec.int_R2->value / 16.0;
    r.checks.at_most("Chern-Gauss-Bonnet, " + rec.name, std::abs(lhs - rhs) / scale, 1e-10);
  }
  nlohmann::json list = nlohmann::json::array();
  std::ostringstream csv;
  csv << "bound,value,vacuous\n";
  for (const auto& br : reports) {
    list.push_back(invariants::to_json(br));
    for (const auto& w : br.warnings) r.checks.warnings.push_back(w);
    csv << '"' << br.name << "\"," << detail::csv_number(br.value) << ',' << (br.vacuous ? "true" : "false") << '\n';
    r.summary.push_back(br.name + " = " + detail::csv_number(br.value) + (br.vacuous ? " (vacuous)" : ""));
  }
  r.result = {{"record", invariants::to_json(rec)}, {"bounds", list}};
  r.csv = csv.str();
  return r;
}

inline const std::map<std::string, std::function<Report(const RunConfig&)>>& runners() {
  static const std::map<std::string, std::function<Report(const RunConfig&)>> m = {
      {"liealg verify", run_liealg_verify},         {"quadrupole energy", run_quadrupole_energy},
      {"quadrupole minimize", run_quadrupole_minimize}, {"quadrupole report", run_quadrupole_report},
      {"spectral count", run_spectral_count},       {"spectral heat-trace", run_spectral_heat_trace},
      {"spectral bs-compare", run_spectral_bs_compare}, {"spectral find-t0", run_spectral_find_t0},
      {"bounds report", run_bounds_report},
  };
  return m;
}

inline std::filesystem::path output_path(const RunConfig& c) {
  if (!c.output_path.empty()) return c.output_path;
  const char* dir = std::getenv(output_dir_env);
  std::string name = "ymlab-" + c.command + "." + c.format;
  std::replace(name.begin(), name.end(), ' ', '-');
  return std::filesystem::path(dir && *dir ? dir : ".") / name;
}

inline std::string render(const RunConfig& c, const Report& r) {
  if (c.format == "csv") return "# ymlab " + c.command + "\n" + r.csv;
  nlohmann::json j = {{"command", c.command},
                      {"parameters", c.block()},
                      {"strict", c.strict},
                      {"result", r.result},
                      {"checks", to_json(r.checks)["checks"]},
                      {"warnings", r.checks.warnings},
                      {"passed", r.checks.passed()}};
  if (c.seed) j["seed"] = *c.seed;
  return j.dump(2) + "\n";
}

// Runs one command, writes its report and returns the exit code.
inline int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Report r;
  try {
    r = runners().at(c.command)(c);
  } catch (const resolution_error& e) {
    err << "ymlab " << c.command << ": failed: " << e.what() << '\n';
    return exit_failed;
  } catch (const truncation_error& e) {
    err << "ymlab " << c.command << ": failed: " << e.what() << '\n';
    return exit_failed;
  } catch (const divergent_integral_error& e) {
    err << "ymlab " << c.command << ": invalid input: " << e.what() << " [term " << e.term_name << "]\n";
    return exit_usage;
  } catch (const inconsistent_record_error& e) {
    err << "ymlab " << c.command << ": invalid input: " << e.what() << " [identity " << e.identity_name << "]\n";
    return exit_usage;
  } catch (const error& e) {
    err << "ymlab " << c.command << ": invalid input: " << e.what() << '\n';
    return exit_usage;
  }
  if (c.strict)
    for (const auto& w : r.checks.warnings) r.checks.holds("no discrepancy (strict): " + w, false);
  const auto path = output_path(c);
  {
    if (path.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
      err << "ymlab " << c.command << ": cannot write '" << path.string() << "'\n";
      return exit_usage;
    }
    os << render(c, r);
  }
  for (const auto& line : r.summary) out << line << '\n';
  for (const auto& ch : r.checks.checks) {
    out << (ch.passed ? "ok   " : "FAIL ") << ch.name << ": " << detail::csv_number(ch.value) << ' ' << ch.relation << ' '
        << detail::csv_number(ch.threshold);
    if (!ch.detail.empty()) out << "  (" << ch.detail << ')';
    out << '\n';
  }
  for (const auto& w : r.checks.warnings) out << "warning: " << w << '\n';
  out << "report written to " << path.string() << '\n';
  return r.checks.passed() ? exit_ok : exit_failed;
}

namespace detail {

inline std::string option_name(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return "--" + s;
}

inline nlohmann::json convert(const Param& p, const std::vector<std::string>& raw) {
  auto integer = [&](const std::string& s) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || s.empty()) throw config_error(option_name(p.key) + ": '" + s + "' is not an integer");
    return v;
  };
  auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || s.empty()) throw config_error(option_name(p.key) + ": '" + s + "' is not a number");
    return v;
  };
  switch (p.type) {
    case ParamType::integer: return integer(raw.front());
    case ParamType::number: return number(raw.front());
    case ParamType::string: return raw.front();
    case ParamType::boolean: return raw.front() == "true";
    case ParamType::integer_array: {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& s : raw) a.push_back(integer(s));
      return a;
    }
    case ParamType::number_array: {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& s : raw) a.push_back(number(s));
      return a;
    }
  }
  return nullptr;
}

}  // namespace detail

// Command-line front end: subcommand flags and an optional JSON config are
// merged into one RunConfig, flags taking precedence.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for Yang-Mills index and energy estimates on four-manifolds", "ymlab"};
  app.require_subcommand(0, 1);
  std::string config_path, out_path, format;
  std::uint64_t seed = 0;
  bool strict = false, schema = false;
  auto* o_config = app.add_option("--config", config_path, "JSON run configuration");
  auto* o_seed = app.add_option("--seed", seed, "seed for randomized checks");
  auto* o_out = app.add_option("--out", out_path, "report path; default $YMLAB_OUTPUT_DIR or the working directory");
  auto* o_format = app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
  auto* o_strict = app.add_flag("--strict", strict, "treat reported discrepancies as failures");
  app.add_flag("--schema", schema, "print the JSON schema of the configuration and exit");

  struct Leaf {
    std::string command;
    CLI::App* app;
    std::map<std::string, std::vector<std::string>> values;
    std::map<std::string, CLI::Option*> options;
  };
  std::vector<std::unique_ptr<Leaf>> leaves;
  std::map<std::string, CLI::App*> groups;
  for (const auto& command : commands()) {
    const std::string group = block_of(command), name = command.substr(command.find(' ') + 1);
    if (!groups.count(group)) {
      groups[group] = app.add_subcommand(group, group + " commands")->require_subcommand(1, 1)->fallthrough();
    }
    auto leaf = std::make_unique<Leaf>();
    leaf->command = command;
    leaf->app = groups[group]->add_subcommand(name, command)->fallthrough();
    for (const auto& p : parameter_blocks().at(group)) {
      auto& slot = leaf->values[p.key];
      if (p.type == ParamType::boolean) {
        auto* flag = leaf->app->add_flag_function(
            detail::option_name(p.key) + ",!--no-" + detail::option_name(p.key).substr(2),
            [&slot](std::int64_t v) { slot = {v > 0 ? "true" : "false"}; }, p.description);
        leaf->options[p.key] = flag;
      } else {
        auto* opt = leaf->app->add_option(detail::option_name(p.key), slot, p.description);
        if (p.type == ParamType::integer_array || p.type == ParamType::number_array) opt->delimiter(',');
        else opt->expected(1);
        leaf->options[p.key] = opt;
      }
    }
    leaves.push_back(std::move(leaf));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }
  if (schema) {
    out << config_schema().dump(2) << '\n';
    return exit_ok;
  }

  try {
    nlohmann::json j = nlohmann::json::object();
    if (*o_config) {
      std::ifstream in(config_path);
      if (!in) throw config_error("config: cannot open '" + config_path + "'");
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw config_error("config: '" + config_path + "' is not valid JSON: " + e.what());
      }
      if (!j.is_object()) throw config_error("config: top level must be an object");
    }
    const Leaf* chosen = nullptr;
    for (const auto& l : leaves)
      if (l->app->parsed()) chosen = l.get();
    if (chosen) {
      if (j.contains("command") && j["command"] != chosen->command)
        throw config_error("config names command '" + j["command"].get<std::string>() + "' but '" + chosen->command +
                           "' was requested");
      j["command"] = chosen->command;
      const std::string group = block_of(chosen->command);
      for (const auto& p : parameter_blocks().at(group))
        if (chosen->options.at(p.key)->count() > 0) j[group][p.key] = detail::convert(p, chosen->values.at(p.key));
    } else if (!*o_config) {
      err << app.help();
      return exit_usage;
    }
    if (*o_seed) j["seed"] = seed;
    if (*o_strict) j["strict"] = strict;
    if (*o_out) j["output"]["path"] = out_path;
    if (*o_format) j["output"]["format"] = format;
    const RunConfig c = parse_config(j);
    return dispatch(c, out, err);
  } catch (const config_error& e) {
    err << "ymlab: " << e.what() << '\n';
    return exit_usage;
  }
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace ymlab::cli
