#include <catch2/catch.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ymlab/cli/dispatch.hpp"

using namespace ymlab::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "ymlab-cli-tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("spectral count on a constant potential", "[cli]") {
  const auto path = scratch() / "count.json";
  const auto r = invoke({"spectral", "count", "--preset", "constant", "--value", "16", "--out", path.string()});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("N0 = 20") != std::string::npos);
  const auto j = read_json(path);
  CHECK(j["result"]["N0"] == 20);
  CHECK(j["result"]["closed_form_N0"] == 20);
  CHECK(j["result"]["clr_bound"].get<double>() == Approx(64.0 * std::numbers::e * std::numbers::e).epsilon(1e-12));
  CHECK(j["result"]["clr_bound"].get<double>() == Approx(472.9).epsilon(1e-4));
  CHECK(j["passed"].get<bool>());
}

TEST_CASE("liealg verify exit code follows the property checks", "[cli]") {
  SECTION("su(2): range orthogonality fails") {
    const auto path = scratch() / "su2.json";
    const auto r = invoke({"liealg", "verify", "--seed", "7", "--samples", "500", "--out", path.string()});
    CHECK(r.code == exit_failed);
    const auto j = read_json(path);
    CHECK_FALSE(j["passed"].get<bool>());
    int failed = 0;
    for (const auto& c : j["checks"])
      if (!c["passed"].get<bool>()) {
        ++failed;
        CHECK(c["name"].get<std::string>().find("range orthogonality") != std::string::npos);
      }
    CHECK(failed == 1);
    CHECK(j["seed"] == 7);
  }
  SECTION("abelian algebra: every check passes") {
    const auto path = scratch() / "u1.json";
    const auto r = invoke({"liealg", "verify", "--seed", "3", "--samples", "200", "--algebra", "u1", "--out",
                          path.string()});
    CHECK(r.code == exit_ok);
    CHECK(read_json(path)["passed"].get<bool>());
  }
}

TEST_CASE("usage and configuration errors exit with 2", "[cli]") {
  const auto dir = scratch();
  CHECK(invoke({"liealg", "verify", "--samples", "10"}).code == exit_usage);  // no seed
  CHECK(invoke({"spectral", "count", "--grid", "-5"}).code == exit_usage);
  CHECK(invoke({"spectral", "count", "--grid", "abc"}).code == exit_usage);
  CHECK(invoke({"spectral", "count", "--preset", "square"}).code == exit_usage);
  CHECK(invoke({"spectral", "launch"}).code == exit_usage);
  CHECK(invoke({"quadrupole"}).code == exit_usage);
  CHECK(invoke({}).code == exit_usage);
  CHECK(invoke({"--config", (dir / "missing.json").string()}).code == exit_usage);
  CHECK(invoke({"quadrupole", "report", "--l-list", "3,4", "--out", (dir / "even.json").string()}).code == exit_usage);
  CHECK(invoke({"spectral", "count", "--preset", "file"}).code == exit_usage);

  const std::vector<std::pair<std::string, std::string>> configs = {
      {"negative grid", R"({"command": "spectral count", "spectral": {"grid": -3}})"},
      {"unknown top-level key", R"({"command": "spectral count", "bogus": 1})"},
      {"unknown block key", R"({"command": "spectral count", "spectral": {"grids": 3000}})"},
      {"wrong type", R"({"command": "quadrupole energy", "quadrupole": {"l": "three"}})"},
      {"unknown command", R"({"command": "spectral plot"})"},
      {"bad output format", R"({"command": "bounds report", "output": {"format": "xml"}})"},
      {"negative seed", R"({"command": "liealg verify", "seed": -1})"},
      {"not json", "{command"},
  };
  for (const auto& [what, text] : configs) {
    INFO(what);
    const auto path = dir / "bad_config.json";
    write_text(path, text);
    const auto r = invoke({"--config", path.string()});
    CHECK(r.code == exit_usage);
    CHECK_FALSE(r.err.empty());
  }
  write_text(dir / "mismatch.json", R"({"command": "bounds report"})");
  CHECK(invoke({"spectral", "count", "--config", (dir / "mismatch.json").string()}).code == exit_usage);
}

TEST_CASE("config files drive the same commands as flags", "[cli]") {
  const auto dir = scratch();
  write_text(dir / "run.json", R"({"command": "spectral bs-compare", "spectral": {"preset": "constant", "value": 8},
                                   "output": {"path": ")" + (dir / "bs.json").generic_string() + R"("}})");
  CHECK(invoke({"--config", (dir / "run.json").string()}).code == exit_ok);
  const auto j = read_json(dir / "bs.json");
  CHECK(j["result"]["N0"] == 6);
  CHECK(j["result"]["weighted_count"] == 6);

  // Flags override the file.
  CHECK(invoke({"spectral", "bs-compare", "--config", (dir / "run.json").string(), "--value", "16"}).code == exit_ok);
  CHECK(read_json(dir / "bs.json")["result"]["N0"] == 20);
}

TEST_CASE("identical inputs give byte-identical reports", "[cli]") {
  const auto dir = scratch();
  for (const auto& name : {"a.json", "b.json"})
    REQUIRE(invoke({"liealg", "verify", "--seed", "11", "--samples", "300", "--out", (dir / name).string()}).code ==
            exit_failed);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  REQUIRE(invoke({"liealg", "verify", "--seed", "12", "--samples", "300", "--out", (dir / "c.json").string()}).code ==
          exit_failed);
  CHECK(slurp(dir / "a.json") != slurp(dir / "c.json"));
}

TEST_CASE("schema dump", "[cli]") {
  const auto r = invoke({"--schema"});
  REQUIRE(r.code == exit_ok);
  const auto s = nlohmann::json::parse(r.out);
  CHECK(s["properties"]["spectral"]["properties"]["grid"]["minimum"] == 256.0);
  CHECK(s["properties"]["quadrupole"]["properties"]["delta"].contains("exclusiveMinimum"));
  CHECK(s["additionalProperties"] == false);
  CHECK(s["properties"]["command"]["enum"].size() == commands().size());
}

TEST_CASE("output directory comes from the environment", "[cli]") {
  const auto dir = scratch() / "envdir";
  ::setenv(output_dir_env, dir.c_str(), 1);
  const auto r = invoke({"spectral", "bs-compare", "--value", "4"});
  ::unsetenv(output_dir_env);
  CHECK(r.code == exit_ok);
  CHECK(fs::exists(dir / "ymlab-spectral-bs-compare.json"));
}

TEST_CASE("quadrupole commands", "[cli]") {
  const auto dir = scratch();
  SECTION("energy as csv") {
    const auto path = dir / "energy.csv";
    REQUIRE(invoke({"quadrupole", "energy", "--l", "7", "--format", "csv", "--out", path.string()}).code == exit_ok);
    const auto text = slurp(path);
    CHECK(text.rfind("# ymlab quadrupole energy\nterm,integral\n", 0) == 0);
    CHECK(text.find("\"(a2')^2 G2\",") != std::string::npos);
    CHECK(text.find("total,") != std::string::npos);
  }
  SECTION("minimize, then evaluate the written profile") {
    const auto prof = dir / "min.txt", rep = dir / "min.json";
    REQUIRE(invoke({"quadrupole", "minimize", "--l", "3", "--profile-out", prof.string(), "--out", rep.string()}).code ==
            exit_ok);
    const auto m = read_json(rep);
    CHECK(m["result"]["status"] == "converged");
    const double e_min = m["result"]["energies"].back().get<double>();
    const auto erep = dir / "min_energy.json";
    REQUIRE(invoke({"quadrupole", "energy", "--profile", prof.string(), "--out", erep.string()}).code == exit_ok);
    CHECK(read_json(erep)["result"]["total"].get<double>() == Approx(e_min).epsilon(1e-12));
  }
  SECTION("growth report") {
    const auto path = dir / "growth.csv";
    REQUIRE(invoke({"quadrupole", "report", "--l-list", "3,5,7", "--no-minimize", "--format", "csv", "--out",
                   path.string()})
                .code == exit_ok);
    const auto text = slurp(path);
    CHECK(text.find("l,kappa,taubes_bound,test_energy,minimized_energy,energy_over_l2,minimizer_status") !=
          std::string::npos);
    CHECK(text.find("\n7,5,12,") != std::string::npos);
  }
  SECTION("divergent profile is an input error") {
    auto p = ymlab::quadrupole::build_test_profile(3, ymlab::quadrupole::default_delta, 128);
    p.a2.array() += 0.5;
    const auto prof = dir / "bad_profile.txt";
    {
      std::ofstream os(prof);
      ymlab::quadrupole::write_profile(os, p);
    }
    const auto r = invoke({"quadrupole", "energy", "--profile", prof.string(), "--out", (dir / "x.json").string()});
    CHECK(r.code == exit_usage);
    CHECK(r.err.find(ymlab::quadrupole::term_names[1]) != std::string::npos);
  }
}

TEST_CASE("find-t0 and heat-trace", "[cli]") {
  const auto dir = scratch();
  const double g1 = 4.0 * std::sqrt(3.0) / 3.0;
  const auto path = dir / "t0.json";
  REQUIRE(invoke({"spectral", "find-t0", "--f0", "3", "--grid", "1000", "--out", path.string()}).code == exit_ok);
  CHECK(read_json(path)["result"]["t0"].get<double>() == Approx(4.0 / (3.0 * g1)).margin(1e-8));

  const auto hp = dir / "heat.json";
  REQUIRE(invoke({"spectral", "heat-trace", "--preset", "gaussian", "--value", "20", "--t-list", "0.5,1", "--out",
                 hp.string()})
              .code == exit_ok);
  CHECK(read_json(hp)["result"]["rows"].size() == 2);
}

TEST_CASE("bounds report and strict mode", "[cli]") {
  const auto dir = scratch();
  const auto path = dir / "bounds.json";
  const auto r = invoke({"bounds", "report", "--record", "S4", "--int-F2", "10", "--out", path.string()});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("warning: round sphere") != std::string::npos);
  const auto j = read_json(path);
  CHECK(j["warnings"].size() == 1);
  CHECK(j["result"]["bounds"][0]["inputs"].contains("sphere_stated_value"));

  const auto s = invoke({"bounds", "report", "--int-F2", "10", "--strict", "--out", (dir / "strict.json").string()});
  CHECK(s.code == exit_failed);
  CHECK_FALSE(read_json(dir / "strict.json")["passed"].get<bool>());

  // Records whose Yamabe value is external need explicit permission.
  CHECK(invoke({"bounds", "report", "--record", "S3xS1", "--out", (dir / "s3.json").string()}).code == exit_usage);
  CHECK(invoke({"bounds", "report", "--record", "S3xS1", "--allow-external", "--out", (dir / "s3.json").string()})
            .code == exit_ok);
  CHECK(invoke({"bounds", "report", "--record", "K3"}).code == exit_usage);
}

TEST_CASE("shipped configs validate", "[cli]") {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(YMLAB_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    INFO(entry.path().string());
    const auto c = load_config(entry.path().string());
    CHECK(runners().count(c.command) == 1);
    CHECK_FALSE(c.output_path.empty());
    ++n;
  }
  CHECK(n >= 5);
}
