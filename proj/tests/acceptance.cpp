#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "ymlab/cli/suites.hpp"

using namespace ymlab::cli;

namespace {

void print_suite(int criterion, const SuiteResult& s) {
  std::printf("criterion %d %s  [%s, %.1f s]\n", criterion, s.passed() ? "PASS" : "FAIL", s.name.c_str(), s.seconds);
  for (const auto& c : s.checks)
    std::printf("    %-4s %s: %.6g %s %.6g%s%s\n", c.passed ? "ok" : "FAIL", c.name.c_str(), c.value, c.relation.c_str(),
                c.threshold, c.detail.empty() ? "" : "  ", c.detail.c_str());
  for (const auto& w : s.warnings) std::printf("    warning: %s\n", w.c_str());
}

}  // namespace

int main() {
  LieformsOptions lie;
  lie.seed = 7;
  lie.runtime_limit = 30.0;
  const std::vector<std::function<SuiteResult()>> criteria = {
      [&] { return lieforms_suite(lie); },
      [] { return gamma_suite(7); },
      [] { return quadrupole_suite(); },
      [] { return counting_suite(2000); },
      [] { return heat_suite(2000); },
      [] { return birman_schwinger_suite(2000); },
      [] { return gauge_suite(); },
      [] { return bounds_suite(); },
      [] { return sphere_comparison_suite(3.0, false); },
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    try {
      const auto s = criteria[i]();
      print_suite(n, s);
      if (!s.passed()) ++failed;
    } catch (const std::exception& e) {
      std::printf("criterion %d FAIL  [error: %s]\n", n, e.what());
      ++failed;
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
