#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ymlab/errors.hpp"
#include "ymlab/numerics/gauss_legendre.hpp"

namespace ymlab::spectral {

inline constexpr double pi = std::numbers::pi;
inline constexpr double s4_volume = 8.0 * pi * pi / 3.0;
inline constexpr double s4_yamabe_squared = 384.0 * pi * pi;
inline const double s4_yamabe = std::sqrt(s4_yamabe_squared);
inline constexpr double s4_scalar_curvature = 12.0;
inline constexpr double e_squared = std::numbers::e * std::numbers::e;

// Integral over the unit S^4 of a radial function: 2 pi^2 int_0^pi f sin^3.
template <class F>
double integrate_s4(F&& f) {
  return 2.0 * pi * pi *
         numerics::integrate([&](double th) { double s = std::sin(th); return f(th) * s * s * s; }, 0.0, pi, 256, 16);
}

// Nonnegative radial potential V(theta) on the unit S^4 and its shift
// V_eps = V + eps.
class RadialPotential {
 public:
  RadialPotential(std::string label, std::function<double(double)> v, double epsilon = -1.0)
      : label_(std::move(label)), v_(std::move(v)) {
    double vmax = 0.0;
    const std::size_t probe = 4096;
    for (std::size_t j = 0; j <= probe; ++j) {
      const double x = v_(pi * static_cast<double>(j) / static_cast<double>(probe));
      if (!std::isfinite(x)) throw parameter_error(label_ + ": potential is not finite");
      if (x < 0.0) throw parameter_error(label_ + ": potential must be nonnegative");
      vmax = std::max(vmax, x);
    }
    sampled_max_ = vmax;
    epsilon_ = epsilon < 0.0 ? default_epsilon(vmax) : epsilon;
    if (!(epsilon_ > 0.0)) throw parameter_error(label_ + ": epsilon must be positive");
  }

  static double default_epsilon(double vmax) { return 1e-6 * std::max(1.0, vmax); }

  const std::string& label() const { return label_; }
  double epsilon() const { return epsilon_; }
  double operator()(double theta) const { return v_(theta); }
  double shifted(double theta) const { return v_(theta) + epsilon_; }
  double sampled_max() const { return sampled_max_; }

  RadialPotential with_epsilon(double eps) const { return RadialPotential(label_, v_, eps); }
  RadialPotential scaled(double s) const {
    auto v = v_;
    return RadialPotential(label_ + " x" + std::to_string(s), [v, s](double th) { return s * v(th); }, s * epsilon_);
  }

  // ||V||^2 over S^4, and the same for V_eps.
  double l2_squared() const { return integrate_s4([&](double th) { double x = v_(th); return x * x; }); }
  double l2_squared_shifted() const {
    return integrate_s4([&](double th) { double x = v_(th) + epsilon_; return x * x; });
  }

 private:
  std::string label_;
  std::function<double(double)> v_;
  double epsilon_ = 0.0;
  double sampled_max_ = 0.0;
};

inline RadialPotential constant_potential(double c, double epsilon = -1.0) {
  if (c < 0.0) throw parameter_error("constant potential must be nonnegative");
  return RadialPotential("constant " + std::to_string(c), [c](double) { return c; }, epsilon);
}

// A exp(-(1 - cos theta) / w^2), concentrated at the north pole.
inline RadialPotential gaussian_bump(double amplitude, double width, double epsilon = -1.0) {
  if (amplitude < 0.0 || !(width > 0.0)) throw parameter_error("gaussian-bump: need amplitude >= 0, width > 0");
  return RadialPotential(
      "gaussian-bump", [=](double th) { return amplitude * std::exp(-(1.0 - std::cos(th)) / (width * width)); },
      epsilon);
}

// Bumps of equal size at both poles.
inline RadialPotential double_bump(double amplitude, double width, double epsilon = -1.0) {
  if (amplitude < 0.0 || !(width > 0.0)) throw parameter_error("double-bump: need amplitude >= 0, width > 0");
  return RadialPotential("double-bump",
                         [=](double th) {
                           const double w2 = width * width;
                           return amplitude * (std::exp(-(1.0 - std::cos(th)) / w2) +
                                               std::exp(-(1.0 + std::cos(th)) / w2));
                         },
                         epsilon);
}

// Piecewise-linear interpolation of (theta, V) samples covering [0, pi].
inline RadialPotential tabulated_potential(std::vector<std::pair<double, double>> rows, double epsilon = -1.0) {
  if (rows.size() < 2) throw parameter_error("tabulated potential needs at least two rows");
  std::sort(rows.begin(), rows.end());
  if (rows.front().first > 1e-12 || rows.back().first < pi - 1e-12)
    throw parameter_error("tabulated potential must cover [0, pi]");
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].first > rows[i - 1].first)) throw parameter_error("tabulated potential: repeated theta");
  auto table = std::make_shared<std::vector<std::pair<double, double>>>(std::move(rows));
  return RadialPotential("table",
                         [table](double th) {
                           const auto& t = *table;
                           auto it = std::lower_bound(t.begin(), t.end(), std::make_pair(th, -1e300));
                           if (it == t.begin()) return t.front().second;
                           if (it == t.end()) return t.back().second;
                           const auto& [x1, y1] = *it;
                           const auto& [x0, y0] = *(it - 1);
                           return y0 + (y1 - y0) * (th - x0) / (x1 - x0);
                         },
                         epsilon);
}

// Two whitespace-separated columns; lines starting with '#' are skipped.
inline RadialPotential read_potential_file(const std::string& path, double epsilon = -1.0) {
  std::ifstream in(path);
  if (!in) throw parameter_error("cannot open potential file '" + path + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double th, v;
    if (!(ss >> th >> v)) throw parameter_error("malformed row in '" + path + "': " + line);
    rows.emplace_back(th, v);
  }
  return tabulated_potential(std::move(rows), epsilon);
}

}  // namespace ymlab::spectral
