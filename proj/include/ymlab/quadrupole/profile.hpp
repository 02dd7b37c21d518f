#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <string>

#include "ymlab/errors.hpp"

namespace ymlab::quadrupole {

inline constexpr double third_pi = std::numbers::pi / 3.0;
inline constexpr double default_delta = std::numbers::pi / 24.0;
inline constexpr double ramp_slope = 4.8;

// (a1, a2, a3) on the cell centres theta_j = (j + 1/2) h of (0, pi/3).
struct Profile {
  Eigen::VectorXd theta;
  Eigen::VectorXd a1, a2, a3;
  long boundary_target_l = 3;
  double delta = default_delta;

  std::size_t size() const { return static_cast<std::size_t>(theta.size()); }
  double h() const { return third_pi / static_cast<double>(size()); }

  // Stacked unknowns [a1; a2; a3].
  Eigen::VectorXd stacked() const {
    Eigen::VectorXd x(3 * theta.size());
    x << a1, a2, a3;
    return x;
  }

  void assign(const Eigen::VectorXd& x) {
    const Eigen::Index n = theta.size();
    if (x.size() != 3 * n) throw dimension_error("profile: stacked vector length");
    a1 = x.segment(0, n);
    a2 = x.segment(n, n);
    a3 = x.segment(2 * n, n);
  }

  const Eigen::VectorXd& component(int i) const { return i == 0 ? a1 : (i == 1 ? a2 : a3); }
};

inline Profile empty_profile(std::size_t grid_size, long l, double delta) {
  if (grid_size < 8) throw parameter_error("profile: grid must have at least 8 nodes");
  Profile p;
  const double h = third_pi / static_cast<double>(grid_size);
  p.theta.resize(static_cast<Eigen::Index>(grid_size));
  for (std::size_t j = 0; j < grid_size; ++j) p.theta(static_cast<Eigen::Index>(j)) = (static_cast<double>(j) + 0.5) * h;
  p.a1 = p.a2 = p.a3 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid_size));
  p.boundary_target_l = l;
  p.delta = delta;
  return p;
}

// Monotone ramp 0 -> 3 on [delta, pi/3 - delta]: slope ramp_slope in the
// middle, quintic smoothstep shoulders, flat outside.
class Ramp {
 public:
  explicit Ramp(double delta) : delta_(delta) {
    span_ = third_pi - 2.0 * delta;
    width_ = span_ - 3.0 / ramp_slope;
    if (!(delta > 0.0)) throw parameter_error("test profile: delta must be positive");
    if (!(width_ > 0.0))
      throw parameter_error("test profile: delta too large to fit both plateaus with slope at most 5");
  }

  double value(double theta) const {
    const double x = theta - delta_;
    if (x <= 0.0) return 0.0;
    if (x >= span_) return 3.0;
    if (x < width_) return ramp_slope * width_ * shoulder_integral(x / width_);
    if (x <= span_ - width_) return ramp_slope * (0.5 * width_ + x - width_);
    return 3.0 - ramp_slope * width_ * shoulder_integral((span_ - x) / width_);
  }

  double derivative(double theta) const {
    const double x = theta - delta_;
    if (x <= 0.0 || x >= span_) return 0.0;
    if (x < width_) return ramp_slope * smoothstep(x / width_);
    if (x <= span_ - width_) return ramp_slope;
    return ramp_slope * smoothstep((span_ - x) / width_);
  }

  double shoulder_width() const { return width_; }

 private:
  static double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
  static double shoulder_integral(double u) { return u * u * u * u * (2.5 + u * (-3.0 + u)); }

  double delta_, span_, width_;
};

// a1 = 0, a2 the ramp, a3 = (l/3) a2(pi/3 - theta).
inline Profile build_test_profile(long l, double delta = default_delta, std::size_t grid_size = 1024) {
  if (l <= 0) throw parameter_error("test profile: l must be positive");
  if (!(delta > 0.0 && delta <= std::numbers::pi / 12.0)) throw parameter_error("test profile: delta must lie in (0, pi/12]");
  if (grid_size < 64) throw parameter_error("test profile: grid_size must be at least 64");
  const Ramp ramp(delta);
  Profile p = empty_profile(grid_size, l, delta);
  const double c = static_cast<double>(l) / 3.0;
  for (Eigen::Index j = 0; j < p.theta.size(); ++j) {
    p.a2(j) = ramp.value(p.theta(j));
    p.a3(j) = c * ramp.value(third_pi - p.theta(j));
  }
  return p;
}

inline void write_profile(std::ostream& os, const Profile& p) {
  os << "# l " << p.boundary_target_l << " delta " << std::setprecision(17) << p.delta << "\n";
  os << "# theta a1 a2 a3\n";
  for (Eigen::Index j = 0; j < p.theta.size(); ++j)
    os << p.theta(j) << ' ' << p.a1(j) << ' ' << p.a2(j) << ' ' << p.a3(j) << '\n';
}

inline Profile read_profile(std::istream& is) {
  std::string line;
  long l = 3;
  double delta = default_delta;
  std::vector<std::array<double, 4>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      while (ss >> key) {
        if (key == "l") ss >> l;
        else if (key == "delta") ss >> delta;
      }
      continue;
    }
    std::istringstream ss(line);
    std::array<double, 4> r{};
    if (!(ss >> r[0] >> r[1] >> r[2] >> r[3])) throw parameter_error("profile: malformed row: " + line);
    rows.push_back(r);
  }
  if (rows.size() < 8) throw parameter_error("profile: too few rows");
  Profile p = empty_profile(rows.size(), l, delta);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const auto k = static_cast<Eigen::Index>(j);
    if (std::abs(rows[j][0] - p.theta(k)) > 1e-9)
      throw parameter_error("profile: nodes must be the cell centres (j + 1/2) pi / (3 N)");
    p.a1(k) = rows[j][1];
    p.a2(k) = rows[j][2];
    p.a3(k) = rows[j][3];
  }
  if (!p.a1.allFinite() || !p.a2.allFinite() || !p.a3.allFinite()) throw parameter_error("profile: non-finite values");
  return p;
}

}  // namespace ymlab::quadrupole
