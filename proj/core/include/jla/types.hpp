#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace jla {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;

/// A joint position or reference lies on or outside the feasible box, or
/// too close to a bound for the tanh parametrization to represent it.
struct OutOfFeasibleSpace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A simulated state turned non-finite (unstable closed loop or too-large
/// step size).
struct NumericalDivergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An analysis routine was handed a trace with no records.
struct EmptyTrace : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Experiment configuration failed to parse or validate. The message
/// carries the offending key and, when available, the line number.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

inline Vec deg_to_rad(const Vec& deg) { return deg * (kPi / 180.0); }
inline Vec rad_to_deg(const Vec& rad) { return rad * (180.0 / kPi); }

}  // namespace jla
