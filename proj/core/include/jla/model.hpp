#pragma once

#include "jla/types.hpp"

namespace jla {

/// Physical parameters of an n-link planar serial manipulator with revolute
/// joints. Link i has mass link_mass[i], length link_length[i], center of
/// mass at com_offset[i] from its joint axis, and rotational inertia
/// link_inertia[i] about its own center of mass. Gravity acts along -y of
/// the base frame.
struct ManipulatorModel {
  Vec link_mass;      // kg
  Vec link_length;    // m
  Vec com_offset;     // m, 0 < com_offset[i] <= link_length[i]
  Vec link_inertia;   // kg*m^2 about each link's own COM
  double gravity = 9.81;  // m/s^2
  Vec viscous_friction;   // N*m*s/rad per joint; zero by default

  int n() const { return static_cast<int>(link_mass.size()); }

  /// Throws std::invalid_argument on nonpositive masses/lengths, negative
  /// inertias, com offsets outside (0, length], or mismatched array sizes.
  void validate() const;
};

/// The canonical 2-link plant used by the shipped experiment presets:
/// m = [2.0, 1.0] kg, l = [0.4, 0.4] m, COM at mid-link, uniform-rod
/// inertias m*l^2/12, g = 9.81.
ManipulatorModel desk_model();

struct JointState {
  Vec q;      // rad
  Vec q_dot;  // rad/s
};

}  // namespace jla
