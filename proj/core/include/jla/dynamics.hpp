#pragma once

#include "jla/model.hpp"
#include "jla/types.hpp"

namespace jla {

/// Dynamics terms of M(q) qdd + C(q, qd) qd + G(q) = tau at one state.
struct DynamicsTerms {
  Mat M;  // inertia, kg*m^2
  Mat C;  // Coriolis/centrifugal, built from Christoffel symbols
  Vec G;  // gravity torque, N*m
};

/// Inertia matrix M(q). Symmetric positive definite for any q.
/// n = 2 uses the standard two-link closed form; other n use the generic
/// per-link assembly.
Mat mass_matrix(const ManipulatorModel& model, const Vec& q);

/// Coriolis matrix from Christoffel symbols of the first kind of M, so that
/// Mdot - 2C is skew-symmetric and C*qd is the Coriolis/centrifugal torque.
Mat coriolis_matrix(const ManipulatorModel& model, const Vec& q,
                    const Vec& q_dot);

/// Gravity torque G(q) = d(potential energy)/dq.
Vec gravity_vector(const ManipulatorModel& model, const Vec& q);

/// M, C, G in one call.
DynamicsTerms dynamics_at(const ManipulatorModel& model, const Vec& q,
                          const Vec& q_dot);

/// Planar end-effector position (x, y) in the base frame.
Vec2 ee_position(const ManipulatorModel& model, const Vec& q);

/// Planar end-effector position Jacobian d(x,y)/dq, 2 x n. Maps a Cartesian
/// force F at the end effector to joint torques as tau_ext = J_ee^T F.
Mat ee_jacobian(const ManipulatorModel& model, const Vec& q);

double potential_energy(const ManipulatorModel& model, const Vec& q);
double kinetic_energy(const ManipulatorModel& model, const Vec& q,
                      const Vec& q_dot);

/// Generic per-link assembly path, valid for any n. For n = 2 these agree
/// with the closed forms to ~1e-12; the agreement is asserted in the test
/// suite and in `jla selftest`.
Mat mass_matrix_generic(const ManipulatorModel& model, const Vec& q);
Mat coriolis_matrix_generic(const ManipulatorModel& model, const Vec& q,
                            const Vec& q_dot);
Vec gravity_vector_generic(const ManipulatorModel& model, const Vec& q);

}  // namespace jla
