#pragma once

#include <optional>

#include "jla/dynamics.hpp"
#include "jla/limits.hpp"
#include "jla/parametrization.hpp"
#include "jla/types.hpp"

namespace jla {

/// Proportional/derivative gain pair. For the classical law these live in
/// q-space (N*m/rad, N*m*s/rad); for the parametrized laws they act on xi.
/// Shipped configurations use diagonal matrices.
struct ControlGains {
  Mat Kp;
  Mat Kd;

  static ControlGains diagonal(const Vec& kp, const Vec& kd);

  /// Throws std::invalid_argument unless Kp is symmetric positive definite
  /// and Kd symmetric positive semidefinite (symmetry within 1e-12).
  void validate() const;
};

/// Reference triple in xi-coordinates, derived from a feasible q-space
/// reference via the chain rule:
///   xi_d     = atanh(delta^-1 (q_d - q_0))
///   xi_d_dot = J(xi_d)^-1 q_d_dot
///   xi_d_ddot= J(xi_d)^-1 (q_d_ddot - Jdot(xi_d, xi_d_dot) xi_d_dot)
struct XiReference {
  Vec xi_d;
  Vec xi_d_dot;
  Vec xi_d_ddot;
};

XiReference xi_reference(const JointLimits& limits, const Vec& q_d,
                         const Vec& q_d_dot, const Vec& q_d_ddot,
                         double xi_sat = kDefaultXiSaturation);

/// One sample of the desired trajectory. `xi` is present whenever the
/// reference is feasible with respect to known limits; the classical law
/// ignores it.
struct ReferenceSample {
  Vec q_d;       // rad
  Vec q_d_dot;   // rad/s
  Vec q_d_ddot;  // rad/s^2
  std::optional<XiReference> xi;
};

/// Classical passivity-based tracking law:
///   tau = M qdd_d + C qd_d + G - Kp (q - q_d) - Kd (qd - qd_d).
/// `terms.C` is the Coriolis matrix the feedforward multiplies into qd_d;
/// pass C(q, qd_d) instead of C(q, qd) to reproduce the approximate
/// feedforward variant.
Vec classical_law(const DynamicsTerms& terms, const JointState& state,
                  const ReferenceSample& ref, const ControlGains& gains);

/// Parametrized tracking law, evaluated directly as joint torques:
///   tau = M J xidd_d + (M Jdot + C J) xid_d + G
///         - J^-1 Kp xi_tilde - J^-1 Kd xi_tilde_dot
/// with xi = xi_of_q(q), xi_dot = J^-1 qd. Throws OutOfFeasibleSpace when
/// the state or reference is on/outside the box.
Vec parametrized_tracking_law(const DynamicsTerms& terms,
                              const JointState& state,
                              const ReferenceSample& ref,
                              const JointLimits& limits,
                              const ControlGains& gains,
                              double xi_sat = kDefaultXiSaturation);

/// Set-point law: tau = G(q) - Kp' xi_tilde - Kd' qd. The classical
/// set-point law with the position term -Kp (q - q_d) replaced by the
/// parametrized term. Validated empirically; no stability proof backs it.
Vec setpoint_law(const DynamicsTerms& terms, const JointState& state,
                 const Vec& q_d, const JointLimits& limits,
                 const ControlGains& gains,
                 double xi_sat = kDefaultXiSaturation);

/// Gain transform Kp = J(xi) Kp', Kd = J(xi) Kd' J(xi). With these gains,
/// the parametrized tracking law at a set point reduces to setpoint_law's
/// feedback exactly.
ControlGains gain_transform(const JointLimits& limits, const Vec& xi,
                            const Mat& Kp_prime, const Mat& Kd_prime);

enum class ControlLaw { none, classical, proposed, setpoint };

/// Full controller configuration for closed-loop use.
struct ControllerSpec {
  ControlLaw law = ControlLaw::proposed;
  ControlGains gains;
  double tau_max = 1000.0;  // N*m, componentwise output clamp
  double xi_sat = kDefaultXiSaturation;
  bool approx_coriolis_feedforward = false;
};

struct ControlOutput {
  Vec tau_raw;  // law output before the clamp
  Vec tau;      // clamped to +-tau_max
  bool saturated = false;
};

/// Evaluates the configured law and applies the torque clamp. Builds the
/// approximate Coriolis feedforward terms when the spec asks for them.
ControlOutput evaluate_control(const ManipulatorModel& model,
                               const JointLimits& limits,
                               const ControllerSpec& spec,
                               const JointState& state,
                               const ReferenceSample& ref);

}  // namespace jla
