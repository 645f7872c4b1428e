#pragma once

#include <cstdint>
#include <vector>

#include "jla/control.hpp"
#include "jla/limits.hpp"
#include "jla/model.hpp"
#include "jla/trace.hpp"
#include "jla/types.hpp"

namespace jla {

/// Reference trajectory source. `constant` holds q_d fixed; `sinusoid`
/// tracks q_d(t) = (delta/rate_divisor) sin(omega t + rho) + q_0, which
/// stays strictly inside the box whenever rate_divisor > 1.
struct ReferenceGenerator {
  enum class Kind { constant, sinusoid };
  Kind kind = Kind::constant;

  Vec q_d;  // constant reference, rad

  double rate_divisor = 1.1;  // sinusoid amplitude divisor r
  Vec omega;                  // rad/s
  Vec rho;                    // phase, rad
};

/// Samples the generator at time t, with the q-space triple differentiated
/// analytically and the xi-space triple derived via the chain rule.
/// Throws OutOfFeasibleSpace if the reference lies outside the box.
ReferenceSample reference_sample(const ReferenceGenerator& gen, double t,
                                 const JointLimits& limits,
                                 double xi_sat = kDefaultXiSaturation);

/// External Cartesian force applied at the end effector: zero until
/// start_time, then growing at magnitude_rate and held at cap.
struct ExternalForceProfile {
  enum class Kind { none, ramp };
  Kind kind = Kind::none;

  Vec2 direction{0.0, 1.0};   // unit vector, base frame
  double magnitude_rate = 0;  // N/s
  double start_time = 0;      // s
  double cap = 0;             // N

  Vec2 force_at(double t) const;
};

enum class IntegratorKind { rk4, semi_implicit_euler };

/// Everything a closed-loop run needs.
struct SimConfig {
  ManipulatorModel model;
  JointLimits limits{Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)};
  ControllerSpec controller;
  ReferenceGenerator reference;
  ExternalForceProfile force;
  Vec q0;      // rad
  Vec q0_dot;  // rad/s
  double dt = 1e-3;     // s
  double duration = 20.0;  // s
  IntegratorKind integrator = IntegratorKind::rk4;

  /// Throws std::invalid_argument / OutOfFeasibleSpace on bad shapes,
  /// dt <= 0, duration < 0, or an initial state outside the box when a
  /// xi-space law is selected.
  void validate() const;
};

/// Advances one step of M qdd + C qd + G + B qd = tau + J_ee^T F with the
/// configured integrator and control law. Pure in its inputs.
/// Throws NumericalDivergence on a non-finite result and OutOfFeasibleSpace
/// when a xi-space law meets a state on/outside the box.
JointState step(const SimConfig& config, const JointState& state, double t);

/// Runs the full closed loop, logging one record per step. Early
/// termination (divergence, boundary contact under a xi-space law) is
/// recorded in the trace status rather than thrown, with the offending
/// time in status_time. Configuration errors still throw before stepping.
SimTrace run(const SimConfig& config);

/// Outcome of the ramped-force robustness experiment for one control law.
struct BreakingForceResult {
  double force = 0;   // smallest cap driving some margin to zero, N
  bool broke = false; // false: no violation up to the search cap (>= force)
  int runs = 0;       // probe runs spent by the bisection
};

/// Bisects over capped ramp runs for the smallest external-force magnitude
/// at which any joint margin reaches zero under config's law. The search
/// interval is [0, config.force.cap]; `tolerance` is the bracket width at
/// which the bisection stops.
BreakingForceResult force_ramp_experiment(const SimConfig& config,
                                          double tolerance = 1.0);

/// Deterministic randomized-scenario generator for the invariance and
/// convergence sweeps: random feasible initial states and references
/// (constant or gentle sinusoid) inside a fraction of the box, derived
/// from `seed` only.
struct FuzzSpec {
  int runs = 200;
  std::uint64_t seed = 12345;
  double duration = 20.0;
  double ic_box_fraction = 0.7;   // |tanh(xi0)| bound for initial q
  double ref_box_fraction = 0.7;  // same for references
  double sinusoid_fraction = 0.3; // share of sinusoidal references
  double max_initial_speed = 0.5; // rad/s, per joint
};

std::vector<SimConfig> make_fuzz_configs(const SimConfig& base,
                                         const FuzzSpec& spec);

}  // namespace jla
