#pragma once

#include <string>

#include "jla/control.hpp"
#include "jla/trace.hpp"
#include "jla/types.hpp"

namespace jla {

/// Energy-like certificate V = 1/2 xtd^T M_xi xtd + 1/2 xt^T Kp xt for the
/// parametrized tracking law, with its analytic and trace-differenced
/// decrease rates.
struct LyapunovSample {
  double V = 0;
  double V_dot_analytic = 0;  // -xtd^T Kd xtd, nonpositive by construction
  double V_dot_numeric = 0;   // NaN when the record has no neighbors
};

/// Evaluates V and the analytic decrease rate at one record of a
/// parametrized-law run. M_xi is rebuilt from the record's state.
LyapunovSample lyapunov(const TraceRecord& record, const ControlGains& gains,
                        const JointLimits& limits,
                        const ManipulatorModel& model);

/// Numeric radial-unboundedness probe of V over rays in (xi_tilde,
/// xi_tilde_dot) space, out to norm 1e3. Checks the exact lower bound
/// V(s u) >= s^2/2 * u_xi^T Kp u_xi on every ray (the position term is what
/// keeps V unbounded while M_xi vanishes), full monotonicity plus 1e6x
/// growth on pure position/velocity rays, and that every ray's endpoint
/// exceeds 1e6 x the Kp floor at the unit point.
struct RadialProbeReport {
  int rays = 0;
  int floor_violations = 0;      // V below the Kp-term lower bound
  int monotone_violations = 0;   // on pure coordinate rays only
  double min_growth_factor = 0;  // min over pure rays of V(end)/V(unit)
  double min_end_value = 0;      // min over all rays of V at norm 1e3
  bool ok = false;
};

RadialProbeReport radial_unboundedness_probe(const ControlGains& gains,
                                             const JointLimits& limits,
                                             const ManipulatorModel& model,
                                             int ray_count,
                                             std::uint64_t seed = 7);

/// Aggregate statistics of one run.
struct RunReport {
  Vec min_margin;                 // per joint, over the whole trace
  double min_margin_overall = 0;
  double final_q_err = 0;         // |q - q_d| at the last record
  double final_xi_err = 0;        // |xi_tilde|, NaN for q-space laws
  double final_xi_dot_err = 0;    // |xi_tilde_dot|
  double max_abs_tau = 0;         // applied torque
  double max_abs_tau_raw = 0;     // before the clamp
  bool any_saturated = false;
  bool violation = false;         // some margin <= 0 or boundary contact
  RunStatus status = RunStatus::completed;
  int lyapunov_violations = 0;     // records past the settling window where
                                   // V_dot_numeric > tol
  double worst_lyapunov_violation = 0;

  std::string to_text() const;
  static std::string csv_header();
  std::string to_csv_row(const std::string& label) const;
};

/// Builds the report. Lyapunov monotonicity is judged against
/// tol = 1e-6 * max V, skipping the first `settle_steps` records to absorb
/// integrator startup error. Throws EmptyTrace on an empty trace.
RunReport report(const SimTrace& trace, const JointLimits& limits,
                 int settle_steps = 10);

}  // namespace jla
