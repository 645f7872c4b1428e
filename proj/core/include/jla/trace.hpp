#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "jla/limits.hpp"
#include "jla/types.hpp"

namespace jla {

/// One time sample of a closed-loop run. xi-space quantities and V are NaN
/// where undefined (state outside the box, or a law the Lyapunov function
/// does not cover).
struct TraceRecord {
  double t = 0;
  Vec q;
  Vec q_dot;
  Vec q_d;            // reference position at t
  Vec xi;
  Vec xi_tilde;       // xi - xi_d
  Vec xi_tilde_dot;   // J^-1 qd - xi_d_dot
  Vec tau_raw;        // controller output before the clamp
  Vec tau;            // applied torque
  Vec2 f_ext{0, 0};   // external Cartesian force at the end effector, N
  double V = 0;
  double V_dot_analytic = 0;  // -xi_tilde_dot^T Kd xi_tilde_dot
  double V_dot_numeric = 0;   // central difference over the trace
  Vec margin;         // per-joint distance to the nearer bound
  bool saturated = false;
};

enum class RunStatus {
  completed,       // ran to the configured duration
  diverged,        // a state component turned non-finite
  hit_boundary,    // a xi-space law met a state on/outside the box
};

const char* to_string(RunStatus s);

/// Time-indexed log of a run. Records carry strictly increasing t; a clean
/// run has round(duration/dt) + 1 of them.
struct SimTrace {
  std::vector<TraceRecord> records;
  RunStatus status = RunStatus::completed;
  double status_time = 0;  // time of early termination, if any
  int n_joints = 0;
  Vec limits_min, limits_max;  // echoed into the CSV header for plotting

  bool empty() const { return records.empty(); }
};

/// Fixed CSV layout (radians; see the header comment lines the writer
/// emits). Columns, for n joints:
///   t, q_0..q_{n-1}, qdot_0.., qd_0.., xi_0.., xitilde_0.., xitildedot_0..,
///   tau_raw_0.., tau_0.., fext_x, fext_y, V, Vdot_analytic, Vdot_numeric,
///   margin_0.., saturated
void write_trace_csv(const SimTrace& trace, std::ostream& out);
void write_trace_csv(const SimTrace& trace, const std::string& path);

SimTrace read_trace_csv(std::istream& in);
SimTrace read_trace_csv(const std::string& path);

}  // namespace jla
