#pragma once

#include <string>
#include <vector>

#include "jla/trace.hpp"

namespace jla {

/// Renders the standard figure set for a trace as standalone SVG files:
///   <stem>_positions.svg  joint angles (deg) with limit lines + reference
///   <stem>_torques.svg    applied torque per joint, raw torque dashed
///   <stem>_force.svg      external force magnitude
///   <stem>_lyapunov.svg   V and numeric V_dot (parametrized-law runs)
/// Output is a pure function of the trace contents; re-rendering a saved
/// CSV reproduces the files byte for byte.
/// Returns the list of files written.
std::vector<std::string> render_trace_plots(const SimTrace& trace,
                                            const std::string& stem);

}  // namespace jla
