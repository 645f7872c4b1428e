#pragma once

#include <optional>

#include "jla/dynamics.hpp"
#include "jla/limits.hpp"
#include "jla/types.hpp"

namespace jla {

/// Exogenous coordinates: q = delta * tanh(xi) + q_0 maps all of R^n onto
/// the open feasible box.
struct XiState {
  Vec xi;      // dimensionless
  Vec xi_dot;  // 1/s
};

/// Dynamics terms transformed to xi-coordinates:
///   M_xi = J^T M J,  C_xi = J^T (M Jdot + C J),  G_xi = J^T G.
struct XiDynamicsTerms {
  Mat M_xi;
  Mat C_xi;
  Vec G_xi;
};

/// Componentwise clamp applied to xi_of_q outputs. tanh(100) == 1.0 at
/// double precision, so the default only prevents overflow in downstream
/// exp-based expressions; it never binds on values atanh can produce.
constexpr double kDefaultXiSaturation = 100.0;

/// q(xi) = delta * tanh(xi) + q_0. Strictly inside the box for every finite
/// xi: the tanh factor is guarded at 1 - 1e-13, so even where tanh rounds
/// to +-1 the output keeps a ~1e-13*delta interior margin.
Vec q_of_xi(const JointLimits& limits, const Vec& xi);

/// Inverse map xi = atanh(delta^-1 (q - q_0)), clamped to +-xi_sat.
/// Throws OutOfFeasibleSpace when any component is on/outside its bound or
/// within 1e-13*delta_i of it (the band where atanh is no longer
/// representable; see q_of_xi's guard).
Vec xi_of_q(const JointLimits& limits, const Vec& q,
            double xi_sat = kDefaultXiSaturation);

/// Non-throwing variant for trace logging of states that may be infeasible.
std::optional<Vec> try_xi_of_q(const JointLimits& limits, const Vec& q,
                               double xi_sat = kDefaultXiSaturation);

/// Diagonal entries J_i = delta_i * sech^2(xi_i) of the parametrization
/// Jacobian dq/dxi. Computed via exponentials so the entries stay strictly
/// positive out to |xi| ~ 370 instead of underflowing at |xi| ~ 19.
Vec jacobian_diagonal(const JointLimits& limits, const Vec& xi);

/// The n x n diagonal Jacobian J(xi); det(J) != 0 for all finite xi in the
/// saturated range.
Mat jacobian(const JointLimits& limits, const Vec& xi);

/// Diagonal entries of Jdot: -2 delta_i tanh(xi_i) sech^2(xi_i) xi_dot_i.
Vec jacobian_dot_diagonal(const JointLimits& limits, const Vec& xi,
                          const Vec& xi_dot);

Mat jacobian_dot(const JointLimits& limits, const Vec& xi, const Vec& xi_dot);

/// Transform dynamics terms to xi-coordinates. `terms` must be evaluated at
/// q = q_of_xi(xi), q_dot = J(xi) * xi_dot.
XiDynamicsTerms to_xi_dynamics(const DynamicsTerms& terms,
                               const JointLimits& limits, const XiState& state);

/// tau_xi = J^T tau.
Vec tau_to_xi(const JointLimits& limits, const Vec& xi, const Vec& tau);

}  // namespace jla
