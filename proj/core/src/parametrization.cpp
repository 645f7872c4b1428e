#include "jla/parametrization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jla {
namespace {

// Largest tanh value q_of_xi will use. Keeps outputs strictly interior
// (margin >= ~1e-13 * delta) even where std::tanh rounds to +-1, which it
// does from |xi| ~ 19.1 on.
constexpr double kTanhGuard = 1.0 - 1e-13;

// Relative interior band xi_of_q rejects: margins below kEdgeBand * delta_i
// are indistinguishable from the bound at double precision (atanh of the
// normalized coordinate is no longer representable there).
constexpr double kEdgeBand = 1e-13;

// sech^2 via exponentials: stays strictly positive out to |x| ~ 372 where
// the direct 1 - tanh^2 underflows to zero near |x| ~ 19.
double sech2(double x) {
  const double e = std::exp(-std::abs(x));
  const double s = 2.0 * e / (1.0 + e * e);
  return s * s;
}

[[noreturn]] void throw_out_of_space(int joint, double q, double lo,
                                     double hi) {
  std::ostringstream msg;
  msg << "joint " << joint << ": position " << q
      << " rad is outside the open feasible interval (" << lo << ", " << hi
      << ")";
  throw OutOfFeasibleSpace(msg.str());
}

}  // namespace

Vec q_of_xi(const JointLimits& limits, const Vec& xi) {
  const Vec& d = limits.half_range();
  Vec q(xi.size());
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    const double t =
        std::clamp(std::tanh(xi[i]), -kTanhGuard, kTanhGuard);
    q[i] = limits.center()[i] + d[i] * t;
  }
  return q;
}

Vec xi_of_q(const JointLimits& limits, const Vec& q, double xi_sat) {
  const Vec& d = limits.half_range();
  Vec xi(q.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double lo = limits.q_min()[i], hi = limits.q_max()[i];
    const double band = kEdgeBand * d[i];
    if (!(q[i] - lo > band) || !(hi - q[i] > band)) {
      throw_out_of_space(static_cast<int>(i), q[i], lo, hi);
    }
    const double u = (q[i] - limits.center()[i]) / d[i];
    xi[i] = std::clamp(std::atanh(u), -xi_sat, xi_sat);
  }
  return xi;
}

std::optional<Vec> try_xi_of_q(const JointLimits& limits, const Vec& q,
                               double xi_sat) {
  const Vec& d = limits.half_range();
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double band = kEdgeBand * d[i];
    if (!(q[i] - limits.q_min()[i] > band) ||
        !(limits.q_max()[i] - q[i] > band)) {
      return std::nullopt;
    }
  }
  return xi_of_q(limits, q, xi_sat);
}

Vec jacobian_diagonal(const JointLimits& limits, const Vec& xi) {
  Vec j(xi.size());
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    j[i] = limits.half_range()[i] * sech2(xi[i]);
  }
  return j;
}

Mat jacobian(const JointLimits& limits, const Vec& xi) {
  return jacobian_diagonal(limits, xi).asDiagonal();
}

Vec jacobian_dot_diagonal(const JointLimits& limits, const Vec& xi,
                          const Vec& xi_dot) {
  Vec j(xi.size());
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    j[i] = -2.0 * limits.half_range()[i] * std::tanh(xi[i]) * sech2(xi[i]) *
           xi_dot[i];
  }
  return j;
}

Mat jacobian_dot(const JointLimits& limits, const Vec& xi, const Vec& xi_dot) {
  return jacobian_dot_diagonal(limits, xi, xi_dot).asDiagonal();
}

XiDynamicsTerms to_xi_dynamics(const DynamicsTerms& terms,
                               const JointLimits& limits,
                               const XiState& state) {
  const Vec j = jacobian_diagonal(limits, state.xi);
  const Vec jdot = jacobian_dot_diagonal(limits, state.xi, state.xi_dot);
  XiDynamicsTerms out;
  // J diagonal: J^T A J scales rows and columns elementwise.
  out.M_xi = j.asDiagonal() * terms.M * j.asDiagonal();
  out.C_xi = j.asDiagonal() *
             (terms.M * jdot.asDiagonal() + terms.C * j.asDiagonal());
  out.G_xi = j.cwiseProduct(terms.G);
  return out;
}

Vec tau_to_xi(const JointLimits& limits, const Vec& xi, const Vec& tau) {
  return jacobian_diagonal(limits, xi).cwiseProduct(tau);
}

}  // namespace jla
