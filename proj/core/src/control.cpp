#include "jla/control.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace jla {

ControlGains ControlGains::diagonal(const Vec& kp, const Vec& kd) {
  return ControlGains{Mat(kp.asDiagonal()), Mat(kd.asDiagonal())};
}

void ControlGains::validate() const {
  if (Kp.rows() != Kp.cols() || Kd.rows() != Kd.cols() ||
      Kp.rows() != Kd.rows()) {
    throw std::invalid_argument("gains: Kp and Kd must be square, same size");
  }
  const double scale_p = std::max(Kp.cwiseAbs().maxCoeff(), 1e-30);
  const double scale_d = std::max(Kd.cwiseAbs().maxCoeff(), 1e-30);
  if ((Kp - Kp.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale_p ||
      (Kd - Kd.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale_d) {
    throw std::invalid_argument("gains: Kp and Kd must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es_p(Kp);
  if (es_p.eigenvalues().minCoeff() <= 0) {
    throw std::invalid_argument("gains: Kp must be positive definite");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es_d(Kd);
  if (es_d.eigenvalues().minCoeff() < -1e-12 * scale_d) {
    throw std::invalid_argument("gains: Kd must be positive semidefinite");
  }
}

XiReference xi_reference(const JointLimits& limits, const Vec& q_d,
                         const Vec& q_d_dot, const Vec& q_d_ddot,
                         double xi_sat) {
  XiReference out;
  out.xi_d = xi_of_q(limits, q_d, xi_sat);
  const Vec j = jacobian_diagonal(limits, out.xi_d);
  out.xi_d_dot = q_d_dot.cwiseQuotient(j);
  const Vec jdot = jacobian_dot_diagonal(limits, out.xi_d, out.xi_d_dot);
  out.xi_d_ddot =
      (q_d_ddot - jdot.cwiseProduct(out.xi_d_dot)).cwiseQuotient(j);
  return out;
}

Vec classical_law(const DynamicsTerms& terms, const JointState& state,
                  const ReferenceSample& ref, const ControlGains& gains) {
  const Vec q_err = state.q - ref.q_d;
  const Vec qd_err = state.q_dot - ref.q_d_dot;
  return terms.M * ref.q_d_ddot + terms.C * ref.q_d_dot + terms.G -
         gains.Kp * q_err - gains.Kd * qd_err;
}

Vec parametrized_tracking_law(const DynamicsTerms& terms,
                              const JointState& state,
                              const ReferenceSample& ref,
                              const JointLimits& limits,
                              const ControlGains& gains, double xi_sat) {
  const XiReference xr =
      ref.xi ? *ref.xi
             : xi_reference(limits, ref.q_d, ref.q_d_dot, ref.q_d_ddot,
                            xi_sat);
  const Vec xi = xi_of_q(limits, state.q, xi_sat);
  const Vec j = jacobian_diagonal(limits, xi);
  const Vec xi_dot = state.q_dot.cwiseQuotient(j);
  const Vec jdot = jacobian_dot_diagonal(limits, xi, xi_dot);

  const Vec xi_err = xi - xr.xi_d;
  const Vec xi_dot_err = xi_dot - xr.xi_d_dot;

  return terms.M * j.cwiseProduct(xr.xi_d_ddot) +
         terms.M * jdot.cwiseProduct(xr.xi_d_dot) +
         terms.C * j.cwiseProduct(xr.xi_d_dot) + terms.G -
         (gains.Kp * xi_err).cwiseQuotient(j) -
         (gains.Kd * xi_dot_err).cwiseQuotient(j);
}

Vec setpoint_law(const DynamicsTerms& terms, const JointState& state,
                 const Vec& q_d, const JointLimits& limits,
                 const ControlGains& gains, double xi_sat) {
  const Vec xi = xi_of_q(limits, state.q, xi_sat);
  const Vec xi_d = xi_of_q(limits, q_d, xi_sat);
  return terms.G - gains.Kp * (xi - xi_d) - gains.Kd * state.q_dot;
}

ControlGains gain_transform(const JointLimits& limits, const Vec& xi,
                            const Mat& Kp_prime, const Mat& Kd_prime) {
  const Vec j = jacobian_diagonal(limits, xi);
  ControlGains out;
  out.Kp = j.asDiagonal() * Kp_prime;
  out.Kd = j.asDiagonal() * Kd_prime * j.asDiagonal();
  return out;
}

ControlOutput evaluate_control(const ManipulatorModel& model,
                               const JointLimits& limits,
                               const ControllerSpec& spec,
                               const JointState& state,
                               const ReferenceSample& ref) {
  const int n = model.n();
  ControlOutput out;

  switch (spec.law) {
    case ControlLaw::none:
      out.tau_raw = Vec::Zero(n);
      break;
    case ControlLaw::classical: {
      const Vec& c_vel =
          spec.approx_coriolis_feedforward ? ref.q_d_dot : state.q_dot;
      DynamicsTerms terms{mass_matrix(model, state.q),
                          coriolis_matrix(model, state.q, c_vel),
                          gravity_vector(model, state.q)};
      out.tau_raw = classical_law(terms, state, ref, spec.gains);
      break;
    }
    case ControlLaw::proposed: {
      Vec c_vel = state.q_dot;
      if (spec.approx_coriolis_feedforward) {
        const XiReference xr =
            ref.xi ? *ref.xi
                   : xi_reference(limits, ref.q_d, ref.q_d_dot, ref.q_d_ddot,
                                  spec.xi_sat);
        const Vec xi = xi_of_q(limits, state.q, spec.xi_sat);
        c_vel = jacobian_diagonal(limits, xi).cwiseProduct(xr.xi_d_dot);
      }
      DynamicsTerms terms{mass_matrix(model, state.q),
                          coriolis_matrix(model, state.q, c_vel),
                          gravity_vector(model, state.q)};
      out.tau_raw = parametrized_tracking_law(terms, state, ref, limits,
                                              spec.gains, spec.xi_sat);
      break;
    }
    case ControlLaw::setpoint: {
      DynamicsTerms terms;
      terms.G = gravity_vector(model, state.q);
      out.tau_raw =
          setpoint_law(terms, state, ref.q_d, limits, spec.gains, spec.xi_sat);
      break;
    }
  }

  out.tau = out.tau_raw.cwiseMax(-spec.tau_max).cwiseMin(spec.tau_max);
  out.saturated = (out.tau.array() != out.tau_raw.array()).any();
  return out;
}

}  // namespace jla
