#include "jla/selftest.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "jla/analysis.hpp"
#include "jla/control.hpp"
#include "jla/limits.hpp"
#include "jla/parametrization.hpp"

namespace jla {
namespace {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double u01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }
  Vec uniform_vec(int n, double lo, double hi) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
};

ManipulatorModel random_model(Rng& rng, int n) {
  ManipulatorModel m;
  m.link_mass = rng.uniform_vec(n, 0.3, 3.0);
  m.link_length = rng.uniform_vec(n, 0.2, 1.0);
  m.com_offset = Vec(n);
  m.link_inertia = Vec(n);
  for (int i = 0; i < n; ++i) {
    m.com_offset[i] = m.link_length[i] * rng.uniform(0.3, 1.0);
    m.link_inertia[i] =
        rng.uniform(0.0, m.link_mass[i] * m.link_length[i] * m.link_length[i] / 3.0);
  }
  m.gravity = 9.81;
  m.viscous_friction = Vec::Zero(n);
  return m;
}

JointLimits random_limits(Rng& rng, int n) {
  Vec center = rng.uniform_vec(n, -1.0, 1.0);
  Vec half = rng.uniform_vec(n, 0.3, 1.5);
  return JointLimits(center - half, center + half);
}

JointLimits desk_limits() {
  return JointLimits::from_degrees(Vec{{-30.0, -100.0}}, Vec{{85.0, 0.0}});
}

SelfTestResult make_result(const std::string& name, bool pass,
                           const std::string& detail) {
  return SelfTestResult{name, pass, detail};
}

std::string num(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

SelfTestResult check_mass_matrix_pd(Rng& rng, int samples) {
  double min_eig = std::numeric_limits<double>::infinity();
  double max_eig = 0;
  for (int s = 0; s < samples; ++s) {
    const int n = 2 + static_cast<int>(rng.u01() * 3.0);  // 2..4 links
    const ManipulatorModel m = random_model(rng, n);
    const Vec q = rng.uniform_vec(n, -kPi, kPi);
    Eigen::SelfAdjointEigenSolver<Mat> es(mass_matrix(m, q));
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    max_eig = std::max(max_eig, es.eigenvalues().maxCoeff());
  }
  return make_result("inertia_positive_definite",
                     min_eig > 0 && std::isfinite(max_eig),
                     "eigenvalue range [" + num(min_eig) + ", " +
                         num(max_eig) + "]");
}

SelfTestResult check_skew_q(
    Rng& rng, int samples,
    const std::function<Mat(const ManipulatorModel&, const Vec&, const Vec&)>&
        coriolis_fn) {
  const double h = 1e-5;
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const ManipulatorModel m = random_model(rng, 2);
    const Vec q = rng.uniform_vec(2, -kPi, kPi);
    const Vec qd = rng.uniform_vec(2, -2.0, 2.0);
    const Vec v = rng.uniform_vec(2, -1.0, 1.0);
    const Mat Mdot =
        (mass_matrix(m, q + h * qd) - mass_matrix(m, q - h * qd)) / (2.0 * h);
    const Mat C = coriolis_fn(m, q, qd);
    const double resid = std::abs(v.dot((Mdot - 2.0 * C) * v));
    const double bound = 1e-8 * v.squaredNorm() * qd.norm();
    worst = std::max(worst, resid - bound);
  }
  return make_result("passivity_skew_symmetry", worst <= 0,
                     "worst residual minus bound: " + num(worst));
}

SelfTestResult check_skew_xi(Rng& rng, int samples) {
  const double h = 1e-5;
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const ManipulatorModel m = random_model(rng, 2);
    const JointLimits lim = random_limits(rng, 2);
    const Vec xi = rng.uniform_vec(2, -2.0, 2.0);
    const Vec xid = rng.uniform_vec(2, -2.0, 2.0);
    const Vec v = rng.uniform_vec(2, -1.0, 1.0);

    auto m_xi_at = [&](const Vec& x, const Vec& xd) {
      const Vec q = q_of_xi(lim, x);
      const DynamicsTerms t =
          dynamics_at(m, q, jacobian_diagonal(lim, x).cwiseProduct(xd));
      return to_xi_dynamics(t, lim, XiState{x, xd});
    };
    const Mat Mdot =
        (m_xi_at(xi + h * xid, xid).M_xi - m_xi_at(xi - h * xid, xid).M_xi) /
        (2.0 * h);
    const Mat C_xi = m_xi_at(xi, xid).C_xi;
    const double resid = std::abs(v.dot((Mdot - 2.0 * C_xi) * v));
    const double bound = 1e-8 * v.squaredNorm() * xid.norm();
    worst = std::max(worst, resid - bound);
  }
  return make_result("xi_passivity_skew_symmetry", worst <= 0,
                     "worst residual minus bound: " + num(worst));
}

SelfTestResult check_m_xi_pd(Rng& rng, int samples) {
  double min_eig = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const ManipulatorModel m = random_model(rng, 2);
    const JointLimits lim = random_limits(rng, 2);
    const Vec xi = rng.uniform_vec(2, -3.0, 3.0);
    const Vec q = q_of_xi(lim, xi);
    const DynamicsTerms t = dynamics_at(m, q, Vec::Zero(2));
    const XiDynamicsTerms tx = to_xi_dynamics(t, lim, XiState{xi, Vec::Zero(2)});
    Eigen::SelfAdjointEigenSolver<Mat> es(tx.M_xi);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  return make_result("xi_inertia_positive_definite", min_eig > 0,
                     "min eigenvalue " + num(min_eig));
}

SelfTestResult check_round_trip(Rng& rng, int samples,
                                const JointLimits& lim) {
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const Vec xi = rng.uniform_vec(lim.n(), -15.0, 15.0);
    const Vec q = q_of_xi(lim, xi);
    const Vec q2 = q_of_xi(lim, xi_of_q(lim, q));
    worst = std::max(worst, (q2 - q).cwiseAbs().maxCoeff());
  }
  return make_result("parametrization_round_trip", worst <= 1e-10,
                     "worst |q - q(xi(q))| = " + num(worst) + " rad");
}

SelfTestResult check_jacobian_fd(Rng& rng, int samples) {
  const double h = 1e-5;
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const JointLimits lim = random_limits(rng, 2);
    const Vec xi = rng.uniform_vec(2, -3.0, 3.0);
    const Vec xid = rng.uniform_vec(2, -2.0, 2.0);
    const Vec j = jacobian_diagonal(lim, xi);
    const Vec jd = jacobian_dot_diagonal(lim, xi, xid);
    for (int i = 0; i < 2; ++i) {
      Vec xp = xi, xm = xi;
      xp[i] += h;
      xm[i] -= h;
      const double fd =
          (q_of_xi(lim, xp)[i] - q_of_xi(lim, xm)[i]) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - j[i]) / std::abs(j[i]));
    }
    const Vec jp = jacobian_diagonal(lim, xi + h * xid);
    const Vec jm = jacobian_diagonal(lim, xi - h * xid);
    for (int i = 0; i < 2; ++i) {
      const double fd = (jp[i] - jm[i]) / (2.0 * h);
      const double scale = std::max(std::abs(jd[i]), 1e-6);
      worst = std::max(worst, std::abs(fd - jd[i]) / scale);
    }
  }
  return make_result("jacobian_matches_finite_differences", worst <= 1e-6,
                     "worst relative error " + num(worst));
}

SelfTestResult check_range_invariance(Rng& rng, int samples,
                                      const JointLimits& lim) {
  int outside = 0;
  for (int s = 0; s < samples; ++s) {
    const Vec xi = rng.uniform_vec(lim.n(), -30.0, 30.0);
    if (!lim.inside(q_of_xi(lim, xi))) ++outside;
  }
  return make_result("range_invariance", outside == 0,
                     num(samples) + " samples, " + num(outside) + " escaped");
}

SelfTestResult check_gravity_gradient(Rng& rng, int samples) {
  const double h = 1e-6;
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const int n = 2 + static_cast<int>(rng.u01() * 2.0);
    const ManipulatorModel m = random_model(rng, n);
    const Vec q = rng.uniform_vec(n, -kPi, kPi);
    const Vec G = gravity_vector(m, q);
    const double scale = std::max(G.cwiseAbs().maxCoeff(), 1e-3);
    for (int i = 0; i < n; ++i) {
      Vec qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      const double fd =
          (potential_energy(m, qp) - potential_energy(m, qm)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - G[i]) / scale);
    }
  }
  return make_result("gravity_matches_potential_gradient", worst <= 1e-6,
                     "worst relative error " + num(worst));
}

SelfTestResult check_ee_jacobian_fd(Rng& rng, int samples) {
  const double h = 1e-6;
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const int n = 2 + static_cast<int>(rng.u01() * 2.0);
    const ManipulatorModel m = random_model(rng, n);
    const Vec q = rng.uniform_vec(n, -kPi, kPi);
    const Mat J = ee_jacobian(m, q);
    const double scale = std::max(J.cwiseAbs().maxCoeff(), 1e-3);
    for (int i = 0; i < n; ++i) {
      Vec qp = q, qm = q;
      qp[i] += h;
      qm[i] -= h;
      const Vec2 fd = (ee_position(m, qp) - ee_position(m, qm)) / (2.0 * h);
      worst = std::max(worst, (fd - J.col(i)).cwiseAbs().maxCoeff() / scale);
    }
  }
  return make_result("ee_jacobian_matches_kinematics", worst <= 1e-6,
                     "worst relative error " + num(worst));
}

SelfTestResult check_closed_vs_generic(Rng& rng, int samples) {
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const ManipulatorModel m = random_model(rng, 2);
    const Vec q = rng.uniform_vec(2, -kPi, kPi);
    const Vec qd = rng.uniform_vec(2, -2.0, 2.0);
    worst = std::max(
        worst, (mass_matrix(m, q) - mass_matrix_generic(m, q))
                   .cwiseAbs()
                   .maxCoeff());
    worst = std::max(worst, (coriolis_matrix(m, q, qd) -
                             coriolis_matrix_generic(m, q, qd))
                                .cwiseAbs()
                                .maxCoeff());
    worst = std::max(worst, (gravity_vector(m, q) -
                             gravity_vector_generic(m, q))
                                .cwiseAbs()
                                .maxCoeff());
  }
  return make_result("closed_form_matches_generic_assembly", worst <= 1e-10,
                     "worst absolute difference " + num(worst));
}

// The tracking law evaluated as joint torques, mapped through J^T, must
// equal the same law written directly in xi-coordinates from the
// transformed dynamics terms.
SelfTestResult check_law_route_consistency(Rng& rng, int samples) {
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const ManipulatorModel m = random_model(rng, 2);
    const JointLimits lim = random_limits(rng, 2);
    const ControlGains gains = ControlGains::diagonal(
        rng.uniform_vec(2, 5.0, 40.0), rng.uniform_vec(2, 0.0, 5.0));

    const Vec xi = rng.uniform_vec(2, -2.0, 2.0);
    const Vec xi_dot = rng.uniform_vec(2, -1.0, 1.0);
    const Vec q = q_of_xi(lim, xi);
    const Vec j = jacobian_diagonal(lim, xi);
    const JointState state{q, j.cwiseProduct(xi_dot)};

    ReferenceSample ref;
    ref.q_d = q_of_xi(lim, rng.uniform_vec(2, -1.0, 1.0));
    ref.q_d_dot = rng.uniform_vec(2, -0.5, 0.5);
    ref.q_d_ddot = rng.uniform_vec(2, -0.5, 0.5);
    ref.xi = xi_reference(lim, ref.q_d, ref.q_d_dot, ref.q_d_ddot);

    const DynamicsTerms terms = dynamics_at(m, q, state.q_dot);
    const Vec tau = parametrized_tracking_law(terms, state, ref, lim, gains);

    const XiDynamicsTerms tx = to_xi_dynamics(terms, lim, XiState{xi, xi_dot});
    const Vec rhs = tx.M_xi * ref.xi->xi_d_ddot + tx.C_xi * ref.xi->xi_d_dot +
                    tx.G_xi - gains.Kp * (xi - ref.xi->xi_d) -
                    gains.Kd * (xi_dot - ref.xi->xi_d_dot);

    worst = std::max(
        worst,
        (j.cwiseProduct(tau) - rhs).cwiseAbs().maxCoeff());
  }
  return make_result("tracking_law_route_consistency", worst <= 1e-9,
                     "worst |J^T tau - xi-space law| = " + num(worst));
}

SelfTestResult check_gain_transform_identity(Rng& rng, int samples) {
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const ManipulatorModel m = random_model(rng, 2);
    const JointLimits lim = random_limits(rng, 2);
    const Mat Kp_prime = rng.uniform_vec(2, 5.0, 40.0).asDiagonal();
    const Mat Kd_prime = rng.uniform_vec(2, 0.5, 5.0).asDiagonal();

    const Vec xi = rng.uniform_vec(2, -2.0, 2.0);
    const Vec q = q_of_xi(lim, xi);
    const JointState state{q, rng.uniform_vec(2, -1.0, 1.0)};

    ReferenceSample ref;
    ref.q_d = q_of_xi(lim, rng.uniform_vec(2, -1.5, 1.5));
    ref.q_d_dot = Vec::Zero(2);
    ref.q_d_ddot = Vec::Zero(2);
    ref.xi = xi_reference(lim, ref.q_d, ref.q_d_dot, ref.q_d_ddot);

    const DynamicsTerms terms = dynamics_at(m, q, state.q_dot);
    const ControlGains transformed =
        gain_transform(lim, xi, Kp_prime, Kd_prime);
    const Vec tau_tracking =
        parametrized_tracking_law(terms, state, ref, lim, transformed);
    const Vec tau_setpoint =
        setpoint_law(terms, state, ref.q_d, lim,
                     ControlGains{Kp_prime, Kd_prime});
    worst = std::max(worst,
                     (tau_tracking - tau_setpoint).cwiseAbs().maxCoeff());
  }
  return make_result("gain_transform_identity", worst <= 1e-10,
                     "worst torque difference " + num(worst));
}

SelfTestResult check_radial_probe(const JointLimits& lim) {
  const ControlGains gains =
      ControlGains::diagonal(Vec{{20.0, 10.0}}, Vec{{2.0, 1.0}});
  const RadialProbeReport rep =
      radial_unboundedness_probe(gains, lim, desk_model(), 64);
  return make_result(
      "lyapunov_radially_unbounded", rep.ok,
      num(rep.rays) + " rays, min end value " + num(rep.min_end_value));
}

}  // namespace

std::vector<SelfTestResult> run_selftests(const SelfTestOptions& opts) {
  Rng rng(opts.seed);
  const int samples = opts.samples;
  const JointLimits lim = opts.limits_fn ? opts.limits_fn() : desk_limits();
  std::function<Mat(const ManipulatorModel&, const Vec&, const Vec&)>
      coriolis_fn = opts.coriolis_fn;
  if (!coriolis_fn) {
    coriolis_fn = [](const ManipulatorModel& m, const Vec& q, const Vec& qd) {
      return coriolis_matrix(m, q, qd);
    };
  }

  std::vector<SelfTestResult> results;
  results.push_back(check_mass_matrix_pd(rng, samples));
  results.push_back(check_skew_q(rng, samples, coriolis_fn));
  results.push_back(check_skew_xi(rng, samples));
  results.push_back(check_m_xi_pd(rng, samples));
  results.push_back(check_round_trip(rng, samples, lim));
  results.push_back(check_jacobian_fd(rng, samples));
  results.push_back(check_range_invariance(rng, 100000, lim));
  results.push_back(check_gravity_gradient(rng, samples));
  results.push_back(check_ee_jacobian_fd(rng, samples));
  results.push_back(check_closed_vs_generic(rng, samples));
  results.push_back(check_law_route_consistency(rng, samples));
  results.push_back(check_gain_transform_identity(rng, samples));
  results.push_back(check_radial_probe(lim));
  return results;
}

}  // namespace jla
