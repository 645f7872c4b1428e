#include "jla/simulation.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "jla/dynamics.hpp"
#include "jla/parametrization.hpp"

namespace jla {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_xi_space(ControlLaw law) {
  return law == ControlLaw::proposed || law == ControlLaw::setpoint;
}

// Closed-loop state derivative: qdd solved from
//   M qdd = tau + J_ee^T F - C qd - G - B qd.
struct Derivative {
  Vec q_dot;
  Vec q_ddot;
};

Derivative closed_loop_derivative(const SimConfig& cfg, const Vec& q,
                                  const Vec& q_dot, double t) {
  const ReferenceSample ref =
      reference_sample(cfg.reference, t, cfg.limits, cfg.controller.xi_sat);
  const ControlOutput ctl = evaluate_control(cfg.model, cfg.limits,
                                             cfg.controller, {q, q_dot}, ref);
  const DynamicsTerms terms = dynamics_at(cfg.model, q, q_dot);

  Vec rhs = ctl.tau - terms.C * q_dot - terms.G;
  if (cfg.force.kind != ExternalForceProfile::Kind::none) {
    rhs += ee_jacobian(cfg.model, q).transpose() * cfg.force.force_at(t);
  }
  if (cfg.model.viscous_friction.size() != 0) {
    rhs -= cfg.model.viscous_friction.cwiseProduct(q_dot);
  }
  return {q_dot, terms.M.ldlt().solve(rhs)};
}

JointState rk4_step(const SimConfig& cfg, const JointState& s, double t) {
  const double h = cfg.dt;
  const Derivative k1 = closed_loop_derivative(cfg, s.q, s.q_dot, t);
  const Derivative k2 = closed_loop_derivative(
      cfg, s.q + 0.5 * h * k1.q_dot, s.q_dot + 0.5 * h * k1.q_ddot,
      t + 0.5 * h);
  const Derivative k3 = closed_loop_derivative(
      cfg, s.q + 0.5 * h * k2.q_dot, s.q_dot + 0.5 * h * k2.q_ddot,
      t + 0.5 * h);
  const Derivative k4 = closed_loop_derivative(cfg, s.q + h * k3.q_dot,
                                               s.q_dot + h * k3.q_ddot, t + h);
  JointState out;
  out.q = s.q + (h / 6.0) * (k1.q_dot + 2.0 * (k2.q_dot + k3.q_dot) +
                             k4.q_dot);
  out.q_dot = s.q_dot + (h / 6.0) * (k1.q_ddot + 2.0 * (k2.q_ddot +
                                                        k3.q_ddot) +
                                     k4.q_ddot);
  return out;
}

JointState semi_implicit_euler_step(const SimConfig& cfg, const JointState& s,
                                    double t) {
  const Derivative d = closed_loop_derivative(cfg, s.q, s.q_dot, t);
  JointState out;
  out.q_dot = s.q_dot + cfg.dt * d.q_ddot;
  out.q = s.q + cfg.dt * out.q_dot;
  return out;
}

// Full log record at (t, state). Throws OutOfFeasibleSpace where the
// configured law would.
TraceRecord make_record(const SimConfig& cfg, const JointState& s, double t) {
  const int n = cfg.model.n();
  const double sat = cfg.controller.xi_sat;
  const ReferenceSample ref =
      reference_sample(cfg.reference, t, cfg.limits, sat);
  const ControlOutput ctl =
      evaluate_control(cfg.model, cfg.limits, cfg.controller, s, ref);

  TraceRecord r;
  r.t = t;
  r.q = s.q;
  r.q_dot = s.q_dot;
  r.q_d = ref.q_d;
  r.tau_raw = ctl.tau_raw;
  r.tau = ctl.tau;
  r.saturated = ctl.saturated;
  r.f_ext = cfg.force.force_at(t);
  r.margin = cfg.limits.margins(s.q);

  const std::optional<Vec> xi = try_xi_of_q(cfg.limits, s.q, sat);
  if (xi && ref.xi) {
    const Vec j = jacobian_diagonal(cfg.limits, *xi);
    r.xi = *xi;
    r.xi_tilde = *xi - ref.xi->xi_d;
    r.xi_tilde_dot = s.q_dot.cwiseQuotient(j) - ref.xi->xi_d_dot;
  } else {
    r.xi = Vec::Constant(n, kNaN);
    r.xi_tilde = Vec::Constant(n, kNaN);
    r.xi_tilde_dot = Vec::Constant(n, kNaN);
  }

  if (cfg.controller.law == ControlLaw::proposed && xi) {
    const Mat M = mass_matrix(cfg.model, s.q);
    const Vec j = jacobian_diagonal(cfg.limits, *xi);
    const Mat M_xi = j.asDiagonal() * M * j.asDiagonal();
    r.V = 0.5 * r.xi_tilde_dot.dot(M_xi * r.xi_tilde_dot) +
          0.5 * r.xi_tilde.dot(cfg.controller.gains.Kp * r.xi_tilde);
    r.V_dot_analytic =
        -r.xi_tilde_dot.dot(cfg.controller.gains.Kd * r.xi_tilde_dot);
  } else {
    r.V = kNaN;
    r.V_dot_analytic = kNaN;
  }
  r.V_dot_numeric = kNaN;
  return r;
}

TraceRecord bare_record(const SimConfig& cfg, const JointState& s, double t) {
  const int n = cfg.model.n();
  TraceRecord r;
  r.t = t;
  r.q = s.q;
  r.q_dot = s.q_dot;
  r.q_d = Vec::Constant(n, kNaN);
  r.xi = Vec::Constant(n, kNaN);
  r.xi_tilde = Vec::Constant(n, kNaN);
  r.xi_tilde_dot = Vec::Constant(n, kNaN);
  r.tau_raw = Vec::Constant(n, kNaN);
  r.tau = Vec::Constant(n, kNaN);
  r.V = kNaN;
  r.V_dot_analytic = kNaN;
  r.V_dot_numeric = kNaN;
  r.margin = cfg.limits.margins(s.q);
  return r;
}

void fill_numeric_vdot(SimTrace& trace, double dt) {
  for (std::size_t k = 1; k + 1 < trace.records.size(); ++k) {
    const double vp = trace.records[k + 1].V;
    const double vm = trace.records[k - 1].V;
    trace.records[k].V_dot_numeric = (vp - vm) / (2.0 * dt);
  }
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

}  // namespace

ReferenceSample reference_sample(const ReferenceGenerator& gen, double t,
                                 const JointLimits& limits, double xi_sat) {
  const int n = limits.n();
  ReferenceSample ref;
  switch (gen.kind) {
    case ReferenceGenerator::Kind::constant:
      ref.q_d = gen.q_d;
      ref.q_d_dot = Vec::Zero(n);
      ref.q_d_ddot = Vec::Zero(n);
      break;
    case ReferenceGenerator::Kind::sinusoid: {
      const Vec amp = limits.half_range() / gen.rate_divisor;
      const Vec phase = gen.omega * t + gen.rho;
      ref.q_d = limits.center() + amp.cwiseProduct(phase.array().sin().matrix());
      ref.q_d_dot =
          amp.cwiseProduct(gen.omega).cwiseProduct(phase.array().cos().matrix());
      ref.q_d_ddot = -amp.cwiseProduct(gen.omega)
                          .cwiseProduct(gen.omega)
                          .cwiseProduct(phase.array().sin().matrix());
      break;
    }
  }
  ref.xi = xi_reference(limits, ref.q_d, ref.q_d_dot, ref.q_d_ddot, xi_sat);
  return ref;
}

Vec2 ExternalForceProfile::force_at(double t) const {
  if (kind == Kind::none || t < start_time) return Vec2{0, 0};
  const double mag = std::min(magnitude_rate * (t - start_time), cap);
  return mag * direction;
}

void SimConfig::validate() const {
  model.validate();
  if (limits.n() != model.n()) {
    throw std::invalid_argument("config: limits/model joint count mismatch");
  }
  if (q0.size() != model.n() || q0_dot.size() != model.n()) {
    throw std::invalid_argument("config: initial state size mismatch");
  }
  if (!(dt > 0)) throw std::invalid_argument("config: dt must be > 0");
  if (!(duration >= 0)) {
    throw std::invalid_argument("config: duration must be >= 0");
  }
  if (reference.kind == ReferenceGenerator::Kind::sinusoid &&
      !(reference.rate_divisor > 1.0)) {
    throw std::invalid_argument(
        "config: sinusoid rate_divisor must be > 1 to stay feasible");
  }
  if (reference.kind == ReferenceGenerator::Kind::constant) {
    if (reference.q_d.size() != model.n()) {
      throw std::invalid_argument("config: constant reference size mismatch");
    }
    if (!limits.inside(reference.q_d)) {
      throw OutOfFeasibleSpace(
          "config: constant reference lies outside the feasible joint box");
    }
  }
  if (controller.law != ControlLaw::none) {
    if (controller.gains.Kp.rows() != model.n()) {
      throw std::invalid_argument("config: gain size mismatch");
    }
    controller.gains.validate();
  }
  if (is_xi_space(controller.law) && !limits.inside(q0)) {
    throw OutOfFeasibleSpace(
        "config: initial position must lie strictly inside the joint box "
        "for the parametrized laws");
  }
}

JointState step(const SimConfig& config, const JointState& state, double t) {
  JointState next = config.integrator == IntegratorKind::rk4
                        ? rk4_step(config, state, t)
                        : semi_implicit_euler_step(config, state, t);
  if (!next.q.allFinite() || !next.q_dot.allFinite()) {
    std::ostringstream msg;
    msg << "non-finite state after step at t = " << t;
    throw NumericalDivergence(msg.str());
  }
  return next;
}

SimTrace run(const SimConfig& config) {
  config.validate();

  SimTrace trace;
  trace.n_joints = config.model.n();
  trace.limits_min = config.limits.q_min();
  trace.limits_max = config.limits.q_max();

  const long long steps = std::llround(config.duration / config.dt);
  JointState state{config.q0, config.q0_dot};

  for (long long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    try {
      trace.records.push_back(make_record(config, state, t));
    } catch (const OutOfFeasibleSpace&) {
      trace.records.push_back(bare_record(config, state, t));
      trace.status = RunStatus::hit_boundary;
      trace.status_time = t;
      break;
    }
    if (k == steps) break;
    try {
      state = step(config, state, t);
    } catch (const OutOfFeasibleSpace&) {
      trace.status = RunStatus::hit_boundary;
      trace.status_time = t;
      break;
    } catch (const NumericalDivergence&) {
      trace.records.push_back(
          bare_record(config, state, t + config.dt));
      trace.status = RunStatus::diverged;
      trace.status_time = t + config.dt;
      break;
    }
  }

  fill_numeric_vdot(trace, config.dt);
  return trace;
}

BreakingForceResult force_ramp_experiment(const SimConfig& config,
                                          double tolerance) {
  if (config.force.kind != ExternalForceProfile::Kind::ramp) {
    throw std::invalid_argument("force_ramp_experiment: needs a ramp profile");
  }
  if (config.reference.kind != ReferenceGenerator::Kind::constant) {
    throw std::invalid_argument(
        "force_ramp_experiment: needs a constant reference");
  }
  if (!(tolerance > 0)) {
    throw std::invalid_argument("force_ramp_experiment: tolerance must be > 0");
  }

  BreakingForceResult result;
  auto breaks_at = [&](double cap) {
    SimConfig probe = config;
    probe.force.cap = cap;
    const SimTrace trace = run(probe);
    ++result.runs;
    if (trace.status == RunStatus::hit_boundary) return true;
    for (const TraceRecord& r : trace.records) {
      if (r.margin.minCoeff() <= 0) return true;
    }
    return false;
  };

  const double cap_hi = config.force.cap;
  if (breaks_at(0.0)) {
    result.force = 0.0;
    result.broke = true;
    return result;
  }
  if (!breaks_at(cap_hi)) {
    result.force = cap_hi;
    result.broke = false;
    return result;
  }

  double lo = 0.0, hi = cap_hi;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (breaks_at(mid) ? hi : lo) = mid;
  }
  result.force = hi;
  result.broke = true;
  return result;
}

std::vector<SimConfig> make_fuzz_configs(const SimConfig& base,
                                         const FuzzSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  const JointLimits& limits = base.limits;
  const int n = limits.n();

  std::vector<SimConfig> configs;
  configs.reserve(spec.runs);
  for (int r = 0; r < spec.runs; ++r) {
    SimConfig cfg = base;
    cfg.duration = spec.duration;

    cfg.q0 = Vec(n);
    cfg.q0_dot = Vec(n);
    for (int i = 0; i < n; ++i) {
      const double u =
          uniform(rng, -spec.ic_box_fraction, spec.ic_box_fraction);
      cfg.q0[i] = limits.center()[i] + limits.half_range()[i] * u;
      cfg.q0_dot[i] =
          uniform(rng, -spec.max_initial_speed, spec.max_initial_speed);
    }

    const bool sinusoid = uniform01(rng) < spec.sinusoid_fraction;
    if (sinusoid) {
      cfg.reference.kind = ReferenceGenerator::Kind::sinusoid;
      cfg.reference.rate_divisor =
          uniform(rng, 1.0 / spec.ref_box_fraction,
                  2.0 / spec.ref_box_fraction);
      cfg.reference.omega = Vec(n);
      cfg.reference.rho = Vec(n);
      for (int i = 0; i < n; ++i) {
        cfg.reference.omega[i] = uniform(rng, 0.2, 0.8);
        cfg.reference.rho[i] = uniform(rng, -kPi, kPi);
      }
    } else {
      cfg.reference.kind = ReferenceGenerator::Kind::constant;
      cfg.reference.q_d = Vec(n);
      for (int i = 0; i < n; ++i) {
        const double u =
            uniform(rng, -spec.ref_box_fraction, spec.ref_box_fraction);
        cfg.reference.q_d[i] =
            limits.center()[i] + limits.half_range()[i] * u;
      }
    }
    configs.push_back(std::move(cfg));
  }
  return configs;
}

}  // namespace jla
