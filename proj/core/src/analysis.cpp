#include "jla/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "jla/dynamics.hpp"
#include "jla/parametrization.hpp"

namespace jla {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Kinetic part 1/2 xtd^T M_xi(xt) xtd, evaluated directly so it stays
// meaningful where the position part would swamp it.
double probe_kinetic(const JointLimits& limits, const ManipulatorModel& model,
                     const Vec& xt, const Vec& xtd) {
  const Vec q = q_of_xi(limits, xt);
  const Mat M = mass_matrix(model, q);
  const Vec jxtd = jacobian_diagonal(limits, xt).cwiseProduct(xtd);
  return 0.5 * jxtd.dot(M * jxtd);
}

// V(xt, xtd) with xi_d = 0, so xi = xt and M_xi is evaluated there.
double probe_V(const ControlGains& gains, const JointLimits& limits,
               const ManipulatorModel& model, const Vec& xt, const Vec& xtd) {
  return probe_kinetic(limits, model, xt, xtd) +
         0.5 * xt.dot(gains.Kp * xt);
}

}  // namespace

LyapunovSample lyapunov(const TraceRecord& record, const ControlGains& gains,
                        const JointLimits& limits,
                        const ManipulatorModel& model) {
  LyapunovSample s;
  const Mat M = mass_matrix(model, record.q);
  const Vec j = jacobian_diagonal(limits, record.xi);
  const Mat M_xi = j.asDiagonal() * M * j.asDiagonal();
  s.V = 0.5 * record.xi_tilde_dot.dot(M_xi * record.xi_tilde_dot) +
        0.5 * record.xi_tilde.dot(gains.Kp * record.xi_tilde);
  s.V_dot_analytic =
      -record.xi_tilde_dot.dot(gains.Kd * record.xi_tilde_dot);
  s.V_dot_numeric = record.V_dot_numeric;
  return s;
}

RadialProbeReport radial_unboundedness_probe(const ControlGains& gains,
                                             const JointLimits& limits,
                                             const ManipulatorModel& model,
                                             int ray_count,
                                             std::uint64_t seed) {
  const int n = limits.n();
  constexpr int kRadii = 50;
  constexpr double kMaxNorm = 1e3;
  constexpr double kTol = 1e-9;

  std::vector<double> radii(kRadii);
  for (int i = 0; i < kRadii; ++i) {
    radii[i] = std::pow(kMaxNorm, static_cast<double>(i) / (kRadii - 1));
  }

  // Pure coordinate rays first (monotone + exact quadratic growth), then
  // random mixed directions (checked against the Kp-term floor only: the
  // kinetic term can shrink faster than the position term grows at
  // moderate radius, so V need not be monotone off the axes).
  std::vector<std::pair<Vec, Vec>> rays;
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    rays.emplace_back(e, Vec::Zero(n));
    rays.emplace_back(Vec::Zero(n), e);
  }
  const int pure_rays = static_cast<int>(rays.size());

  std::mt19937_64 rng(seed);
  for (int r = 0; r < ray_count; ++r) {
    Vec u(2 * n);
    double norm2 = 0;
    do {
      for (int i = 0; i < 2 * n; ++i) u[i] = 2.0 * uniform01(rng) - 1.0;
      norm2 = u.squaredNorm();
    } while (norm2 < 1e-8);
    u /= std::sqrt(norm2);
    rays.emplace_back(u.head(n), u.tail(n));
  }

  RadialProbeReport rep;
  rep.rays = static_cast<int>(rays.size());
  rep.min_growth_factor = std::numeric_limits<double>::infinity();
  rep.min_end_value = std::numeric_limits<double>::infinity();

  for (std::size_t ri = 0; ri < rays.size(); ++ri) {
    const auto& [ux, uv] = rays[ri];
    const double kp_quad = 0.5 * ux.dot(gains.Kp * ux);
    double prev = -std::numeric_limits<double>::infinity();
    double v_first = 0, v_last = 0;
    for (int i = 0; i < kRadii; ++i) {
      const double s = radii[i];
      const double v = probe_V(gains, limits, model, s * ux, s * uv);
      if (i == 0) v_first = v;
      if (i == kRadii - 1) v_last = v;
      if (v < (1.0 - kTol) * s * s * kp_quad) ++rep.floor_violations;
      if (ri < static_cast<std::size_t>(pure_rays)) {
        if (v < prev * (1.0 - kTol)) ++rep.monotone_violations;
        prev = v;
      }
    }
    if (ri < static_cast<std::size_t>(pure_rays)) {
      rep.min_growth_factor =
          std::min(rep.min_growth_factor, v_last / v_first);
    }
    rep.min_end_value = std::min(rep.min_end_value, v_last);
  }

  // Kinetic term alone, at a base point deep in the corner of xi-space
  // where M_xi has all but vanished: still positive and quadratic in the
  // velocity error.
  const Vec base = Vec::Constant(n, 8.0);
  const Vec udot = Vec::Ones(n) / std::sqrt(static_cast<double>(n));
  const double k1 = probe_kinetic(limits, model, base, udot);
  const double k2 = probe_kinetic(limits, model, base, kMaxNorm * udot);
  const bool corner_ok =
      k1 > 0 && std::abs(k2 / k1 - kMaxNorm * kMaxNorm) <
                    1e-6 * kMaxNorm * kMaxNorm;

  rep.ok = rep.floor_violations == 0 && rep.monotone_violations == 0 &&
           rep.min_growth_factor >= (1.0 - 1e-6) * kMaxNorm * kMaxNorm &&
           corner_ok;
  return rep;
}

RunReport report(const SimTrace& trace, const JointLimits& limits,
                 int settle_steps) {
  if (trace.empty()) throw EmptyTrace("report: trace has no records");
  const int n = trace.n_joints;

  RunReport rep;
  rep.status = trace.status;
  rep.min_margin = Vec::Constant(n, std::numeric_limits<double>::infinity());
  double max_v = 0;
  bool any_v = false;

  for (const TraceRecord& r : trace.records) {
    rep.min_margin = rep.min_margin.cwiseMin(r.margin);
    if (r.tau.allFinite()) {
      rep.max_abs_tau = std::max(rep.max_abs_tau, r.tau.cwiseAbs().maxCoeff());
      rep.max_abs_tau_raw =
          std::max(rep.max_abs_tau_raw, r.tau_raw.cwiseAbs().maxCoeff());
    }
    rep.any_saturated = rep.any_saturated || r.saturated;
    if (std::isfinite(r.V)) {
      max_v = std::max(max_v, r.V);
      any_v = true;
    }
  }
  rep.min_margin_overall = rep.min_margin.minCoeff();
  rep.violation = rep.min_margin_overall <= 0 ||
                  trace.status == RunStatus::hit_boundary;

  const TraceRecord& last = trace.records.back();
  rep.final_q_err = last.q_d.allFinite() ? (last.q - last.q_d).norm() : kNaN;
  rep.final_xi_err = last.xi_tilde.allFinite() ? last.xi_tilde.norm() : kNaN;
  rep.final_xi_dot_err =
      last.xi_tilde_dot.allFinite() ? last.xi_tilde_dot.norm() : kNaN;

  if (any_v) {
    const double tol = 1e-6 * std::max(max_v, 1e-30);
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
      if (static_cast<int>(k) < settle_steps) continue;
      const double vd = trace.records[k].V_dot_numeric;
      if (std::isfinite(vd) && vd > tol) {
        ++rep.lyapunov_violations;
        rep.worst_lyapunov_violation =
            std::max(rep.worst_lyapunov_violation, vd);
      }
    }
  }
  (void)limits;
  return rep;
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "status:               " << ::jla::to_string(status) << '\n';
  out << "violation:            " << (violation ? "yes" : "no") << '\n';
  out << "min margin (rad):    ";
  for (Eigen::Index i = 0; i < min_margin.size(); ++i) {
    out << ' ' << min_margin[i];
  }
  out << '\n';
  out << "min margin overall:   " << min_margin_overall << " rad\n";
  out << "final |q - q_d|:      " << final_q_err << " rad\n";
  out << "final |xi_tilde|:     " << final_xi_err << '\n';
  out << "final |xi_tilde_dot|: " << final_xi_dot_err << '\n';
  out << "max |tau| applied:    " << max_abs_tau << " N*m\n";
  out << "max |tau| raw:        " << max_abs_tau_raw << " N*m\n";
  out << "torque saturated:     " << (any_saturated ? "yes" : "no") << '\n';
  out << "Vdot violations:      " << lyapunov_violations
      << " (worst " << worst_lyapunov_violation << " J/s)\n";
  return out.str();
}

std::string RunReport::csv_header() {
  return "label,status,violation,min_margin_rad,final_q_err_rad,"
         "final_xi_err,final_xi_dot_err,max_tau,max_tau_raw,saturated,"
         "vdot_violations,worst_vdot";
}

std::string RunReport::to_csv_row(const std::string& label) const {
  std::ostringstream out;
  out << label << ',' << ::jla::to_string(status) << ',' << (violation ? 1 : 0)
      << ',' << min_margin_overall << ',' << final_q_err << ','
      << final_xi_err << ',' << final_xi_dot_err << ',' << max_abs_tau << ','
      << max_abs_tau_raw << ',' << (any_saturated ? 1 : 0) << ','
      << lyapunov_violations << ',' << worst_lyapunov_violation;
  return out.str();
}

}  // namespace jla
