#include "jla/dynamics.hpp"

#include <cmath>
#include <vector>

namespace jla {
namespace {

// Per-link COM kinematics of the planar chain: positions, the 2 x n
// position Jacobians, and their exact q-derivatives. theta_k is the
// cumulative angle of link k.
struct LinkKinematics {
  std::vector<double> theta, c, s;

  explicit LinkKinematics(const Vec& q) {
    const int n = static_cast<int>(q.size());
    theta.resize(n);
    c.resize(n);
    s.resize(n);
    double acc = 0;
    for (int k = 0; k < n; ++k) {
      acc += q[k];
      theta[k] = acc;
      c[k] = std::cos(acc);
      s[k] = std::sin(acc);
    }
  }
};

// d p_i / d q_k for the COM of link i.
Vec2 com_jacobian_col(const ManipulatorModel& m, const LinkKinematics& kin,
                      int i, int k) {
  Vec2 out{0, 0};
  if (k > i) return out;
  for (int j = k; j < i; ++j) {
    out += m.link_length[j] * Vec2{-kin.s[j], kin.c[j]};
  }
  out += m.com_offset[i] * Vec2{-kin.s[i], kin.c[i]};
  return out;
}

// d^2 p_i / (d q_k d q_r).
Vec2 com_hessian_entry(const ManipulatorModel& m, const LinkKinematics& kin,
                       int i, int k, int r) {
  Vec2 out{0, 0};
  const int kr = std::max(k, r);
  if (kr > i) return out;
  for (int j = kr; j < i; ++j) {
    out += m.link_length[j] * Vec2{-kin.c[j], -kin.s[j]};
  }
  out += m.com_offset[i] * Vec2{-kin.c[i], -kin.s[i]};
  return out;
}

Mat mass_matrix_2link(const ManipulatorModel& m, const Vec& q) {
  const double m1 = m.link_mass[0], m2 = m.link_mass[1];
  const double l1 = m.link_length[0];
  const double a1 = m.com_offset[0], a2 = m.com_offset[1];
  const double I1 = m.link_inertia[0], I2 = m.link_inertia[1];
  const double c2 = std::cos(q[1]);

  Mat M(2, 2);
  M(0, 0) = m1 * a1 * a1 + I1 + I2 +
            m2 * (l1 * l1 + a2 * a2 + 2.0 * l1 * a2 * c2);
  M(0, 1) = I2 + m2 * (a2 * a2 + l1 * a2 * c2);
  M(1, 0) = M(0, 1);
  M(1, 1) = I2 + m2 * a2 * a2;
  return M;
}

// Christoffel form of the standard two-link Coriolis matrix.
Mat coriolis_matrix_2link(const ManipulatorModel& m, const Vec& q,
                          const Vec& qd) {
  const double h =
      -m.link_mass[1] * m.link_length[0] * m.com_offset[1] * std::sin(q[1]);
  Mat C(2, 2);
  C(0, 0) = h * qd[1];
  C(0, 1) = h * (qd[0] + qd[1]);
  C(1, 0) = -h * qd[0];
  C(1, 1) = 0.0;
  return C;
}

Vec gravity_vector_2link(const ManipulatorModel& m, const Vec& q) {
  const double c1 = std::cos(q[0]);
  const double c12 = std::cos(q[0] + q[1]);
  const double g = m.gravity;
  Vec G(2);
  G[0] = (m.link_mass[0] * m.com_offset[0] +
          m.link_mass[1] * m.link_length[0]) *
             g * c1 +
         m.link_mass[1] * m.com_offset[1] * g * c12;
  G[1] = m.link_mass[1] * m.com_offset[1] * g * c12;
  return G;
}

// dM/dq_r assembled from the exact COM Jacobian derivatives. The rotational
// part of M is constant in q and drops out.
std::vector<Mat> mass_matrix_gradient(const ManipulatorModel& m,
                                      const LinkKinematics& kin) {
  const int n = m.n();
  std::vector<Mat> dM(n, Mat::Zero(n, n));
  for (int i = 0; i < n; ++i) {
    const double mi = m.link_mass[i];
    std::vector<Vec2> J(n);
    for (int k = 0; k <= i; ++k) J[k] = com_jacobian_col(m, kin, i, k);
    for (int r = 0; r < n; ++r) {
      for (int a = 0; a <= i; ++a) {
        const Vec2 Ha = com_hessian_entry(m, kin, i, a, r);
        for (int b = 0; b <= i; ++b) {
          const Vec2 Hb = com_hessian_entry(m, kin, i, b, r);
          dM[r](a, b) += mi * (Ha.dot(J[b]) + J[a].dot(Hb));
        }
      }
    }
  }
  return dM;
}

}  // namespace

Mat mass_matrix_generic(const ManipulatorModel& model, const Vec& q) {
  const int n = model.n();
  const LinkKinematics kin(q);
  Mat M = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a <= i; ++a) {
      const Vec2 Ja = com_jacobian_col(model, kin, i, a);
      for (int b = 0; b <= i; ++b) {
        const Vec2 Jb = com_jacobian_col(model, kin, i, b);
        M(a, b) += model.link_mass[i] * Ja.dot(Jb) + model.link_inertia[i];
      }
    }
  }
  return M;
}

Mat coriolis_matrix_generic(const ManipulatorModel& model, const Vec& q,
                            const Vec& q_dot) {
  const int n = model.n();
  const LinkKinematics kin(q);
  const std::vector<Mat> dM = mass_matrix_gradient(model, kin);
  Mat C = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      double ckj = 0;
      for (int i = 0; i < n; ++i) {
        ckj += 0.5 * (dM[i](k, j) + dM[j](k, i) - dM[k](i, j)) * q_dot[i];
      }
      C(k, j) = ckj;
    }
  }
  return C;
}

Vec gravity_vector_generic(const ManipulatorModel& model, const Vec& q) {
  const int n = model.n();
  const LinkKinematics kin(q);
  Vec G = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k <= i; ++k) {
      G[k] += model.link_mass[i] * model.gravity *
              com_jacobian_col(model, kin, i, k).y();
    }
  }
  return G;
}

Mat mass_matrix(const ManipulatorModel& model, const Vec& q) {
  if (model.n() == 2) return mass_matrix_2link(model, q);
  return mass_matrix_generic(model, q);
}

Mat coriolis_matrix(const ManipulatorModel& model, const Vec& q,
                    const Vec& q_dot) {
  if (model.n() == 2) return coriolis_matrix_2link(model, q, q_dot);
  return coriolis_matrix_generic(model, q, q_dot);
}

Vec gravity_vector(const ManipulatorModel& model, const Vec& q) {
  if (model.n() == 2) return gravity_vector_2link(model, q);
  return gravity_vector_generic(model, q);
}

DynamicsTerms dynamics_at(const ManipulatorModel& model, const Vec& q,
                          const Vec& q_dot) {
  return DynamicsTerms{mass_matrix(model, q), coriolis_matrix(model, q, q_dot),
                       gravity_vector(model, q)};
}

Vec2 ee_position(const ManipulatorModel& model, const Vec& q) {
  const LinkKinematics kin(q);
  Vec2 p{0, 0};
  for (int j = 0; j < model.n(); ++j) {
    p += model.link_length[j] * Vec2{kin.c[j], kin.s[j]};
  }
  return p;
}

Mat ee_jacobian(const ManipulatorModel& model, const Vec& q) {
  const int n = model.n();
  const LinkKinematics kin(q);
  Mat J = Mat::Zero(2, n);
  for (int k = 0; k < n; ++k) {
    for (int j = k; j < n; ++j) {
      J(0, k) += model.link_length[j] * -kin.s[j];
      J(1, k) += model.link_length[j] * kin.c[j];
    }
  }
  return J;
}

double potential_energy(const ManipulatorModel& model, const Vec& q) {
  const LinkKinematics kin(q);
  double U = 0;
  for (int i = 0; i < model.n(); ++i) {
    double y = 0;
    for (int j = 0; j < i; ++j) y += model.link_length[j] * kin.s[j];
    y += model.com_offset[i] * kin.s[i];
    U += model.link_mass[i] * model.gravity * y;
  }
  return U;
}

double kinetic_energy(const ManipulatorModel& model, const Vec& q,
                      const Vec& q_dot) {
  return 0.5 * q_dot.dot(mass_matrix(model, q) * q_dot);
}

}  // namespace jla
