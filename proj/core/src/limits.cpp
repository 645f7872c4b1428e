#include "jla/limits.hpp"

#include <stdexcept>

namespace jla {

JointLimits::JointLimits(Vec q_min, Vec q_max)
    : q_min_(std::move(q_min)), q_max_(std::move(q_max)) {
  if (q_min_.size() != q_max_.size() || q_min_.size() < 1) {
    throw std::invalid_argument("limits: q_min/q_max size mismatch");
  }
  for (Eigen::Index i = 0; i < q_min_.size(); ++i) {
    if (!(q_max_[i] - q_min_[i] > 0)) {
      throw std::invalid_argument(
          "limits: every joint needs a free motion domain, q_max > q_min");
    }
  }
  center_ = 0.5 * (q_max_ + q_min_);
  half_range_ = 0.5 * (q_max_ - q_min_);
}

JointLimits JointLimits::from_degrees(const Vec& q_min_deg,
                                      const Vec& q_max_deg) {
  return JointLimits(deg_to_rad(q_min_deg), deg_to_rad(q_max_deg));
}

Vec JointLimits::margins(const Vec& q) const {
  return (q - q_min_).cwiseMin(q_max_ - q);
}

double JointLimits::min_margin(const Vec& q) const {
  return margins(q).minCoeff();
}

bool JointLimits::inside(const Vec& q) const { return min_margin(q) > 0; }

}  // namespace jla
