#pragma once

#include "jla/types.hpp"

namespace jla {

/// The open feasible joint box (q_min, q_max)^n together with its derived
/// center q_0 = (q_max + q_min)/2 and half-range delta = (q_max - q_min)/2.
class JointLimits {
 public:
  /// Throws std::invalid_argument unless q_max[i] - q_min[i] > 0 for all i.
  JointLimits(Vec q_min, Vec q_max);

  static JointLimits from_degrees(const Vec& q_min_deg, const Vec& q_max_deg);

  int n() const { return static_cast<int>(q_min_.size()); }
  const Vec& q_min() const { return q_min_; }
  const Vec& q_max() const { return q_max_; }
  const Vec& center() const { return center_; }      // q_0
  const Vec& half_range() const { return half_range_; }  // diag of delta
  Mat delta() const { return half_range_.asDiagonal(); }

  /// Per-joint distance to the nearer bound, min(q - q_min, q_max - q).
  /// Positive iff strictly inside the box.
  Vec margins(const Vec& q) const;
  double min_margin(const Vec& q) const;
  bool inside(const Vec& q) const;  // strictly, all joints

 private:
  Vec q_min_, q_max_, center_, half_range_;
};

}  // namespace jla
