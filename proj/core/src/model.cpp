#include "jla/model.hpp"

#include <stdexcept>

namespace jla {

void ManipulatorModel::validate() const {
  const auto nl = link_mass.size();
  if (nl < 1) throw std::invalid_argument("model: needs at least one link");
  if (link_length.size() != nl || com_offset.size() != nl ||
      link_inertia.size() != nl) {
    throw std::invalid_argument("model: per-link arrays must share one size");
  }
  if (viscous_friction.size() != 0 && viscous_friction.size() != nl) {
    throw std::invalid_argument("model: viscous_friction size mismatch");
  }
  for (Eigen::Index i = 0; i < nl; ++i) {
    if (!(link_mass[i] > 0)) {
      throw std::invalid_argument("model: link_mass must be > 0");
    }
    if (!(link_length[i] > 0)) {
      throw std::invalid_argument("model: link_length must be > 0");
    }
    if (!(com_offset[i] > 0) || com_offset[i] > link_length[i]) {
      throw std::invalid_argument(
          "model: com_offset must lie in (0, link_length]");
    }
    if (!(link_inertia[i] >= 0)) {
      throw std::invalid_argument("model: link_inertia must be >= 0");
    }
    if (viscous_friction.size() != 0 && !(viscous_friction[i] >= 0)) {
      throw std::invalid_argument("model: viscous_friction must be >= 0");
    }
  }
  if (!std::isfinite(gravity)) {
    throw std::invalid_argument("model: gravity must be finite");
  }
}

ManipulatorModel desk_model() {
  ManipulatorModel m;
  m.link_mass = Vec{{2.0, 1.0}};
  m.link_length = Vec{{0.4, 0.4}};
  m.com_offset = Vec{{0.2, 0.2}};
  // uniform rods: m l^2 / 12
  m.link_inertia = Vec{{2.0 * 0.16 / 12.0, 1.0 * 0.16 / 12.0}};
  m.gravity = 9.81;
  m.viscous_friction = Vec::Zero(2);
  return m;
}

}  // namespace jla
