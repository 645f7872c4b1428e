#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jla/dynamics.hpp"
#include "jla/limits.hpp"
#include "jla/model.hpp"

namespace jla {

struct SelfTestResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Hooks for fault-injection in tests; the defaults run the real
/// implementations.
struct SelfTestOptions {
  std::uint64_t seed = 42;
  int samples = 1000;
  std::function<Mat(const ManipulatorModel&, const Vec&, const Vec&)>
      coriolis_fn;  // empty: use coriolis_matrix
  std::function<JointLimits()> limits_fn;  // empty: shipped desk limits
};

/// Runs the runtime invariant suite: inertia positive definiteness, the
/// skew-symmetry identities in q- and xi-space, Jacobians against central
/// differences, parametrization round trips and range invariance, the
/// control-law equivalence identities, and the Lyapunov radial probe.
std::vector<SelfTestResult> run_selftests(const SelfTestOptions& opts = {});

}  // namespace jla
