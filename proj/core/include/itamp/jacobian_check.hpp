#pragma once

#include <map>
#include <random>
#include <string>

#include "itamp/residuals.hpp"

namespace itamp {

struct JacobianCheck {
  std::map<std::string, double> worst_error;  // per family, relative
  int states = 0;

  double worst() const;
  bool passed(double tol) const;
};

/// Random decision vector for derivative validation: joint values inside
/// their limits, moderate tangents and object poses (pitch kept away from
/// the gimbal branch), schedule values in (0, 1), grasp offsets within
/// limits.
Eigen::VectorXd random_state(const Scenario& scenario, const VariableLayout& layout,
                             std::mt19937& rng);

/// Central finite-difference validation of the raw residual Jacobian of
/// every block family at `states` random states. Relative error per entry is
/// |J - J_fd| / max(1, |J|, |J_fd|). `sabotage_family`, when set, perturbs
/// that family's analytic Jacobian (test fixture for the harness itself).
JacobianCheck check_jacobians(const Scenario& scenario, const VariableLayout& layout,
                              const ResidualSet& set, int states, unsigned seed,
                              double fd_step = 1e-6,
                              const std::string* sabotage_family = nullptr);

}  // namespace itamp
