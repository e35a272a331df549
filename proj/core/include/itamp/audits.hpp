#pragma once

#include "itamp/layout.hpp"
#include "itamp/scene.hpp"

namespace itamp {

/// Post-solve audits over raw (unpenalized) constraint values; used by the
/// integration tests and the run summary.

/// Largest translational magnitude of the raw position residual
/// w * (f - g) over all grasp pairs and constraint samples where the
/// association weight exceeds w_threshold. Meters.
double max_position_violation(const Scenario& scenario, const VariableLayout& layout,
                              const Eigen::VectorXd& x, double w_threshold);

/// Largest capacity violation max(0, sum_j w_ij - 1) over manipulators and
/// samples.
double max_capacity_violation(const Scenario& scenario, const VariableLayout& layout,
                              const Eigen::VectorXd& x);

/// Largest box-bound violation over joint nodal values, grasp offsets, and
/// schedule values.
double max_bounds_violation(const Scenario& scenario, const VariableLayout& layout,
                            const Eigen::VectorXd& x);

/// Largest |w_{s+1} - w_s| between adjacent segments over all pairs.
double max_weight_step(const VariableLayout& layout, const Eigen::VectorXd& x);

/// Mode-exclusivity audit: at every constraint sample of every object,
/// a linear object speed above vel_threshold implies that the association
/// weights of that object sum to at least 1 - weight_tolerance. Returns the
/// worst weight-sum deficit observed while the object moves (0 when the
/// audit passes everywhere).
double mode_exclusivity_deficit(const VariableLayout& layout, const Eigen::VectorXd& x,
                                double vel_threshold);

}  // namespace itamp
