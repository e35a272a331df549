#pragma once

#include <Eigen/Dense>

#include "itamp/layout.hpp"
#include "itamp/scene.hpp"

namespace itamp {

/// Default initial decision vector: manipulators at their rest configuration
/// with zero tangents; each object holds its start pose on every node except
/// the final one, which is the goal pose; association weights 0.5 (1 for a
/// declared initial holder), rest weights uniform 1/D, orientation weights
/// uniform 1/4, grasp offsets zero.
Eigen::VectorXd initialize(const Scenario& scenario, const VariableLayout& layout);

/// Multi-object heuristic: each object holds its start pose, linearly
/// interpolates to the goal inside its own transport window, then holds the
/// goal. Windows partition the segments evenly in object order, without
/// overlap.
Eigen::VectorXd initialize_multi_object(const Scenario& scenario,
                                        const VariableLayout& layout);

}  // namespace itamp
