#pragma once

#include "itamp/layout.hpp"
#include "itamp/trajectory.hpp"

namespace itamp {

/// Views of one decision vector as spline/schedule objects.

TrajectorySpline manipulator_spline(const Eigen::VectorXd& x, const VariableLayout& layout,
                                    int manipulator);
TrajectorySpline object_spline(const Eigen::VectorXd& x, const VariableLayout& layout,
                               int object);
SegmentSchedule weight_schedule(const Eigen::VectorXd& x, const VariableLayout& layout,
                                int pair);
SegmentSchedule rest_schedule(const Eigen::VectorXd& x, const VariableLayout& layout,
                              int object, int rest_index);
SegmentSchedule orientation_schedule(const Eigen::VectorXd& x, const VariableLayout& layout,
                                     int pair, int k);

}  // namespace itamp
