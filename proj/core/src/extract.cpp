#include "itamp/extract.hpp"

namespace itamp {

TrajectorySpline manipulator_spline(const Eigen::VectorXd& x, const VariableLayout& layout,
                                    int manipulator) {
  const int n = layout.manipulator_dof(manipulator);
  TrajectorySpline spline(n, layout.horizon(), layout.node_count());
  for (int s = 0; s < layout.node_count(); ++s) {
    for (int k = 0; k < n; ++k) {
      spline.values()(k, s) = x[layout.joint_value(manipulator, s, k)];
      spline.tangents()(k, s) = x[layout.joint_tangent(manipulator, s, k)];
    }
  }
  return spline;
}

TrajectorySpline object_spline(const Eigen::VectorXd& x, const VariableLayout& layout,
                               int object) {
  TrajectorySpline spline(6, layout.horizon(), layout.node_count());
  for (int s = 0; s < layout.node_count(); ++s) {
    for (int c = 0; c < 6; ++c) {
      spline.values()(c, s) = x[layout.object_value(object, s, c)];
      spline.tangents()(c, s) = x[layout.object_tangent(object, s, c)];
    }
  }
  return spline;
}

SegmentSchedule weight_schedule(const Eigen::VectorXd& x, const VariableLayout& layout,
                                int pair) {
  Eigen::VectorXd values(layout.segment_count());
  for (int s = 0; s < layout.segment_count(); ++s) values[s] = x[layout.weight(pair, s)];
  return SegmentSchedule(values, layout.horizon());
}

SegmentSchedule rest_schedule(const Eigen::VectorXd& x, const VariableLayout& layout,
                              int object, int rest_index) {
  Eigen::VectorXd values(layout.segment_count());
  for (int s = 0; s < layout.segment_count(); ++s) {
    values[s] = x[layout.rest_weight(object, rest_index, s)];
  }
  return SegmentSchedule(values, layout.horizon());
}

SegmentSchedule orientation_schedule(const Eigen::VectorXd& x, const VariableLayout& layout,
                                     int pair, int k) {
  Eigen::VectorXd values(layout.segment_count());
  for (int s = 0; s < layout.segment_count(); ++s) {
    values[s] = x[layout.orientation_weight(pair, k, s)];
  }
  return SegmentSchedule(values, layout.horizon());
}

}  // namespace itamp
