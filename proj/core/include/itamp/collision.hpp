#pragma once

#include "itamp/kinematics.hpp"
#include "itamp/pose.hpp"

namespace itamp {

/// Squared clearance between two capsule/sphere axes with endpoint gradients.
/// value = |pa - pb|^2 - (ra + rb)^2, negative inside a collision.
struct SegmentPairDistance {
  double value = 0.0;
  double s = 0.0, t = 0.0;              // segment parameters of the witness points
  Eigen::Vector3d point_a, point_b;     // witness points on the segment axes
  Eigen::Vector3d grad_a0, grad_a1;     // d(value)/d(world endpoints of A)
  Eigen::Vector3d grad_b0, grad_b1;
};

SegmentPairDistance segment_pair_distance_sq(const Eigen::Vector3d& a0,
                                             const Eigen::Vector3d& a1, double ra,
                                             const Eigen::Vector3d& b0,
                                             const Eigen::Vector3d& b1, double rb);

/// Squared clearance between two posed primitives and its gradient with
/// respect to both poses (position, Euler XYZ). Smooth except at exact
/// parallel-overlap degeneracies, where the parametric solve is regularized.
struct PrimitiveDistance {
  double value = 0.0;
  Eigen::Matrix<double, 6, 1> grad_pose_a;
  Eigen::Matrix<double, 6, 1> grad_pose_b;
  SegmentPairDistance detail;
};

PrimitiveDistance primitive_distance_sq(const CollisionPrimitive& a, const Pose& pose_a,
                                        const CollisionPrimitive& b, const Pose& pose_b);

}  // namespace itamp
