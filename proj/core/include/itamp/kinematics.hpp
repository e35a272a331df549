#pragma once

#include <utility>
#include <vector>

#include "itamp/pose.hpp"

namespace itamp {

enum class JointKind { revolute, prismatic };

struct Joint {
  JointKind kind = JointKind::revolute;
  Eigen::Vector3d axis{Eigen::Vector3d::UnitZ()};  // unit vector in the parent link frame
  Pose origin;                                     // fixed parent-to-joint transform
  double lower = -1e9;
  double upper = 1e9;
};

struct CollisionPrimitive {
  enum class Kind { sphere, capsule };
  Kind kind = Kind::sphere;
  double radius = 0.0;
  // Body-frame segment; for a sphere both endpoints coincide.
  Eigen::Vector3d a{Eigen::Vector3d::Zero()};
  Eigen::Vector3d b{Eigen::Vector3d::Zero()};

  static CollisionPrimitive sphere(double radius, const Eigen::Vector3d& center);
  static CollisionPrimitive capsule(double radius, const Eigen::Vector3d& a,
                                    const Eigen::Vector3d& b);
};

/// Serial chain of revolute/prismatic joints with a fixed tool frame.
/// Also used to model mobile bases (prismatic/revolute root joints) and
/// articulated environment objects such as drawers.
struct KinematicChain {
  std::vector<Joint> joints;
  Pose tool;  // last-link-to-end-effector transform
  std::vector<std::pair<int, CollisionPrimitive>> collision_bodies;  // (link index, primitive)

  int dof() const { return static_cast<int>(joints.size()); }

  /// Throws std::invalid_argument on non-unit axes (tolerance 1e-9),
  /// inverted limits, or out-of-range collision link indices.
  void validate() const;
};

/// World-frame data for every joint of a chain at configuration q.
struct FkFrames {
  std::vector<Eigen::Vector3d> axis_world;    // motion axis of each joint
  std::vector<Eigen::Vector3d> origin_world;  // point on each joint's axis
  std::vector<Eigen::Isometry3d> link_to_world;
  Eigen::Isometry3d ee;  // tool frame
};

FkFrames fk_frames(const KinematicChain& chain, const Eigen::VectorXd& q);

/// Tool frame in world coordinates.
Pose forward_kinematics(const KinematicChain& chain, const Eigen::VectorXd& q);

/// Geometric Jacobians of the tool frame: linear rows are d(position)/dq,
/// angular rows map joint rates to the world angular velocity.
void geometric_jacobians(const KinematicChain& chain, const FkFrames& frames,
                         Eigen::Matrix3Xd& jac_linear, Eigen::Matrix3Xd& jac_angular);

/// 6 x n Jacobian of the forward-kinematics Pose parameters:
/// rows 0-2 position, rows 3-5 Euler XYZ angles of the tool frame.
Eigen::MatrixXd fk_jacobian(const KinematicChain& chain, const Eigen::VectorXd& q);

/// Jacobian of a world point rigidly attached to link `link`.
Eigen::Matrix3Xd point_jacobian(const KinematicChain& chain, const FkFrames& frames,
                                int link, const Eigen::Vector3d& world_point);

/// State and first derivatives of a frame rigidly attached to the last link
/// (tool frame, drawer handle, ...) at (q, qdot). dv_dq/dw_dq are the
/// configuration partials of the frame twist, d(Jv * qdot)/dq and
/// d(Jw * qdot)/dq, needed by velocity-level residuals.
struct FrameKinematics {
  Eigen::Vector3d p;
  Eigen::Matrix3d R;
  Eigen::Matrix3Xd jac_linear;   // Jv at the frame origin
  Eigen::Matrix3Xd jac_angular;  // Jw
  Eigen::Vector3d v;             // Jv * qdot
  Eigen::Vector3d w;             // Jw * qdot
  Eigen::Matrix3Xd dv_dq;
  Eigen::Matrix3Xd dw_dq;
};

FrameKinematics frame_kinematics(const KinematicChain& chain, const FkFrames& frames,
                                 const Eigen::VectorXd& qdot,
                                 const Eigen::Isometry3d& frame_world);

/// Convenience: frame_kinematics at the tool frame.
FrameKinematics chain_kinematics(const KinematicChain& chain, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& qdot);

/// Two-parameter grasp: longitudinal offset delta along the object's local z
/// axis and rotation theta about it, behind a fixed gripper-convention
/// transform.
struct GraspParams {
  double delta = 0.0;
  double theta = 0.0;
  double delta_min = 0.0;
  double delta_max = 0.0;
  Pose tool_offset;
};

/// Grasp frame for the end effector in world coordinates:
/// Pose(object) * Rz(theta) * Tz(delta) * tool_offset.
Pose grasp_pose(const Pose& object_pose, const GraspParams& grasp);

/// Grasp frame with an extra quarter-turn offset k in {0,1,2,3} about the
/// object's longitudinal axis, applied before theta.
Pose grasp_pose_oriented(const Pose& object_pose, const GraspParams& grasp, int k);

/// Grasp frame together with the exact partials used by the residuals.
///
/// Partials are taken w.r.t. a perturbation (dp, dphi) of the graspable
/// frame, where dphi is a body-frame rotation perturbation
/// (R -> R * exp(skew(dphi))): d p_g = dp + dp_dphi * dphi and
/// d phi_g = dphi_dphi * dphi with phi_g the body perturbation of the grasp
/// rotation. Callers chain dphi from Euler rates (free objects) or from
/// R^T * Jw (kinematically posed handles).
struct GraspFrame {
  Eigen::Vector3d p;
  Eigen::Matrix3d R;
  Eigen::Matrix3d dp_dphi;    // = -R_frame * skew(local offset)
  Eigen::Matrix3d dphi_dphi;  // = A^T, the local grasp rotation transposed
  Eigen::Vector3d dp_ddelta;
  Eigen::Vector3d dp_dtheta;
  Eigen::Vector3d dphi_dtheta;  // dphi_ddelta is identically zero
  // Graspable origin expressed in the end-effector frame under a consistent
  // grasp, used to transport end-effector twists to the graspable origin.
  // Independent of theta and of the quarter-turn index.
  Eigen::Vector3d arm_inverse;
  Eigen::Vector3d darm_inverse_ddelta;
};

GraspFrame grasp_frame(const Eigen::Vector3d& frame_position,
                       const Eigen::Matrix3d& frame_rotation, const GraspParams& grasp,
                       int k = 0);

inline GraspFrame grasp_frame(const Pose& object_pose, const GraspParams& grasp,
                              int k = 0) {
  return grasp_frame(object_pose.position, object_pose.rotation(), grasp, k);
}

}  // namespace itamp
