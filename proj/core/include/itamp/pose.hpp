#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <array>

namespace itamp {

/// Rigid-body pose: position plus orientation as fixed-axis XYZ Euler angles.
///
/// The rotation matrix is R(e) = Rz(e2) * Ry(e1) * Rx(e0), i.e. rotations
/// about the fixed world X, Y, Z axes applied in that order. The conversion
/// to a matrix is total. The conversion from a matrix hits the usual gimbal
/// ambiguity at pitch = +-pi/2; that branch is resolved by setting roll = 0
/// and folding the remaining freedom into yaw.
struct Pose {
  Eigen::Vector3d position{Eigen::Vector3d::Zero()};
  Eigen::Vector3d euler{Eigen::Vector3d::Zero()};  // (roll, pitch, yaw), radians

  Pose() = default;
  Pose(const Eigen::Vector3d& p, const Eigen::Vector3d& e) : position(p), euler(e) {}

  Eigen::Matrix3d rotation() const;
  Eigen::Isometry3d transform() const;

  static Pose from_transform(const Eigen::Isometry3d& T);

  /// Composition of the underlying rigid transforms (this * other).
  Pose compose(const Pose& other) const;
  Pose inverse() const;

  /// Pose as a flat 6-vector (position, euler).
  Eigen::Matrix<double, 6, 1> vector() const;
  static Pose from_vector(const Eigen::Matrix<double, 6, 1>& v);
};

Eigen::Matrix3d rot_x(double a);
Eigen::Matrix3d rot_y(double a);
Eigen::Matrix3d rot_z(double a);

/// Rotation matrix for fixed-axis XYZ Euler angles.
Eigen::Matrix3d euler_to_rotation(const Eigen::Vector3d& e);

/// Euler angles for a rotation matrix (gimbal branch: roll = 0).
Eigen::Vector3d rotation_to_euler(const Eigen::Matrix3d& R);

/// Partial derivatives dR/de_k, k = 0, 1, 2.
std::array<Eigen::Matrix3d, 3> rotation_partials(const Eigen::Vector3d& e);

/// E_w(e): maps Euler-angle rates to the world-frame angular velocity,
/// skew(E_w * de/dt) = dR/dt * R^T. Singular at pitch = +-pi/2.
Eigen::Matrix3d euler_rate_to_world(const Eigen::Vector3d& e);

/// Partials dE_w/de_k (dE_w/de_0 is identically zero).
std::array<Eigen::Matrix3d, 3> euler_rate_to_world_partials(const Eigen::Vector3d& e);

/// Body-frame angular velocity map, R^T * E_w.
Eigen::Matrix3d euler_rate_to_body(const Eigen::Vector3d& e);

Eigen::Matrix3d skew(const Eigen::Vector3d& v);
Eigen::Vector3d unskew(const Eigen::Matrix3d& S);

/// SO(3) exponential map (axis-angle vector to rotation matrix).
Eigen::Matrix3d exp_so3(const Eigen::Vector3d& phi);

/// SO(3) logarithm; returns the axis-angle vector with angle in [0, pi].
Eigen::Vector3d log_so3(const Eigen::Matrix3d& R);

/// Inverse of the right Jacobian of SO(3):
/// log(exp(phi) * exp(d)) ~= phi + right_jacobian_inverse(phi) * d.
Eigen::Matrix3d so3_right_jacobian_inverse(const Eigen::Vector3d& phi);

}  // namespace itamp
