#include "itamp/pose.hpp"

#include <cmath>

namespace itamp {

namespace {
constexpr double kGimbalEps = 1e-12;
}

Eigen::Matrix3d rot_x(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d R;
  R << 1, 0, 0, 0, c, -s, 0, s, c;
  return R;
}

Eigen::Matrix3d rot_y(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d R;
  R << c, 0, s, 0, 1, 0, -s, 0, c;
  return R;
}

Eigen::Matrix3d rot_z(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d R;
  R << c, -s, 0, s, c, 0, 0, 0, 1;
  return R;
}

Eigen::Matrix3d euler_to_rotation(const Eigen::Vector3d& e) {
  return rot_z(e[2]) * rot_y(e[1]) * rot_x(e[0]);
}

Eigen::Vector3d rotation_to_euler(const Eigen::Matrix3d& R) {
  const double sp = -R(2, 0);
  if (std::abs(sp) >= 1.0 - kGimbalEps) {
    // Gimbal branch: pitch = +-pi/2, roll fixed to zero.
    const double pitch = std::copysign(M_PI / 2.0, sp);
    const double yaw = std::atan2(-R(0, 1), R(1, 1));
    return {0.0, pitch, yaw};
  }
  const double pitch = std::asin(std::clamp(sp, -1.0, 1.0));
  const double roll = std::atan2(R(2, 1), R(2, 2));
  const double yaw = std::atan2(R(1, 0), R(0, 0));
  return {roll, pitch, yaw};
}

Eigen::Matrix3d Pose::rotation() const { return euler_to_rotation(euler); }

Eigen::Isometry3d Pose::transform() const {
  Eigen::Isometry3d T = Eigen::Isometry3d::Identity();
  T.linear() = rotation();
  T.translation() = position;
  return T;
}

Pose Pose::from_transform(const Eigen::Isometry3d& T) {
  return Pose(T.translation(), rotation_to_euler(T.linear()));
}

Pose Pose::compose(const Pose& other) const {
  return from_transform(transform() * other.transform());
}

Pose Pose::inverse() const { return from_transform(transform().inverse()); }

Eigen::Matrix<double, 6, 1> Pose::vector() const {
  Eigen::Matrix<double, 6, 1> v;
  v << position, euler;
  return v;
}

Pose Pose::from_vector(const Eigen::Matrix<double, 6, 1>& v) {
  return Pose(v.head<3>(), v.tail<3>());
}

std::array<Eigen::Matrix3d, 3> rotation_partials(const Eigen::Vector3d& e) {
  const Eigen::Matrix3d Rx = rot_x(e[0]);
  const Eigen::Matrix3d Ry = rot_y(e[1]);
  const Eigen::Matrix3d Rz = rot_z(e[2]);
  const Eigen::Matrix3d Sx = skew(Eigen::Vector3d::UnitX());
  const Eigen::Matrix3d Sy = skew(Eigen::Vector3d::UnitY());
  const Eigen::Matrix3d Sz = skew(Eigen::Vector3d::UnitZ());
  return {Rz * Ry * (Rx * Sx), Rz * (Ry * Sy) * Rx, (Rz * Sz) * Ry * Rx};
}

Eigen::Matrix3d euler_rate_to_world(const Eigen::Vector3d& e) {
  const Eigen::Matrix3d Ry = rot_y(e[1]);
  const Eigen::Matrix3d Rz = rot_z(e[2]);
  Eigen::Matrix3d E;
  E.col(0) = Rz * (Ry * Eigen::Vector3d::UnitX());
  E.col(1) = Rz * Eigen::Vector3d::UnitY();
  E.col(2) = Eigen::Vector3d::UnitZ();
  return E;
}

std::array<Eigen::Matrix3d, 3> euler_rate_to_world_partials(const Eigen::Vector3d& e) {
  const Eigen::Matrix3d Ry = rot_y(e[1]);
  const Eigen::Matrix3d Rz = rot_z(e[2]);
  const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d col0 = Rz * (Ry * Eigen::Vector3d::UnitX());
  const Eigen::Vector3d col1 = Rz * Eigen::Vector3d::UnitY();

  std::array<Eigen::Matrix3d, 3> dE;
  dE[0].setZero();
  dE[1].setZero();
  dE[1].col(0) = -(Rz * (Ry * ez));  // d/dpitch of Rz*Ry*ex
  dE[2].setZero();
  dE[2].col(0) = ez.cross(col0);
  dE[2].col(1) = ez.cross(col1);
  return dE;
}

Eigen::Matrix3d euler_rate_to_body(const Eigen::Vector3d& e) {
  return euler_to_rotation(e).transpose() * euler_rate_to_world(e);
}

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d S;
  S << 0, -v[2], v[1], v[2], 0, -v[0], -v[1], v[0], 0;
  return S;
}

Eigen::Vector3d unskew(const Eigen::Matrix3d& S) {
  return {S(2, 1), S(0, 2), S(1, 0)};
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& phi) {
  const double angle = phi.norm();
  if (angle < 1e-12) {
    return Eigen::Matrix3d::Identity() + skew(phi);
  }
  return Eigen::AngleAxisd(angle, phi / angle).toRotationMatrix();
}

Eigen::Vector3d log_so3(const Eigen::Matrix3d& R) {
  const double cos_angle = std::clamp((R.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double angle = std::acos(cos_angle);
  const Eigen::Vector3d v = unskew(0.5 * (R - R.transpose()));

  if (angle < 1e-9) {
    return v;  // first-order: sin(angle) ~= angle
  }
  if (angle > M_PI - 1e-6) {
    // Near pi the skew part degenerates; recover the axis from the
    // symmetric part R ~= 2*a*a^T - I and fix signs from the largest entry.
    Eigen::Vector3d a;
    const Eigen::Matrix3d S = 0.5 * (R + Eigen::Matrix3d::Identity());
    int k;
    S.diagonal().maxCoeff(&k);
    a[k] = std::sqrt(std::max(S(k, k), 0.0));
    for (int i = 0; i < 3; ++i) {
      if (i != k) a[i] = S(k, i) / a[k];
    }
    a.normalize();
    // Orient the axis consistently with the (small) skew part when possible.
    if (v.dot(a) < 0.0) a = -a;
    return angle * a;
  }
  return (angle / std::sin(angle)) * v;  // v = sin(angle) * axis
}

Eigen::Matrix3d so3_right_jacobian_inverse(const Eigen::Vector3d& phi) {
  const double angle = phi.norm();
  const Eigen::Matrix3d S = skew(phi);
  double coeff;
  if (angle < 1e-4) {
    coeff = 1.0 / 12.0 + angle * angle / 720.0;
  } else {
    coeff = 1.0 / (angle * angle) -
            (1.0 + std::cos(angle)) / (2.0 * angle * std::sin(angle));
  }
  return Eigen::Matrix3d::Identity() + 0.5 * S + coeff * (S * S);
}

}  // namespace itamp
