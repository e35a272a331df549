#include "itamp/kinematics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace itamp {

CollisionPrimitive CollisionPrimitive::sphere(double radius, const Eigen::Vector3d& center) {
  CollisionPrimitive p;
  p.kind = Kind::sphere;
  p.radius = radius;
  p.a = center;
  p.b = center;
  return p;
}

CollisionPrimitive CollisionPrimitive::capsule(double radius, const Eigen::Vector3d& a,
                                               const Eigen::Vector3d& b) {
  CollisionPrimitive p;
  p.kind = Kind::capsule;
  p.radius = radius;
  p.a = a;
  p.b = b;
  return p;
}

void KinematicChain::validate() const {
  for (size_t k = 0; k < joints.size(); ++k) {
    const Joint& j = joints[k];
    if (std::abs(j.axis.norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("joint " + std::to_string(k) + ": axis is not unit length");
    }
    if (j.lower > j.upper) {
      throw std::invalid_argument("joint " + std::to_string(k) + ": limits.min > limits.max");
    }
  }
  for (const auto& [link, prim] : collision_bodies) {
    if (link < 0 || link >= dof()) {
      throw std::invalid_argument("collision body attached to invalid link " +
                                  std::to_string(link));
    }
    if (prim.radius <= 0.0) {
      throw std::invalid_argument("collision primitive radius must be positive");
    }
  }
}

FkFrames fk_frames(const KinematicChain& chain, const Eigen::VectorXd& q) {
  const int n = chain.dof();
  if (q.size() != n) {
    throw std::invalid_argument("forward kinematics: expected " + std::to_string(n) +
                                " joint values, got " + std::to_string(q.size()));
  }
  FkFrames f;
  f.axis_world.resize(n);
  f.origin_world.resize(n);
  f.link_to_world.resize(n);

  Eigen::Isometry3d parent = Eigen::Isometry3d::Identity();
  for (int k = 0; k < n; ++k) {
    const Joint& joint = chain.joints[k];
    const Eigen::Isometry3d pre = parent * joint.origin.transform();
    const Eigen::Vector3d z = parent.linear() * joint.axis;  // axis given in parent frame
    const Eigen::Vector3d o = pre.translation();

    Eigen::Isometry3d link = Eigen::Isometry3d::Identity();
    if (joint.kind == JointKind::revolute) {
      link.linear() = Eigen::AngleAxisd(q[k], z).toRotationMatrix() * pre.linear();
      link.translation() = o;
    } else {
      link.linear() = pre.linear();
      link.translation() = o + q[k] * z;
    }

    f.axis_world[k] = z;
    f.origin_world[k] = o;
    f.link_to_world[k] = link;
    parent = link;
  }
  f.ee = parent * chain.tool.transform();
  return f;
}

Pose forward_kinematics(const KinematicChain& chain, const Eigen::VectorXd& q) {
  return Pose::from_transform(fk_frames(chain, q).ee);
}

void geometric_jacobians(const KinematicChain& chain, const FkFrames& frames,
                         Eigen::Matrix3Xd& jac_linear, Eigen::Matrix3Xd& jac_angular) {
  const int n = chain.dof();
  jac_linear.resize(3, n);
  jac_angular.resize(3, n);
  const Eigen::Vector3d p = frames.ee.translation();
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector3d& z = frames.axis_world[k];
    if (chain.joints[k].kind == JointKind::revolute) {
      jac_linear.col(k) = z.cross(p - frames.origin_world[k]);
      jac_angular.col(k) = z;
    } else {
      jac_linear.col(k) = z;
      jac_angular.col(k).setZero();
    }
  }
}

Eigen::MatrixXd fk_jacobian(const KinematicChain& chain, const Eigen::VectorXd& q) {
  const FkFrames frames = fk_frames(chain, q);
  Eigen::Matrix3Xd jv, jw;
  geometric_jacobians(chain, frames, jv, jw);

  Eigen::MatrixXd jac(6, chain.dof());
  jac.topRows<3>() = jv;
  // Euler-angle rows: de/dq = E_w(e)^-1 * Jw. Inherits the gimbal
  // singularity of the parameterization at pitch = +-pi/2.
  const Eigen::Vector3d e = rotation_to_euler(frames.ee.linear());
  jac.bottomRows<3>() = euler_rate_to_world(e).partialPivLu().solve(jw);
  return jac;
}

Eigen::Matrix3Xd point_jacobian(const KinematicChain& chain, const FkFrames& frames,
                                int link, const Eigen::Vector3d& world_point) {
  const int n = chain.dof();
  Eigen::Matrix3Xd jac = Eigen::Matrix3Xd::Zero(3, n);
  for (int k = 0; k <= link && k < n; ++k) {
    const Eigen::Vector3d& z = frames.axis_world[k];
    if (chain.joints[k].kind == JointKind::revolute) {
      jac.col(k) = z.cross(world_point - frames.origin_world[k]);
    } else {
      jac.col(k) = z;
    }
  }
  return jac;
}

FrameKinematics frame_kinematics(const KinematicChain& chain, const FkFrames& frames,
                                 const Eigen::VectorXd& qdot,
                                 const Eigen::Isometry3d& frame_world) {
  const int n = chain.dof();
  if (qdot.size() != n) {
    throw std::invalid_argument("frame_kinematics: qdot dimension mismatch");
  }
  FrameKinematics k;
  k.p = frame_world.translation();
  k.R = frame_world.linear();
  k.jac_linear.resize(3, n);
  k.jac_angular.resize(3, n);
  for (int a = 0; a < n; ++a) {
    const Eigen::Vector3d& z = frames.axis_world[a];
    if (chain.joints[a].kind == JointKind::revolute) {
      k.jac_linear.col(a) = z.cross(k.p - frames.origin_world[a]);
      k.jac_angular.col(a) = z;
    } else {
      k.jac_linear.col(a) = z;
      k.jac_angular.col(a).setZero();
    }
  }
  k.v = k.jac_linear * qdot;
  k.w = k.jac_angular * qdot;

  k.dv_dq = Eigen::Matrix3Xd::Zero(3, n);
  k.dw_dq = Eigen::Matrix3Xd::Zero(3, n);

  const auto rev = [&](int i) { return chain.joints[i].kind == JointKind::revolute; };
  const Eigen::Vector3d p = k.p;

  for (int b = 0; b < n; ++b) {
    const Eigen::Vector3d& zb = frames.axis_world[b];
    const Eigen::Vector3d dp_b = k.jac_linear.col(b);

    if (rev(b)) {
      Eigen::Vector3d w_after = Eigen::Vector3d::Zero();
      for (int a = b + 1; a < n; ++a) {
        if (rev(a)) w_after += qdot[a] * frames.axis_world[a];
      }
      k.dw_dq.col(b) = zb.cross(w_after);

      Eigen::Vector3d acc = Eigen::Vector3d::Zero();
      for (int a = 0; a < n; ++a) {
        const Eigen::Vector3d& za = frames.axis_world[a];
        if (a <= b) {
          if (rev(a)) acc += qdot[a] * za.cross(dp_b);
        } else {
          const Eigen::Vector3d dz = zb.cross(za);
          if (rev(a)) {
            const Eigen::Vector3d doa =
                zb.cross(frames.origin_world[a] - frames.origin_world[b]);
            acc += qdot[a] * (dz.cross(p - frames.origin_world[a]) + za.cross(dp_b - doa));
          } else {
            acc += qdot[a] * dz;
          }
        }
      }
      k.dv_dq.col(b) = acc;
    } else {
      // Prismatic joints rotate nothing downstream: only upstream revolute
      // columns of Jv pick up the translated frame origin.
      Eigen::Vector3d acc = Eigen::Vector3d::Zero();
      for (int a = 0; a <= b; ++a) {
        if (rev(a)) acc += qdot[a] * frames.axis_world[a].cross(zb);
      }
      k.dv_dq.col(b) = acc;
    }
  }
  return k;
}

FrameKinematics chain_kinematics(const KinematicChain& chain, const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& qdot) {
  const FkFrames frames = fk_frames(chain, q);
  return frame_kinematics(chain, frames, qdot, frames.ee);
}

Pose grasp_pose(const Pose& object_pose, const GraspParams& grasp) {
  return grasp_pose_oriented(object_pose, grasp, 0);
}

Pose grasp_pose_oriented(const Pose& object_pose, const GraspParams& grasp, int k) {
  if (k < 0 || k > 3) {
    throw std::invalid_argument("grasp orientation index must be in {0,1,2,3}");
  }
  Eigen::Isometry3d local = Eigen::Isometry3d::Identity();
  local.linear() = rot_z(grasp.theta + k * M_PI / 2.0);
  local.translation() = Eigen::Vector3d(0, 0, grasp.delta);
  return Pose::from_transform(object_pose.transform() * local * grasp.tool_offset.transform());
}

GraspFrame grasp_frame(const Eigen::Vector3d& frame_position,
                       const Eigen::Matrix3d& frame_rotation, const GraspParams& grasp,
                       int k) {
  if (k < 0 || k > 3) {
    throw std::invalid_argument("grasp orientation index must be in {0,1,2,3}");
  }
  GraspFrame f;
  const Eigen::Matrix3d R_tool = grasp.tool_offset.rotation();
  const Eigen::Vector3d t_tool = grasp.tool_offset.position;
  const double angle = grasp.theta + k * M_PI / 2.0;
  const Eigen::Matrix3d Rz = rot_z(angle);
  const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ();

  // Local offset a(delta, theta) and rotation A(theta) of the grasp frame
  // relative to the graspable: g = T_frame * [A | a].
  const Eigen::Vector3d a = grasp.delta * ez + Rz * t_tool;
  const Eigen::Matrix3d A = Rz * R_tool;

  f.p = frame_position + frame_rotation * a;
  f.R = frame_rotation * A;
  f.dp_dphi = -frame_rotation * skew(a);
  f.dphi_dphi = A.transpose();
  f.dp_ddelta = frame_rotation * ez;
  f.dp_dtheta = frame_rotation * (Rz * skew(ez) * t_tool);
  f.dphi_dtheta = R_tool.transpose() * ez;

  f.arm_inverse = -R_tool.transpose() * (grasp.delta * ez + t_tool);
  f.darm_inverse_ddelta = -R_tool.transpose() * ez;
  return f;
}

}  // namespace itamp
