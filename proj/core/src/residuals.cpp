#include "itamp/residuals.hpp"

#include <cmath>
#include <utility>

#include "itamp/collision.hpp"
#include "itamp/kinematics.hpp"
#include "itamp/trajectory.hpp"

namespace itamp {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

int schedule_segment(const VariableLayout& l, double t) {
  const int S = l.segment_count();
  return std::min(static_cast<int>(t * S / l.horizon()), S - 1);
}

Eigen::VectorXd manip_values(const Eigen::VectorXd& x, const VariableLayout& l, int i,
                             const HermiteBasis& b) {
  const int n = l.manipulator_dof(i);
  const int s = b.segment;
  Eigen::VectorXd q(n);
  for (int k = 0; k < n; ++k) {
    q[k] = b.value[0] * x[l.joint_value(i, s, k)] + b.value[1] * x[l.joint_value(i, s + 1, k)] +
           b.value[2] * x[l.joint_tangent(i, s, k)] +
           b.value[3] * x[l.joint_tangent(i, s + 1, k)];
  }
  return q;
}

Eigen::VectorXd manip_rates(const Eigen::VectorXd& x, const VariableLayout& l, int i,
                            const HermiteBasis& b) {
  const int n = l.manipulator_dof(i);
  const int s = b.segment;
  Eigen::VectorXd qd(n);
  for (int k = 0; k < n; ++k) {
    qd[k] = b.velocity[0] * x[l.joint_value(i, s, k)] +
            b.velocity[1] * x[l.joint_value(i, s + 1, k)] +
            b.velocity[2] * x[l.joint_tangent(i, s, k)] +
            b.velocity[3] * x[l.joint_tangent(i, s + 1, k)];
  }
  return qd;
}

Vector6d object_values(const Eigen::VectorXd& x, const VariableLayout& l, int j,
                       const HermiteBasis& b) {
  const int s = b.segment;
  Vector6d p;
  for (int c = 0; c < 6; ++c) {
    p[c] = b.value[0] * x[l.object_value(j, s, c)] + b.value[1] * x[l.object_value(j, s + 1, c)] +
           b.value[2] * x[l.object_tangent(j, s, c)] +
           b.value[3] * x[l.object_tangent(j, s + 1, c)];
  }
  return p;
}

Vector6d object_rates(const Eigen::VectorXd& x, const VariableLayout& l, int j,
                      const HermiteBasis& b) {
  const int s = b.segment;
  Vector6d p;
  for (int c = 0; c < 6; ++c) {
    p[c] = b.velocity[0] * x[l.object_value(j, s, c)] +
           b.velocity[1] * x[l.object_value(j, s + 1, c)] +
           b.velocity[2] * x[l.object_tangent(j, s, c)] +
           b.velocity[3] * x[l.object_tangent(j, s + 1, c)];
  }
  return p;
}

/// Scatters d(residual)/d(sampled value, rate, acceleration) of one spline
/// coordinate into the four nodal variables of the containing segment.
struct SplineScatter {
  const VariableLayout* layout;
  const HermiteBasis* basis;
  bool is_object;
  int entity;

  void add(Triplets& out, int row, int coord, double d_value, double d_rate,
           double d_accel = 0.0) const {
    const int s = basis->segment;
    for (int m = 0; m < 4; ++m) {
      const int node = s + (m % 2);
      const bool tangent = m >= 2;
      const double coef = d_value * basis->value[m] + d_rate * basis->velocity[m] +
                          d_accel * basis->acceleration[m];
      int idx;
      if (is_object) {
        idx = tangent ? layout->object_tangent(entity, node, coord)
                      : layout->object_value(entity, node, coord);
      } else {
        idx = tangent ? layout->joint_tangent(entity, node, coord)
                      : layout->joint_value(entity, node, coord);
      }
      out.emplace_back(row, idx, coef);
    }
  }
};

GraspParams pair_grasp_params(const Scenario& sc, const VariableLayout& l,
                              const Eigen::VectorXd& x, int pair) {
  const GraspPair& pr = l.pairs()[pair];
  GraspParams g;
  g.delta = x[l.grasp_delta(pair)];
  g.theta = x[l.grasp_theta(pair)];
  if (pr.graspable.is_object) {
    const ObjectSpec& o = sc.objects[pr.graspable.index];
    g.delta_min = o.delta_min;
    g.delta_max = o.delta_max;
    g.tool_offset = o.grasp_tool;
  }
  return g;
}

Eigen::Matrix3Xd angular_jacobian(const KinematicChain& chain, const FkFrames& frames) {
  const int n = chain.dof();
  Eigen::Matrix3Xd jw = Eigen::Matrix3Xd::Zero(3, n);
  for (int k = 0; k < n; ++k) {
    if (chain.joints[k].kind == JointKind::revolute) jw.col(k) = frames.axis_world[k];
  }
  return jw;
}

/// Position-level state of an interactive manipulator's handle frame.
struct HandleFrame {
  FkFrames frames;
  Eigen::Isometry3d iso;
  Eigen::Matrix3Xd jac_linear;    // of the handle origin
  Eigen::Matrix3Xd body_rot_jac;  // R^T * Jw
};

HandleFrame handle_frame(const Scenario& sc, const VariableLayout& l,
                         const Eigen::VectorXd& x, int manipulator,
                         const HermiteBasis& b) {
  const ManipulatorSpec& m = sc.manipulators[manipulator];
  HandleFrame h;
  const Eigen::VectorXd q = manip_values(x, l, manipulator, b);
  h.frames = fk_frames(m.chain, q);
  h.iso = h.frames.link_to_world.back() * m.handle.transform();
  h.jac_linear = point_jacobian(m.chain, h.frames, m.chain.dof() - 1, h.iso.translation());
  h.body_rot_jac = h.iso.linear().transpose() * angular_jacobian(m.chain, h.frames);
  return h;
}

// ---------------------------------------------------------------------------

class BoundaryBlock : public ResidualBlock {
 public:
  // Pins node-0 values/tangents of one trajectory, and for objects also the
  // final node to the goal pose with zero tangent.
  BoundaryBlock(const Scenario& sc, const VariableLayout& l, bool is_object, int entity,
                double weight)
      : ResidualBlock("boundary", BlockKind::equality, weight,
                      is_object ? 24 : 4 * l.manipulator_dof(entity)),
        sc_(&sc),
        l_(&l),
        is_object_(is_object),
        entity_(entity) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    const VariableLayout& l = *l_;
    int row = row0;
    if (is_object_) {
      const int j = entity_;
      const Vector6d start = sc_->objects[j].start_pose.vector();
      const Vector6d goal = sc_->objects[j].goal_pose.vector();
      const int last = l.node_count() - 1;
      for (int c = 0; c < 6; ++c) {
        r[row - row0] = x[l.object_value(j, 0, c)] - start[c];
        jac.emplace_back(row++, l.object_value(j, 0, c), 1.0);
      }
      for (int c = 0; c < 6; ++c) {
        r[row - row0] = x[l.object_tangent(j, 0, c)];
        jac.emplace_back(row++, l.object_tangent(j, 0, c), 1.0);
      }
      for (int c = 0; c < 6; ++c) {
        r[row - row0] = x[l.object_value(j, last, c)] - goal[c];
        jac.emplace_back(row++, l.object_value(j, last, c), 1.0);
      }
      for (int c = 0; c < 6; ++c) {
        r[row - row0] = x[l.object_tangent(j, last, c)];
        jac.emplace_back(row++, l.object_tangent(j, last, c), 1.0);
      }
    } else {
      const int i = entity_;
      const Eigen::VectorXd& rest = sc_->manipulators[i].rest_configuration;
      for (int k = 0; k < l.manipulator_dof(i); ++k) {
        r[row - row0] = x[l.joint_value(i, 0, k)] - rest[k];
        jac.emplace_back(row++, l.joint_value(i, 0, k), 1.0);
      }
      for (int k = 0; k < l.manipulator_dof(i); ++k) {
        r[row - row0] = x[l.joint_tangent(i, 0, k)];
        jac.emplace_back(row++, l.joint_tangent(i, 0, k), 1.0);
      }
    }
  }

 private:
  const Scenario* sc_;
  const VariableLayout* l_;
  bool is_object_;
  int entity_;
};

class PositionBlock : public ResidualBlock {
 public:
  PositionBlock(const Scenario& sc, const VariableLayout& l, int pair,
                std::vector<double> times, double weight, bool oriented)
      : ResidualBlock("position", BlockKind::equality, weight,
                      (oriented ? 24 : 6) * static_cast<int>(times.size()),
                      times),
        sc_(&sc),
        l_(&l),
        pair_(pair),
        oriented_(oriented) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    const VariableLayout& l = *l_;
    const GraspPair& pr = l.pairs()[pair_];
    const int i = pr.manipulator;
    const KinematicChain& chain = sc_->manipulators[i].chain;

    int row = row0;
    for (double t : sample_times()) {
      const HermiteBasis b = hermite_basis(l.node_count(), l.horizon(), t);
      const int seg = schedule_segment(l, t);
      const double w = x[l.weight(pair_, seg)];
      const GraspParams params = pair_grasp_params(*sc_, l, x, pair_);

      const Eigen::VectorXd q = manip_values(x, l, i, b);
      const FkFrames frames = fk_frames(chain, q);
      Eigen::Matrix3Xd jv, jw;
      geometric_jacobians(chain, frames, jv, jw);
      const Eigen::Vector3d p_ee = frames.ee.translation();
      const Eigen::Matrix3d R_ee = frames.ee.linear();
      const Eigen::Matrix3Xd ee_body_rot = R_ee.transpose() * jw;

      // Graspable frame and its tangent chains.
      Eigen::Vector3d p_f;
      Eigen::Matrix3d R_f;
      HandleFrame handle;
      Eigen::Matrix3d E_body;  // object case: body Euler-rate map
      const bool is_object = pr.graspable.is_object;
      Vector6d obj_pose = Vector6d::Zero();
      if (is_object) {
        obj_pose = object_values(x, l, pr.graspable.index, b);
        p_f = obj_pose.head<3>();
        R_f = euler_to_rotation(obj_pose.tail<3>());
        E_body = euler_rate_to_body(obj_pose.tail<3>());
      } else {
        handle = handle_frame(*sc_, l, x, pr.graspable.index, b);
        p_f = handle.iso.translation();
        R_f = handle.iso.linear();
      }

      const SplineScatter manip_sc{&l, &b, false, i};
      const SplineScatter obj_sc{&l, &b, true, pr.graspable.index};
      const SplineScatter handle_sc{&l, &b, false, pr.graspable.index};

      const int kmax = oriented_ ? 4 : 1;
      for (int k = 0; k < kmax; ++k) {
        const GraspFrame f = grasp_frame(p_f, R_f, params, k);
        const Eigen::Vector3d phi = log_so3(f.R.transpose() * R_ee);
        const Eigen::Matrix3d Jr_inv = so3_right_jacobian_inverse(phi);
        const Eigen::Matrix3d Jl_inv = Jr_inv.transpose();

        double gamma = 1.0;
        if (oriented_) gamma = x[l.orientation_weight(pair_, k, seg)];
        const double factor = w * gamma;

        Vector6d diff;
        diff << p_ee - f.p, phi;
        for (int c = 0; c < 6; ++c) r[row - row0 + c] = factor * diff[c];

        // association weight (and orientation weight)
        for (int c = 0; c < 6; ++c) {
          jac.emplace_back(row + c, l.weight(pair_, seg), gamma * diff[c]);
          if (oriented_) {
            jac.emplace_back(row + c, l.orientation_weight(pair_, k, seg), w * diff[c]);
          }
        }

        // manipulator joints
        const Eigen::Matrix3Xd rot_rows = Jr_inv * ee_body_rot;
        for (int col = 0; col < chain.dof(); ++col) {
          for (int c = 0; c < 3; ++c) {
            manip_sc.add(jac, row + c, col, factor * jv(c, col), 0.0);
            manip_sc.add(jac, row + 3 + c, col, factor * rot_rows(c, col), 0.0);
          }
        }

        // graspable frame
        if (is_object) {
          for (int c = 0; c < 3; ++c) {
            obj_sc.add(jac, row + c, c, -factor, 0.0);  // position parameters
          }
          for (int ec = 0; ec < 3; ++ec) {
            const Eigen::Vector3d b_c = E_body.col(ec);
            const Eigen::Vector3d dpos = f.dp_dphi * b_c;
            const Eigen::Vector3d drot = Jl_inv * (f.dphi_dphi * b_c);
            for (int c = 0; c < 3; ++c) {
              obj_sc.add(jac, row + c, 3 + ec, -factor * dpos[c], 0.0);
              obj_sc.add(jac, row + 3 + c, 3 + ec, -factor * drot[c], 0.0);
            }
          }
        } else {
          const int g = pr.graspable.index;
          const Eigen::Matrix3Xd dpos =
              handle.jac_linear + f.dp_dphi * handle.body_rot_jac;
          const Eigen::Matrix3Xd drot = Jl_inv * (f.dphi_dphi * handle.body_rot_jac);
          for (int col = 0; col < sc_->manipulators[g].chain.dof(); ++col) {
            for (int c = 0; c < 3; ++c) {
              handle_sc.add(jac, row + c, col, -factor * dpos(c, col), 0.0);
              handle_sc.add(jac, row + 3 + c, col, -factor * drot(c, col), 0.0);
            }
          }
        }

        // grasp parameters
        const Eigen::Vector3d dtheta_rot = Jl_inv * f.dphi_dtheta;
        for (int c = 0; c < 3; ++c) {
          jac.emplace_back(row + c, l.grasp_delta(pair_), -factor * f.dp_ddelta[c]);
          jac.emplace_back(row + c, l.grasp_theta(pair_), -factor * f.dp_dtheta[c]);
          jac.emplace_back(row + 3 + c, l.grasp_theta(pair_), -factor * dtheta_rot[c]);
        }

        row += 6;
      }
    }
  }

 private:
  const Scenario* sc_;
  const VariableLayout* l_;
  int pair_;
  bool oriented_;
};

class VelocityBlock : public ResidualBlock {
 public:
  VelocityBlock(const Scenario& sc, const VariableLayout& l, GraspableRef graspable,
                std::vector<double> times, double weight)
      : ResidualBlock("velocity", BlockKind::equality, weight,
                      6 * static_cast<int>(times.size()), times),
        sc_(&sc),
        l_(&l),
        graspable_(graspable) {
    for (int p = 0; p < static_cast<int>(l.pairs().size()); ++p) {
      if (l.pairs()[p].graspable == graspable_) holders_.push_back(p);
    }
  }

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    const VariableLayout& l = *l_;
    int row = row0;
    for (double t : sample_times()) {
      const HermiteBasis b = hermite_basis(l.node_count(), l.horizon(), t);
      const int seg = schedule_segment(l, t);

      Vector6d twist = Vector6d::Zero();

      // Graspable side.
      if (graspable_.is_object) {
        const int j = graspable_.index;
        const Vector6d pose = object_values(x, l, j, b);
        const Vector6d rate = object_rates(x, l, j, b);
        const Eigen::Matrix3d E = euler_rate_to_world(pose.tail<3>());
        const auto dE = euler_rate_to_world_partials(pose.tail<3>());
        twist.head<3>() = rate.head<3>();
        twist.tail<3>() = E * rate.tail<3>();

        const SplineScatter sc{&l, &b, true, j};
        for (int c = 0; c < 3; ++c) sc.add(jac, row + c, c, 0.0, 1.0);
        for (int ec = 0; ec < 3; ++ec) {
          const Eigen::Vector3d dvalue = dE[ec] * rate.tail<3>();
          for (int c = 0; c < 3; ++c) {
            sc.add(jac, row + 3 + c, 3 + ec, dvalue[c], E(c, ec));
          }
        }
      } else {
        const int g = graspable_.index;
        const ManipulatorSpec& m = sc_->manipulators[g];
        const Eigen::VectorXd q = manip_values(x, l, g, b);
        const Eigen::VectorXd qd = manip_rates(x, l, g, b);
        const FkFrames frames = fk_frames(m.chain, q);
        const Eigen::Isometry3d iso = frames.link_to_world.back() * m.handle.transform();
        const FrameKinematics fk = frame_kinematics(m.chain, frames, qd, iso);
        twist.head<3>() = fk.v;
        twist.tail<3>() = fk.w;

        const SplineScatter sc{&l, &b, false, g};
        for (int col = 0; col < m.chain.dof(); ++col) {
          for (int c = 0; c < 3; ++c) {
            sc.add(jac, row + c, col, fk.dv_dq(c, col), fk.jac_linear(c, col));
            sc.add(jac, row + 3 + c, col, fk.dw_dq(c, col), fk.jac_angular(c, col));
          }
        }
      }

      // Holder side: subtract the weighted transported end-effector twists.
      for (int p : holders_) {
        const GraspPair& pr = l.pairs()[p];
        const int i = pr.manipulator;
        const KinematicChain& chain = sc_->manipulators[i].chain;
        const double w = x[l.weight(p, seg)];
        const GraspParams params = pair_grasp_params(*sc_, l, x, p);

        const Eigen::VectorXd q = manip_values(x, l, i, b);
        const Eigen::VectorXd qd = manip_rates(x, l, i, b);
        const FkFrames frames = fk_frames(chain, q);
        const FrameKinematics fk = frame_kinematics(chain, frames, qd, frames.ee);

        const Eigen::Matrix3d R_tool = params.tool_offset.rotation();
        const Eigen::Vector3d arm_local =
            -R_tool.transpose() * (params.delta * Eigen::Vector3d::UnitZ() +
                                   params.tool_offset.position);
        const Eigen::Vector3d darm_local = -R_tool.transpose() * Eigen::Vector3d::UnitZ();
        const Eigen::Vector3d c_arm = fk.R * arm_local;

        Vector6d transported;
        transported << fk.v + fk.w.cross(c_arm), fk.w;
        twist -= w * transported;

        const SplineScatter sc{&l, &b, false, i};
        for (int col = 0; col < chain.dof(); ++col) {
          const Eigen::Vector3d dc = fk.jac_angular.col(col).cross(c_arm);
          const Eigen::Vector3d dlin_value =
              fk.dv_dq.col(col) + fk.dw_dq.col(col).cross(c_arm) + fk.w.cross(dc);
          const Eigen::Vector3d dlin_rate =
              fk.jac_linear.col(col) + fk.jac_angular.col(col).cross(c_arm);
          for (int c = 0; c < 3; ++c) {
            sc.add(jac, row + c, col, -w * dlin_value[c], -w * dlin_rate[c]);
            sc.add(jac, row + 3 + c, col, -w * fk.dw_dq(c, col),
                   -w * fk.jac_angular(c, col));
          }
        }
        const Eigen::Vector3d ddelta = fk.w.cross(fk.R * darm_local);
        for (int c = 0; c < 3; ++c) {
          jac.emplace_back(row + c, l.grasp_delta(p), -w * ddelta[c]);
          jac.emplace_back(row + c, l.weight(p, seg), -transported[c]);
          jac.emplace_back(row + 3 + c, l.weight(p, seg), -transported[3 + c]);
        }
      }

      for (int c = 0; c < 6; ++c) r[row - row0 + c] = twist[c];
      row += 6;
    }
  }

 private:
  const Scenario* sc_;
  const VariableLayout* l_;
  GraspableRef graspable_;
  std::vector<int> holders_;
};

class RestBlock : public ResidualBlock {
 public:
  RestBlock(const Scenario& sc, const VariableLayout& l, int object, int rest_index,
            std::vector<double> times, double weight)
      : ResidualBlock("rest", BlockKind::equality, weight,
                      2 * static_cast<int>(times.size()), times),
        sc_(&sc),
        l_(&l),
        object_(object),
        rest_(rest_index) {
    for (int p = 0; p < static_cast<int>(l.pairs().size()); ++p) {
      if (l.pairs()[p].graspable == GraspableRef{true, object}) holders_.push_back(p);
    }
  }

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    const VariableLayout& l = *l_;
    const RestPose& rp = sc_->objects[object_].rest_poses[rest_];
    const Eigen::Vector3d up = Eigen::Vector3d::UnitZ();

    int row = row0;
    for (double t : sample_times()) {
      const HermiteBasis b = hermiteBasisAt(t);
      const int seg = schedule_segment(l, t);
      const Vector6d pose = object_values(x, l, object_, b);
      const Eigen::Matrix3d R = euler_to_rotation(pose.tail<3>());
      const auto dR = rotation_partials(pose.tail<3>());

      double held = 0.0;
      for (int p : holders_) held += x[l.weight(p, seg)];
      const double w_hat = 1.0 - held;
      const double rho = x[l.rest_weight(object_, rest_, seg)];

      const double align = up.dot(R * rp.axis) - 1.0;
      const double elev = pose[2] - rp.elevation;

      r[row - row0] = w_hat * rho * align;
      r[row - row0 + 1] = w_hat * rho * elev;

      const SplineScatter sc{&l, &b, true, object_};
      for (int ec = 0; ec < 3; ++ec) {
        sc.add(jac, row, 3 + ec, w_hat * rho * up.dot(dR[ec] * rp.axis), 0.0);
      }
      sc.add(jac, row + 1, 2, w_hat * rho, 0.0);

      for (int p : holders_) {
        jac.emplace_back(row, l.weight(p, seg), -rho * align);
        jac.emplace_back(row + 1, l.weight(p, seg), -rho * elev);
      }
      jac.emplace_back(row, l.rest_weight(object_, rest_, seg), w_hat * align);
      jac.emplace_back(row + 1, l.rest_weight(object_, rest_, seg), w_hat * elev);

      row += 2;
    }
  }

 private:
  HermiteBasis hermiteBasisAt(double t) const {
    return hermite_basis(l_->node_count(), l_->horizon(), t);
  }

  const Scenario* sc_;
  const VariableLayout* l_;
  int object_;
  int rest_;
  std::vector<int> holders_;
};

class RestPartitionBlock : public ResidualBlock {
 public:
  RestPartitionBlock(const VariableLayout& l, int object, std::vector<double> times,
                     double weight)
      : ResidualBlock("rest_partition", BlockKind::equality, weight,
                      static_cast<int>(times.size()), times),
        l_(&l),
        object_(object) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    const VariableLayout& l = *l_;
    int row = row0;
    for (double t : sample_times()) {
      const int seg = schedule_segment(l, t);
      double sum = 0.0;
      for (int d = 0; d < l.rest_pose_count(object_); ++d) {
        sum += x[l.rest_weight(object_, d, seg)];
        jac.emplace_back(row, l.rest_weight(object_, d, seg), 1.0);
      }
      r[row - row0] = sum - 1.0;
      ++row;
    }
  }

 private:
  const VariableLayout* l_;
  int object_;
};

class CapacityBlock : public ResidualBlock {
 public:
  CapacityBlock(const VariableLayout& l, int manipulator, std::vector<double> times,
                double weight)
      : ResidualBlock("capacity", BlockKind::inequality, weight,
                      static_cast<int>(times.size()), times),
        l_(&l),
        manipulator_(manipulator) {
    for (int p = 0; p < static_cast<int>(l.pairs().size()); ++p) {
      if (l.pairs()[p].manipulator == manipulator) pairs_.push_back(p);
    }
  }

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    const VariableLayout& l = *l_;
    int row = row0;
    for (double t : sample_times()) {
      const int seg = schedule_segment(l, t);
      double sum = 0.0;
      for (int p : pairs_) {
        sum += x[l.weight(p, seg)];
        jac.emplace_back(row, l.weight(p, seg), -1.0);
      }
      r[row - row0] = 1.0 - sum;
      ++row;
    }
  }

 private:
  const VariableLayout* l_;
  int manipulator_;
  std::vector<int> pairs_;
};

/// One manipulator-link, object, or world-fixed collision primitive.
struct CollisionBody {
  enum class Kind { link, object, obstacle };
  Kind kind = Kind::obstacle;
  int entity = 0;
  int link = -1;
  CollisionPrimitive prim;
};

class CollisionBlock : public ResidualBlock {
 public:
  CollisionBlock(const Scenario& sc, const VariableLayout& l, CollisionBody a,
                 CollisionBody b, std::vector<double> times, double weight)
      : ResidualBlock("collision", BlockKind::inequality, weight,
                      static_cast<int>(times.size()), times),
        sc_(&sc),
        l_(&l),
        a_(std::move(a)),
        b_(std::move(b)) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    int row = row0;
    for (double t : sample_times()) {
      const HermiteBasis b = hermite_basis(l_->node_count(), l_->horizon(), t);
      BodyState sa = body_state(x, a_, b);
      BodyState sb = body_state(x, b_, b);
      const SegmentPairDistance d = segment_pair_distance_sq(
          sa.p0, sa.p1, a_.prim.radius, sb.p0, sb.p1, b_.prim.radius);
      r[row - row0] = d.value;
      scatter_body(a_, sa, b, d.grad_a0, d.grad_a1, row, jac);
      scatter_body(b_, sb, b, d.grad_b0, d.grad_b1, row, jac);
      ++row;
    }
  }

 private:
  struct BodyState {
    Eigen::Vector3d p0, p1;   // world endpoints
    FkFrames frames;          // link bodies
    Vector6d pose;            // object bodies
  };

  BodyState body_state(const Eigen::VectorXd& x, const CollisionBody& body,
                       const HermiteBasis& b) const {
    BodyState s;
    switch (body.kind) {
      case CollisionBody::Kind::link: {
        const Eigen::VectorXd q = manip_values(x, *l_, body.entity, b);
        s.frames = fk_frames(sc_->manipulators[body.entity].chain, q);
        const Eigen::Isometry3d& T = s.frames.link_to_world[body.link];
        s.p0 = T * body.prim.a;
        s.p1 = T * body.prim.b;
        break;
      }
      case CollisionBody::Kind::object: {
        s.pose = object_values(x, *l_, body.entity, b);
        const Eigen::Matrix3d R = euler_to_rotation(s.pose.tail<3>());
        s.p0 = s.pose.head<3>() + R * body.prim.a;
        s.p1 = s.pose.head<3>() + R * body.prim.b;
        break;
      }
      case CollisionBody::Kind::obstacle:
        s.p0 = body.prim.a;
        s.p1 = body.prim.b;
        break;
    }
    return s;
  }

  void scatter_body(const CollisionBody& body, const BodyState& s, const HermiteBasis& b,
                    const Eigen::Vector3d& grad0, const Eigen::Vector3d& grad1, int row,
                    Triplets& jac) const {
    switch (body.kind) {
      case CollisionBody::Kind::link: {
        const KinematicChain& chain = sc_->manipulators[body.entity].chain;
        const Eigen::Matrix3Xd j0 = point_jacobian(chain, s.frames, body.link, s.p0);
        const Eigen::Matrix3Xd j1 = point_jacobian(chain, s.frames, body.link, s.p1);
        const Eigen::VectorXd dq = j0.transpose() * grad0 + j1.transpose() * grad1;
        const SplineScatter sc{l_, &b, false, body.entity};
        for (int col = 0; col < chain.dof(); ++col) sc.add(jac, row, col, dq[col], 0.0);
        break;
      }
      case CollisionBody::Kind::object: {
        const auto dR = rotation_partials(s.pose.template tail<3>());
        const SplineScatter sc{l_, &b, true, body.entity};
        const Eigen::Vector3d dpos = grad0 + grad1;
        for (int c = 0; c < 3; ++c) sc.add(jac, row, c, dpos[c], 0.0);
        for (int ec = 0; ec < 3; ++ec) {
          const double v = grad0.dot(dR[ec] * body.prim.a) + grad1.dot(dR[ec] * body.prim.b);
          sc.add(jac, row, 3 + ec, v, 0.0);
        }
        break;
      }
      case CollisionBody::Kind::obstacle:
        break;
    }
  }

  const Scenario* sc_;
  const VariableLayout* l_;
  CollisionBody a_;
  CollisionBody b_;
};

class BoundsBlock : public ResidualBlock {
 public:
  struct Entry {
    int var;
    double lower, upper;
  };

  BoundsBlock(std::vector<Entry> entries, double weight)
      : ResidualBlock("bounds", BlockKind::inequality, weight,
                      2 * static_cast<int>(entries.size())),
        entries_(std::move(entries)) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    int row = row0;
    for (const Entry& e : entries_) {
      r[row - row0] = x[e.var] - e.lower;
      jac.emplace_back(row, e.var, 1.0);
      ++row;
      r[row - row0] = e.upper - x[e.var];
      jac.emplace_back(row, e.var, -1.0);
      ++row;
    }
  }

 private:
  std::vector<Entry> entries_;
};

class WeightRateBlock : public ResidualBlock {
 public:
  WeightRateBlock(const VariableLayout& l, int pair, double upper, double lower,
                  double weight)
      : ResidualBlock("weight_rate", BlockKind::inequality, weight,
                      2 * (l.segment_count() - 1)),
        l_(&l),
        pair_(pair),
        upper_(upper),
        lower_(lower) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    const VariableLayout& l = *l_;
    const double h = l.horizon() / l.segment_count();
    int row = row0;
    for (int s = 0; s + 1 < l.segment_count(); ++s) {
      const int v0 = l.weight(pair_, s);
      const int v1 = l.weight(pair_, s + 1);
      const double rate = (x[v1] - x[v0]) / h;
      r[row - row0] = upper_ - rate;
      jac.emplace_back(row, v0, 1.0 / h);
      jac.emplace_back(row, v1, -1.0 / h);
      ++row;
      r[row - row0] = rate - lower_;
      jac.emplace_back(row, v0, -1.0 / h);
      jac.emplace_back(row, v1, 1.0 / h);
      ++row;
    }
  }

 private:
  const VariableLayout* l_;
  int pair_;
  double upper_, lower_;
};

class OrientationPartitionBlock : public ResidualBlock {
 public:
  OrientationPartitionBlock(const VariableLayout& l, int pair, std::vector<double> times,
                            double weight)
      : ResidualBlock("orientation_partition", BlockKind::equality, weight,
                      static_cast<int>(times.size()), times),
        l_(&l),
        pair_(pair) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    const VariableLayout& l = *l_;
    int row = row0;
    for (double t : sample_times()) {
      const int seg = schedule_segment(l, t);
      double sum = 0.0;
      for (int k = 0; k < VariableLayout::kOrientationCount; ++k) {
        sum += x[l.orientation_weight(pair_, k, seg)];
        jac.emplace_back(row, l.orientation_weight(pair_, k, seg), 1.0);
      }
      r[row - row0] = sum - 1.0;
      ++row;
    }
  }

 private:
  const VariableLayout* l_;
  int pair_;
};

/// Trapezoid quadrature scales so that the squared residual sum approximates
/// the time integral of the squared quantity.
std::vector<double> quadrature_scales(const std::vector<double>& times, double horizon) {
  const int M = static_cast<int>(times.size());
  const double h = horizon / (M - 1);
  std::vector<double> s(M, std::sqrt(h));
  s.front() = s.back() = std::sqrt(h / 2.0);
  return s;
}

class JointVelocityObjective : public ResidualBlock {
 public:
  JointVelocityObjective(const VariableLayout& l, int manipulator,
                         std::vector<double> times, double weight)
      : ResidualBlock("objective_joint_velocity", BlockKind::objective, weight,
                      l.manipulator_dof(manipulator) * static_cast<int>(times.size()),
                      times),
        l_(&l),
        i_(manipulator),
        scales_(quadrature_scales(sample_times(), l.horizon())) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    const int n = l_->manipulator_dof(i_);
    int row = row0;
    for (size_t si = 0; si < sample_times().size(); ++si) {
      const HermiteBasis b = hermite_basis(l_->node_count(), l_->horizon(), sample_times()[si]);
      const Eigen::VectorXd qd = manip_rates(x, *l_, i_, b);
      const SplineScatter sc{l_, &b, false, i_};
      for (int k = 0; k < n; ++k) {
        r[row - row0] = scales_[si] * qd[k];
        sc.add(jac, row, k, 0.0, scales_[si]);
        ++row;
      }
    }
  }

 private:
  const VariableLayout* l_;
  int i_;
  std::vector<double> scales_;
};

class JointAccelerationObjective : public ResidualBlock {
 public:
  JointAccelerationObjective(const VariableLayout& l, int manipulator,
                             std::vector<double> times, double weight)
      : ResidualBlock("objective_joint_acceleration", BlockKind::objective, weight,
                      l.manipulator_dof(manipulator) * static_cast<int>(times.size()),
                      times),
        l_(&l),
        i_(manipulator),
        scales_(quadrature_scales(sample_times(), l.horizon())) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    const int n = l_->manipulator_dof(i_);
    int row = row0;
    for (size_t si = 0; si < sample_times().size(); ++si) {
      const HermiteBasis b = hermite_basis(l_->node_count(), l_->horizon(), sample_times()[si]);
      const int s = b.segment;
      const SplineScatter sc{l_, &b, false, i_};
      for (int k = 0; k < n; ++k) {
        const double acc = b.acceleration[0] * x[l_->joint_value(i_, s, k)] +
                           b.acceleration[1] * x[l_->joint_value(i_, s + 1, k)] +
                           b.acceleration[2] * x[l_->joint_tangent(i_, s, k)] +
                           b.acceleration[3] * x[l_->joint_tangent(i_, s + 1, k)];
        r[row - row0] = scales_[si] * acc;
        sc.add(jac, row, k, 0.0, 0.0, scales_[si]);
        ++row;
      }
    }
  }

 private:
  const VariableLayout* l_;
  int i_;
  std::vector<double> scales_;
};

class EeVelocityObjective : public ResidualBlock {
 public:
  EeVelocityObjective(const Scenario& sc, const VariableLayout& l, int manipulator,
                      std::vector<double> times, double weight)
      : ResidualBlock("objective_ee_velocity", BlockKind::objective, weight,
                      6 * static_cast<int>(times.size()), times),
        sc_(&sc),
        l_(&l),
        i_(manipulator),
        scales_(quadrature_scales(sample_times(), l.horizon())) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    const KinematicChain& chain = sc_->manipulators[i_].chain;
    int row = row0;
    for (size_t si = 0; si < sample_times().size(); ++si) {
      const HermiteBasis b = hermite_basis(l_->node_count(), l_->horizon(), sample_times()[si]);
      const Eigen::VectorXd q = manip_values(x, *l_, i_, b);
      const Eigen::VectorXd qd = manip_rates(x, *l_, i_, b);
      const FrameKinematics fk = chain_kinematics(chain, q, qd);
      const double s = scales_[si];
      const SplineScatter sc{l_, &b, false, i_};
      for (int c = 0; c < 3; ++c) {
        r[row - row0 + c] = s * fk.v[c];
        r[row - row0 + 3 + c] = s * fk.w[c];
      }
      for (int col = 0; col < chain.dof(); ++col) {
        for (int c = 0; c < 3; ++c) {
          sc.add(jac, row + c, col, s * fk.dv_dq(c, col), s * fk.jac_linear(c, col));
          sc.add(jac, row + 3 + c, col, s * fk.dw_dq(c, col), s * fk.jac_angular(c, col));
        }
      }
      row += 6;
    }
  }

 private:
  const Scenario* sc_;
  const VariableLayout* l_;
  int i_;
  std::vector<double> scales_;
};

class ObjectAccelerationObjective : public ResidualBlock {
 public:
  ObjectAccelerationObjective(const VariableLayout& l, int object,
                              std::vector<double> times, double weight)
      : ResidualBlock("objective_object_acceleration", BlockKind::objective, weight,
                      6 * static_cast<int>(times.size()), times),
        l_(&l),
        j_(object),
        scales_(quadrature_scales(sample_times(), l.horizon())) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r, Triplets& jac,
                int row0) const override {
    int row = row0;
    for (size_t si = 0; si < sample_times().size(); ++si) {
      const HermiteBasis b = hermite_basis(l_->node_count(), l_->horizon(), sample_times()[si]);
      const int s = b.segment;
      const double sc_k = scales_[si];
      const SplineScatter sc{l_, &b, true, j_};
      for (int c = 0; c < 6; ++c) {
        const double acc = b.acceleration[0] * x[l_->object_value(j_, s, c)] +
                           b.acceleration[1] * x[l_->object_value(j_, s + 1, c)] +
                           b.acceleration[2] * x[l_->object_tangent(j_, s, c)] +
                           b.acceleration[3] * x[l_->object_tangent(j_, s + 1, c)];
        r[row - row0] = sc_k * acc;
        sc.add(jac, row, c, 0.0, 0.0, sc_k);
        ++row;
      }
    }
  }

 private:
  const VariableLayout* l_;
  int j_;
  std::vector<double> scales_;
};

std::vector<CollisionBody> collect_bodies(const Scenario& sc) {
  std::vector<CollisionBody> bodies;
  for (int i = 0; i < static_cast<int>(sc.manipulators.size()); ++i) {
    for (const auto& [link, prim] : sc.manipulators[i].chain.collision_bodies) {
      bodies.push_back({CollisionBody::Kind::link, i, link, prim});
    }
  }
  for (int j = 0; j < static_cast<int>(sc.objects.size()); ++j) {
    for (const CollisionPrimitive& prim : sc.objects[j].collision) {
      bodies.push_back({CollisionBody::Kind::object, j, -1, prim});
    }
  }
  for (int o = 0; o < static_cast<int>(sc.obstacles.size()); ++o) {
    bodies.push_back({CollisionBody::Kind::obstacle, o, -1, sc.obstacles[o]});
  }
  return bodies;
}

/// Default active pair set: every manipulator link vs. every object, object
/// vs. object, and everything vs. static obstacles. No manipulator-pair or
/// intra-chain checks.
bool active_pair(const CollisionBody& a, const CollisionBody& b) {
  using K = CollisionBody::Kind;
  if (a.kind == K::obstacle && b.kind == K::obstacle) return false;
  if (a.kind == K::link && b.kind == K::link) return false;
  if (a.kind == K::object && b.kind == K::object) return a.entity != b.entity;
  return true;
}

}  // namespace

std::vector<std::string> ResidualSet::families() const {
  std::vector<std::string> out;
  for (const auto& b : blocks) {
    bool seen = false;
    for (const std::string& f : out) {
      if (f == b->family()) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(b->family());
  }
  return out;
}

std::vector<double> constraint_sample_times(int node_count, double horizon) {
  const int S = node_count - 1;
  const double h = horizon / S;
  std::vector<double> times;
  times.reserve(2 * S + 1);
  for (int s = 0; s < S; ++s) {
    times.push_back(s * h);
    times.push_back(s * h + h / 2.0);
  }
  times.push_back(horizon);
  return times;
}

std::vector<double> collision_sample_times(int node_count, double horizon) {
  const int S = node_count - 1;
  const double h = horizon / S;
  std::vector<double> times;
  times.reserve(11 * S);
  for (int s = 0; s < S; ++s) {
    for (int k = 0; k < 11; ++k) {
      times.push_back(std::min(s * h + k * h / 10.0, horizon));
    }
  }
  return times;
}

ResidualSet build_residual_blocks(const Scenario& sc, const VariableLayout& l) {
  ResidualSet set;
  const std::vector<double> times = constraint_sample_times(l.node_count(), l.horizon());
  const std::vector<double> ctimes = collision_sample_times(l.node_count(), l.horizon());
  const PenaltyWeights& pw = sc.penalties;
  const int n_manip = static_cast<int>(sc.manipulators.size());
  const int n_obj = static_cast<int>(sc.objects.size());
  const int n_pairs = static_cast<int>(l.pairs().size());

  auto add = [&set](std::unique_ptr<ResidualBlock> b) {
    set.rows += b->rows();
    set.blocks.push_back(std::move(b));
  };

  for (int i = 0; i < n_manip; ++i) {
    add(std::make_unique<BoundaryBlock>(sc, l, false, i, pw.boundary));
  }
  for (int j = 0; j < n_obj; ++j) {
    add(std::make_unique<BoundaryBlock>(sc, l, true, j, pw.boundary));
  }

  const bool oriented = sc.extensions.orientation_weights;
  for (int p = 0; p < n_pairs; ++p) {
    const bool use_oriented = oriented && l.pairs()[p].graspable.is_object;
    add(std::make_unique<PositionBlock>(sc, l, p, times, pw.position, use_oriented));
  }

  for (int j = 0; j < n_obj; ++j) {
    add(std::make_unique<VelocityBlock>(sc, l, GraspableRef{true, j}, times, pw.velocity));
  }
  for (int i = 0; i < n_manip; ++i) {
    if (sc.manipulators[i].is_interactive_object) {
      add(std::make_unique<VelocityBlock>(sc, l, GraspableRef{false, i}, times,
                                          pw.velocity));
    }
  }

  for (int j = 0; j < n_obj; ++j) {
    for (int d = 0; d < l.rest_pose_count(j); ++d) {
      add(std::make_unique<RestBlock>(sc, l, j, d, times, pw.rest));
    }
  }
  for (int j = 0; j < n_obj; ++j) {
    add(std::make_unique<RestPartitionBlock>(l, j, times, pw.rest_partition));
  }
  for (int i = 0; i < n_manip; ++i) {
    add(std::make_unique<CapacityBlock>(l, i, times, pw.capacity));
  }

  if (sc.collision_pairs == CollisionPairPolicy::all) {
    const std::vector<CollisionBody> bodies = collect_bodies(sc);
    for (size_t a = 0; a < bodies.size(); ++a) {
      for (size_t b = a + 1; b < bodies.size(); ++b) {
        if (!active_pair(bodies[a], bodies[b])) continue;
        add(std::make_unique<CollisionBlock>(sc, l, bodies[a], bodies[b], ctimes,
                                             pw.collision));
      }
    }
  }

  {
    std::vector<BoundsBlock::Entry> entries;
    const int N = l.node_count();
    const int S = l.segment_count();
    for (int i = 0; i < n_manip; ++i) {
      const KinematicChain& chain = sc.manipulators[i].chain;
      for (int s = 0; s < N; ++s) {
        for (int k = 0; k < chain.dof(); ++k) {
          entries.push_back(
              {l.joint_value(i, s, k), chain.joints[k].lower, chain.joints[k].upper});
        }
      }
    }
    for (int p = 0; p < n_pairs; ++p) {
      const GraspPair& pr = l.pairs()[p];
      double dmin = 0.0, dmax = 0.0;
      if (pr.graspable.is_object) {
        dmin = sc.objects[pr.graspable.index].delta_min;
        dmax = sc.objects[pr.graspable.index].delta_max;
      }
      entries.push_back({l.grasp_delta(p), dmin, dmax});
      for (int s = 0; s < S; ++s) entries.push_back({l.weight(p, s), 0.0, 1.0});
    }
    for (int j = 0; j < n_obj; ++j) {
      for (int d = 0; d < l.rest_pose_count(j); ++d) {
        for (int s = 0; s < S; ++s) entries.push_back({l.rest_weight(j, d, s), 0.0, 1.0});
      }
    }
    if (l.has_orientation_weights()) {
      for (int p = 0; p < n_pairs; ++p) {
        if (!l.pairs()[p].graspable.is_object) continue;
        for (int k = 0; k < VariableLayout::kOrientationCount; ++k) {
          for (int s = 0; s < S; ++s) {
            entries.push_back({l.orientation_weight(p, k, s), 0.0, 1.0});
          }
        }
      }
    }
    add(std::make_unique<BoundsBlock>(std::move(entries), pw.bounds));
  }

  if (sc.extensions.weight_rate_limits && l.segment_count() > 1) {
    for (int p = 0; p < n_pairs; ++p) {
      add(std::make_unique<WeightRateBlock>(l, p, sc.extensions.rate_upper,
                                            sc.extensions.rate_lower, pw.weight_rate));
    }
  }
  if (oriented) {
    for (int p = 0; p < n_pairs; ++p) {
      if (!l.pairs()[p].graspable.is_object) continue;
      add(std::make_unique<OrientationPartitionBlock>(l, p, times,
                                                      pw.orientation_partition));
    }
  }

  for (int i = 0; i < n_manip; ++i) {
    if (sc.objective.beta1 > 0) {
      add(std::make_unique<JointVelocityObjective>(l, i, times, sc.objective.beta1));
    }
    if (sc.objective.beta2 > 0) {
      add(std::make_unique<JointAccelerationObjective>(l, i, times, sc.objective.beta2));
    }
    if (sc.objective.beta3 > 0) {
      add(std::make_unique<EeVelocityObjective>(sc, l, i, times, sc.objective.beta3));
    }
  }
  for (int j = 0; j < n_obj; ++j) {
    const double w = sc.objective.object_accel_weight(j, n_obj);
    if (w > 0) {
      add(std::make_unique<ObjectAccelerationObjective>(l, j, times, w));
    }
  }
  return set;
}

}  // namespace itamp
