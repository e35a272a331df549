#pragma once

#include <cmath>
#include <string>

#include "itamp/scene.hpp"

namespace itamp::testing {

/// Planar 3-link arm working in the z = 0.1 horizontal plane: three
/// revolute-z joints, links along +x. Reach 0.85 m.
inline ManipulatorSpec planar_arm(const std::string& name, double base_x, double base_y,
                                  double l1 = 0.3, double l2 = 0.3, double l3 = 0.25) {
  ManipulatorSpec m;
  m.name = name;
  Joint j;
  j.kind = JointKind::revolute;
  j.axis = Eigen::Vector3d::UnitZ();
  j.lower = -3.0;
  j.upper = 3.0;

  j.origin = Pose({base_x, base_y, 0.1}, {0, 0, 0});
  m.chain.joints.push_back(j);
  j.origin = Pose({l1, 0, 0}, {0, 0, 0});
  m.chain.joints.push_back(j);
  j.origin = Pose({l2, 0, 0}, {0, 0, 0});
  m.chain.joints.push_back(j);
  m.chain.tool = Pose({l3, 0, 0}, {0, 0, 0});

  m.chain.collision_bodies = {
      {0, CollisionPrimitive::capsule(0.03, {0.02, 0, 0}, {l1 - 0.02, 0, 0})},
      {1, CollisionPrimitive::capsule(0.03, {0.02, 0, 0}, {l2 - 0.02, 0, 0})},
      {2, CollisionPrimitive::capsule(0.025, {0.01, 0, 0}, {0.4 * l3, 0, 0})},
  };
  m.rest_configuration = Eigen::Vector3d(1.3, 1.0, 0.5);
  return m;
}

/// 6-joint spatial arm (z-y-y-z-y-z axes, links stacked along +z).
inline ManipulatorSpec spatial_arm(const std::string& name, double base_x, double base_y) {
  ManipulatorSpec m;
  m.name = name;
  auto joint = [](JointKind kind, const Eigen::Vector3d& axis, const Eigen::Vector3d& org,
                  double lo, double hi) {
    Joint j;
    j.kind = kind;
    j.axis = axis;
    j.origin = Pose(org, {0, 0, 0});
    j.lower = lo;
    j.upper = hi;
    return j;
  };
  const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d ey = Eigen::Vector3d::UnitY();
  m.chain.joints = {
      joint(JointKind::revolute, ez, {base_x, base_y, 0.10}, -3.0, 3.0),
      joint(JointKind::revolute, ey, {0, 0, 0.12}, -2.2, 2.2),
      joint(JointKind::revolute, ey, {0, 0, 0.30}, -2.4, 2.4),
      joint(JointKind::revolute, ez, {0, 0, 0.20}, -3.0, 3.0),
      joint(JointKind::revolute, ey, {0, 0, 0.12}, -2.2, 2.2),
      joint(JointKind::revolute, ez, {0, 0, 0.08}, -3.0, 3.0),
  };
  m.chain.tool = Pose({0, 0, 0.10}, {0, 0, 0});
  m.chain.collision_bodies = {
      {2, CollisionPrimitive::capsule(0.04, {0, 0, 0.02}, {0, 0, 0.18})},
      {3, CollisionPrimitive::capsule(0.035, {0, 0, 0.01}, {0, 0, 0.10})},
  };
  m.rest_configuration = (Eigen::VectorXd(6) << 0.0, 0.7, 1.1, 0.0, 1.0, 0.0).finished();
  return m;
}

/// Upright default cuboid standing on the z = 0 table plane.
inline ObjectSpec upright_object(const std::string& name, double sx, double sy, double gx,
                                 double gy) {
  ObjectSpec o;
  o.name = name;
  o.start_pose = Pose({sx, sy, 0.1}, {0, 0, 0});
  o.goal_pose = Pose({gx, gy, 0.1}, {0, 0, 0});
  o.rest_poses = ObjectSpec::cuboid_rest_poses(o.dimensions, 0.0);
  o.default_delta_limits();
  o.default_collision();
  return o;
}

inline Scenario pick_and_place_scenario() {
  Scenario sc;
  sc.manipulators = {planar_arm("arm", 0.0, 0.0)};
  sc.objects = {upright_object("box", 0.45, 0.25, -0.45, 0.25)};
  sc.horizon = 9.0;
  sc.segments = 9;
  sc.objective.beta1 = 1e-2;
  sc.objective.beta2 = 1e-2;
  sc.objective.beta3 = 1e-3;
  sc.solver.max_iterations = 400;
  sc.solver.initial_damping = 1e-3;
  return sc;
}

/// Reach-limited handover pair: the object start is reachable only by the
/// left arm, the goal only by the right arm. With `restricted` false the
/// right arm is long enough to do the task alone.
inline Scenario handover_scenario(bool restricted) {
  Scenario sc;
  ManipulatorSpec a = planar_arm("left", -0.60, 0.0);
  ManipulatorSpec b = restricted ? planar_arm("right", 0.60, 0.0)
                                 : planar_arm("right", 0.60, 0.0, 0.55, 0.55, 0.35);
  sc.manipulators = {a, b};
  sc.objects = {upright_object("box", -1.05, 0.25, 1.05, 0.25)};
  sc.horizon = 9.0;
  sc.segments = 9;
  sc.objective.beta1 = 1e-2;
  sc.objective.beta2 = 1e-2;
  sc.objective.beta3 = 1e-3;
  sc.solver.max_iterations = 500;
  sc.solver.initial_damping = 1e-3;
  return sc;
}

/// Line of 6-joint arms relaying one cuboid from end to end (the variable
/// counting family).
inline Scenario line_scenario(int arms) {
  Scenario sc;
  const double spacing = 0.5;
  for (int i = 0; i < arms; ++i) {
    sc.manipulators.push_back(spatial_arm("arm" + std::to_string(i), i * spacing, 0.0));
  }
  ObjectSpec box = upright_object("box", -0.25, 0.35, (arms - 1) * spacing + 0.25, 0.35);
  // Top-down grasp convention for the spatial arms: tool z points down.
  box.grasp_tool = Pose({0, 0, 0}, {M_PI, 0, 0});
  sc.objects = {box};
  sc.horizon = 9.0;
  sc.segments = 9;
  sc.objective.beta1 = 1e-2;
  sc.objective.beta2 = 1e-2;
  sc.objective.beta3 = 1e-3;
  sc.solver.max_iterations = 500;
  sc.solver.initial_damping = 1e-3;
  return sc;
}

/// One arm, two objects, 9 segments (the schedule-shaping setup).
inline Scenario two_object_scenario() {
  Scenario sc;
  sc.manipulators = {planar_arm("arm", 0.0, 0.0)};
  sc.objects = {
      upright_object("box1", 0.45, 0.2, -0.35, 0.45),
      upright_object("box2", 0.45, -0.2, -0.35, -0.45),
  };
  sc.horizon = 9.0;
  sc.segments = 9;
  sc.objective.beta1 = 1e-2;
  sc.objective.beta2 = 1e-2;
  sc.objective.beta3 = 1e-3;
  sc.solver.max_iterations = 500;
  sc.solver.initial_damping = 1e-3;
  sc.solver.multi_object_init = true;
  sc.solver.presolve_iterations = 10;
  return sc;
}

/// Prismatic drawer opening toward the arm; the block starts inside the
/// closed drawer, beyond the arm's reach.
inline ManipulatorSpec drawer_spec() {
  ManipulatorSpec d;
  d.name = "drawer";
  Joint j;
  j.kind = JointKind::prismatic;
  j.axis = -Eigen::Vector3d::UnitX();
  j.origin = Pose({1.05, 0, 0.1}, {0, 0, 0});
  j.lower = 0.0;
  j.upper = 0.35;
  d.chain.joints = {j};
  d.chain.tool = Pose({0.05, 0, 0}, {0, 0, 0});  // interior holding frame
  d.rest_configuration = Eigen::VectorXd::Zero(1);
  d.is_interactive_object = true;
  d.handle = Pose({-0.25, 0, 0}, {0, 0, 0});
  return d;
}

inline Scenario drawer_scenario() {
  Scenario sc;
  sc.manipulators = {planar_arm("arm", 0.0, 0.0), drawer_spec()};
  ObjectSpec box = upright_object("box", 1.10, 0.0, 0.35, -0.30);
  box.initial_holder = 1;  // starts held by the drawer
  sc.objects = {box};
  sc.horizon = 9.0;
  sc.segments = 9;
  sc.objective.beta1 = 1e-2;
  sc.objective.beta2 = 1e-2;
  sc.objective.beta3 = 1e-3;
  sc.solver.max_iterations = 600;
  sc.solver.initial_damping = 1e-3;
  return sc;
}

/// Small scenario that instantiates every residual family (both extensions
/// on, drawer included); used by the derivative checks.
inline Scenario check_scenario() {
  Scenario sc;
  ManipulatorSpec arm = planar_arm("arm", 0.0, 0.0);
  arm.chain.joints.pop_back();  // 2-link variant keeps the check fast
  arm.chain.collision_bodies.pop_back();
  arm.chain.tool = Pose({0.25, 0, 0}, {0, 0, 0});
  arm.rest_configuration = Eigen::Vector2d(0.8, 0.7);
  sc.manipulators = {arm, drawer_spec()};
  sc.objects = {upright_object("box", 0.4, 0.2, -0.4, 0.2)};
  sc.obstacles = {CollisionPrimitive::sphere(0.08, {0.0, -0.45, 0.1})};
  sc.horizon = 3.0;
  sc.segments = 3;
  sc.objective.beta1 = 0.4;
  sc.objective.beta2 = 0.3;
  sc.objective.beta3 = 0.2;
  sc.objective.object_accel = {0.25};
  sc.extensions.orientation_weights = true;
  sc.extensions.weight_rate_limits = true;
  return sc;
}

}  // namespace itamp::testing
