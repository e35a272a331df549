#pragma once

#include <string>
#include <vector>

#include "itamp/kinematics.hpp"
#include "itamp/pose.hpp"

namespace itamp {

/// One statically stable orientation of an object: the body-frame face axis
/// that points up at rest and the world elevation of the object origin.
struct RestPose {
  Eigen::Vector3d axis{Eigen::Vector3d::UnitZ()};
  double elevation = 0.0;
};

struct ObjectSpec {
  std::string name;
  Eigen::Vector3d dimensions{0.06, 0.06, 0.2};  // cuboid, local z is the long axis
  Pose start_pose;
  Pose goal_pose;
  std::vector<RestPose> rest_poses;
  std::vector<CollisionPrimitive> collision;
  Pose grasp_tool;  // gripper-convention transform used by the grasp map
  double delta_min = 0.0;
  double delta_max = 0.0;
  int initial_holder = -1;  // manipulator index whose association weight starts at 1

  /// The six face rest poses of a cuboid resting on a plane at support_z.
  static std::vector<RestPose> cuboid_rest_poses(const Eigen::Vector3d& dimensions,
                                                 double support_z);

  /// Default longitudinal grasp limits for the cuboid: 80% of the half-length.
  void default_delta_limits();

  /// Default collision primitive: one capsule along the long axis.
  void default_collision();
};

struct ManipulatorSpec {
  std::string name;
  KinematicChain chain;
  Eigen::VectorXd rest_configuration;
  /// Interactive environment objects (e.g. a drawer) are modeled as
  /// manipulators that other arms can grasp at a handle frame on the last
  /// link; their own motion is tied to their holders by a velocity
  /// constraint, exactly like a free object.
  bool is_interactive_object = false;
  Pose handle;  // grasp-target frame on the last link (interactive only)
};

struct ObjectiveWeights {
  double beta1 = 0.0;  // joint velocities
  double beta2 = 0.0;  // joint accelerations
  double beta3 = 0.0;  // end-effector velocities
  /// Per-object pose-acceleration weights; empty = disabled, a single entry
  /// broadcasts to every object.
  std::vector<double> object_accel;

  double object_accel_weight(int object, int object_count) const;
};

struct PenaltyWeights {
  double boundary = 1e3;
  double position = 1e3;
  double velocity = 1e3;
  double rest = 1e3;
  double rest_partition = 1e3;
  double capacity = 1e3;
  double collision = 1e3;
  double bounds = 1e3;
  double weight_rate = 1e3;
  double orientation_partition = 1e3;
};

struct ExtensionFlags {
  bool orientation_weights = false;  // gamma_ijk grasp-orientation schedules
  bool weight_rate_limits = false;
  double rate_upper = 0.5;   // per second, must be > 0
  double rate_lower = -0.5;  // per second, must be < 0
};

struct SolverSettings {
  int max_iterations = 500;
  double gradient_tolerance = 1e-6;  // infinity norm of J^T r
  double step_tolerance = 1e-9;
  double initial_damping = 1e-4;
  double damping_increase = 10.0;
  double damping_decrease = 0.5;
  double damping_floor = 1e-10;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 20;
  int outer_rounds = 1;       // penalty continuation rounds
  double penalty_ramp = 1.0;  // constraint-weight factor applied per round
  int presolve_iterations = 0;
  bool multi_object_init = false;
};

enum class CollisionPairPolicy { all, none };

struct Scenario {
  std::vector<ManipulatorSpec> manipulators;
  std::vector<ObjectSpec> objects;
  std::vector<CollisionPrimitive> obstacles;  // world-frame primitives
  double horizon = 1.0;                       // T, seconds
  int segments = 1;                           // N - 1
  ObjectiveWeights objective;
  PenaltyWeights penalties;
  ExtensionFlags extensions;
  SolverSettings solver;
  CollisionPairPolicy collision_pairs = CollisionPairPolicy::all;

  int node_count() const { return segments + 1; }

  /// Throws std::invalid_argument on any violated invariant.
  void validate() const;
};

/// A graspable entity: a free object or an interactive manipulator's handle.
struct GraspableRef {
  bool is_object = true;
  int index = 0;

  bool operator==(const GraspableRef&) const = default;
};

/// One manipulator/graspable pair owning an association-weight schedule and
/// grasp parameters. Interactive manipulators hold only objects; arms hold
/// objects and interactive handles, never themselves.
struct GraspPair {
  int manipulator = 0;
  GraspableRef graspable;
};

std::vector<GraspableRef> graspables(const Scenario& scenario);
std::vector<GraspPair> grasp_pairs(const Scenario& scenario);

}  // namespace itamp
