#include "itamp/scene.hpp"

#include <stdexcept>

namespace itamp {

std::vector<RestPose> ObjectSpec::cuboid_rest_poses(const Eigen::Vector3d& dims,
                                                    double support_z) {
  std::vector<RestPose> poses;
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {1.0, -1.0}) {
      RestPose rp;
      rp.axis = sign * Eigen::Vector3d::Unit(axis);
      rp.elevation = support_z + dims[axis] / 2.0;
      poses.push_back(rp);
    }
  }
  return poses;
}

void ObjectSpec::default_delta_limits() {
  const double h = dimensions[2] / 2.0;
  delta_min = -0.8 * h;
  delta_max = 0.8 * h;
}

void ObjectSpec::default_collision() {
  const double r = std::min(dimensions[0], dimensions[1]) / 2.0;
  const double half = std::max(dimensions[2] / 2.0 - r, 0.0);
  collision = {CollisionPrimitive::capsule(r, Eigen::Vector3d(0, 0, -half),
                                           Eigen::Vector3d(0, 0, half))};
}

double ObjectiveWeights::object_accel_weight(int object, int object_count) const {
  if (object_accel.empty()) return 0.0;
  if (object_accel.size() == 1) return object_accel[0];
  if (static_cast<int>(object_accel.size()) != object_count) {
    throw std::invalid_argument("object_accel must have one weight or one per object");
  }
  return object_accel[object];
}

void Scenario::validate() const {
  if (segments < 1) throw std::invalid_argument("segments must be >= 1");
  if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
  if (objective.beta1 < 0 || objective.beta2 < 0 || objective.beta3 < 0) {
    throw std::invalid_argument("objective weights must be non-negative");
  }
  for (double w : objective.object_accel) {
    if (w < 0) throw std::invalid_argument("object_accel weights must be non-negative");
  }
  if (extensions.weight_rate_limits) {
    if (!(extensions.rate_upper > 0.0) || !(extensions.rate_lower < 0.0)) {
      throw std::invalid_argument("weight rate limits require rate_upper > 0 > rate_lower");
    }
  }
  if (manipulators.empty()) throw std::invalid_argument("scenario needs at least one robot");

  for (const ManipulatorSpec& m : manipulators) {
    m.chain.validate();
    if (m.rest_configuration.size() != m.chain.dof()) {
      throw std::invalid_argument("robot " + m.name + ": rest_configuration has wrong size");
    }
    for (int k = 0; k < m.chain.dof(); ++k) {
      if (m.rest_configuration[k] < m.chain.joints[k].lower ||
          m.rest_configuration[k] > m.chain.joints[k].upper) {
        throw std::invalid_argument("robot " + m.name +
                                    ": rest_configuration violates joint limits");
      }
    }
  }
  for (const ObjectSpec& o : objects) {
    if (o.rest_poses.empty()) {
      throw std::invalid_argument("object " + o.name + ": needs at least one rest pose");
    }
    if (o.delta_min > o.delta_max) {
      throw std::invalid_argument("object " + o.name + ": delta limits inverted");
    }
    const double h = o.dimensions[2] / 2.0;
    if (o.delta_min < -h - 1e-12 || o.delta_max > h + 1e-12) {
      throw std::invalid_argument("object " + o.name +
                                  ": delta limits exceed the half-length of the long axis");
    }
    for (const CollisionPrimitive& p : o.collision) {
      if (p.radius <= 0) throw std::invalid_argument("object " + o.name + ": radius <= 0");
    }
    if (o.initial_holder >= static_cast<int>(manipulators.size())) {
      throw std::invalid_argument("object " + o.name + ": initial_holder out of range");
    }
  }
  for (const CollisionPrimitive& p : obstacles) {
    if (p.radius <= 0) throw std::invalid_argument("obstacle radius <= 0");
  }
}

std::vector<GraspableRef> graspables(const Scenario& scenario) {
  std::vector<GraspableRef> out;
  for (int j = 0; j < static_cast<int>(scenario.objects.size()); ++j) {
    out.push_back({true, j});
  }
  for (int i = 0; i < static_cast<int>(scenario.manipulators.size()); ++i) {
    if (scenario.manipulators[i].is_interactive_object) out.push_back({false, i});
  }
  return out;
}

std::vector<GraspPair> grasp_pairs(const Scenario& scenario) {
  const std::vector<GraspableRef> targets = graspables(scenario);
  std::vector<GraspPair> pairs;
  for (int i = 0; i < static_cast<int>(scenario.manipulators.size()); ++i) {
    const bool interactive = scenario.manipulators[i].is_interactive_object;
    for (const GraspableRef& g : targets) {
      if (g.is_object) {
        pairs.push_back({i, g});
      } else if (!interactive && g.index != i) {
        pairs.push_back({i, g});
      }
    }
  }
  return pairs;
}

}  // namespace itamp
