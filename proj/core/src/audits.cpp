#include "itamp/audits.hpp"

#include <algorithm>

#include "itamp/extract.hpp"
#include "itamp/kinematics.hpp"
#include "itamp/residuals.hpp"

namespace itamp {

double max_position_violation(const Scenario& scenario, const VariableLayout& layout,
                              const Eigen::VectorXd& x, double w_threshold) {
  const std::vector<double> times =
      constraint_sample_times(layout.node_count(), layout.horizon());
  double worst = 0.0;
  for (int p = 0; p < static_cast<int>(layout.pairs().size()); ++p) {
    const GraspPair& pair = layout.pairs()[p];
    const SegmentSchedule w = weight_schedule(x, layout, p);
    const TrajectorySpline manip = manipulator_spline(x, layout, pair.manipulator);
    const KinematicChain& chain = scenario.manipulators[pair.manipulator].chain;

    GraspParams params;
    params.delta = x[layout.grasp_delta(p)];
    params.theta = x[layout.grasp_theta(p)];
    if (pair.graspable.is_object) {
      params.tool_offset = scenario.objects[pair.graspable.index].grasp_tool;
    }

    for (double t : times) {
      const double wv = w.eval(t);
      if (wv <= w_threshold) continue;
      const Pose ee = forward_kinematics(chain, manip.eval(t));

      Eigen::Vector3d grasp_p;
      if (pair.graspable.is_object) {
        const TrajectorySpline obj = object_spline(x, layout, pair.graspable.index);
        const Eigen::VectorXd pose = obj.eval(t);
        grasp_p = grasp_frame(pose.head<3>(), euler_to_rotation(pose.tail<3>()), params).p;
      } else {
        const ManipulatorSpec& g = scenario.manipulators[pair.graspable.index];
        const TrajectorySpline gs = manipulator_spline(x, layout, pair.graspable.index);
        const FkFrames frames = fk_frames(g.chain, gs.eval(t));
        const Eigen::Isometry3d iso = frames.link_to_world.back() * g.handle.transform();
        grasp_p = grasp_frame(iso.translation(), iso.linear(), params).p;
      }
      worst = std::max(worst, wv * (ee.position - grasp_p).norm());
    }
  }
  return worst;
}

double max_capacity_violation(const Scenario& scenario, const VariableLayout& layout,
                              const Eigen::VectorXd& x) {
  double worst = 0.0;
  for (int i = 0; i < static_cast<int>(scenario.manipulators.size()); ++i) {
    for (int s = 0; s < layout.segment_count(); ++s) {
      double sum = 0.0;
      for (int p = 0; p < static_cast<int>(layout.pairs().size()); ++p) {
        if (layout.pairs()[p].manipulator == i) sum += x[layout.weight(p, s)];
      }
      worst = std::max(worst, sum - 1.0);
    }
  }
  return std::max(worst, 0.0);
}

double max_bounds_violation(const Scenario& scenario, const VariableLayout& layout,
                            const Eigen::VectorXd& x) {
  double worst = 0.0;
  auto box = [&worst](double v, double lo, double hi) {
    worst = std::max({worst, lo - v, v - hi});
  };
  for (int i = 0; i < static_cast<int>(scenario.manipulators.size()); ++i) {
    const KinematicChain& chain = scenario.manipulators[i].chain;
    for (int s = 0; s < layout.node_count(); ++s) {
      for (int k = 0; k < chain.dof(); ++k) {
        box(x[layout.joint_value(i, s, k)], chain.joints[k].lower, chain.joints[k].upper);
      }
    }
  }
  for (int p = 0; p < static_cast<int>(layout.pairs().size()); ++p) {
    const GraspPair& pair = layout.pairs()[p];
    double dmin = 0.0, dmax = 0.0;
    if (pair.graspable.is_object) {
      dmin = scenario.objects[pair.graspable.index].delta_min;
      dmax = scenario.objects[pair.graspable.index].delta_max;
    }
    box(x[layout.grasp_delta(p)], dmin, dmax);
    for (int s = 0; s < layout.segment_count(); ++s) {
      box(x[layout.weight(p, s)], 0.0, 1.0);
    }
  }
  for (int j = 0; j < layout.object_count(); ++j) {
    for (int d = 0; d < layout.rest_pose_count(j); ++d) {
      for (int s = 0; s < layout.segment_count(); ++s) {
        box(x[layout.rest_weight(j, d, s)], 0.0, 1.0);
      }
    }
  }
  if (layout.has_orientation_weights()) {
    for (int p = 0; p < static_cast<int>(layout.pairs().size()); ++p) {
      if (!layout.pairs()[p].graspable.is_object) continue;
      for (int k = 0; k < VariableLayout::kOrientationCount; ++k) {
        for (int s = 0; s < layout.segment_count(); ++s) {
          box(x[layout.orientation_weight(p, k, s)], 0.0, 1.0);
        }
      }
    }
  }
  return worst;
}

double max_weight_step(const VariableLayout& layout, const Eigen::VectorXd& x) {
  double worst = 0.0;
  for (int p = 0; p < static_cast<int>(layout.pairs().size()); ++p) {
    for (int s = 0; s + 1 < layout.segment_count(); ++s) {
      worst = std::max(worst,
                       std::abs(x[layout.weight(p, s + 1)] - x[layout.weight(p, s)]));
    }
  }
  return worst;
}

double mode_exclusivity_deficit(const VariableLayout& layout, const Eigen::VectorXd& x,
                                double vel_threshold) {
  const std::vector<double> times =
      constraint_sample_times(layout.node_count(), layout.horizon());
  double deficit = 0.0;
  for (int j = 0; j < layout.object_count(); ++j) {
    const TrajectorySpline obj = object_spline(x, layout, j);
    std::vector<int> holders;
    for (int p = 0; p < static_cast<int>(layout.pairs().size()); ++p) {
      if (layout.pairs()[p].graspable == GraspableRef{true, j}) holders.push_back(p);
    }
    for (double t : times) {
      const double speed = obj.velocity(t).head<3>().norm();
      if (speed <= vel_threshold) continue;
      const int s = std::min(static_cast<int>(t * layout.segment_count() / layout.horizon()),
                             layout.segment_count() - 1);
      double sum = 0.0;
      for (int p : holders) sum += x[layout.weight(p, s)];
      deficit = std::max(deficit, 1.0 - sum);
    }
  }
  return deficit;
}

}  // namespace itamp
