#include "itamp/initialization.hpp"

#include <algorithm>

namespace itamp {

namespace {

void init_common(const Scenario& scenario, const VariableLayout& layout,
                 Eigen::VectorXd& x) {
  const int N = layout.node_count();
  const int S = layout.segment_count();

  for (int i = 0; i < layout.manipulator_count(); ++i) {
    const ManipulatorSpec& m = scenario.manipulators[i];
    for (int s = 0; s < N; ++s) {
      for (int k = 0; k < m.chain.dof(); ++k) {
        const double v = std::clamp(m.rest_configuration[k], m.chain.joints[k].lower,
                                    m.chain.joints[k].upper);
        x[layout.joint_value(i, s, k)] = v;
        x[layout.joint_tangent(i, s, k)] = 0.0;
      }
    }
  }

  for (int p = 0; p < static_cast<int>(layout.pairs().size()); ++p) {
    const GraspPair& pair = layout.pairs()[p];
    double w0 = 0.5;
    if (pair.graspable.is_object &&
        scenario.objects[pair.graspable.index].initial_holder == pair.manipulator) {
      w0 = 1.0;
    }
    for (int s = 0; s < S; ++s) x[layout.weight(p, s)] = w0;

    double delta0 = 0.0;
    if (pair.graspable.is_object) {
      const ObjectSpec& o = scenario.objects[pair.graspable.index];
      delta0 = std::clamp(0.0, o.delta_min, o.delta_max);
    }
    x[layout.grasp_delta(p)] = delta0;
    x[layout.grasp_theta(p)] = 0.0;

    if (layout.has_orientation_weights() && pair.graspable.is_object) {
      for (int k = 0; k < VariableLayout::kOrientationCount; ++k) {
        for (int s = 0; s < S; ++s) {
          x[layout.orientation_weight(p, k, s)] = 1.0 / VariableLayout::kOrientationCount;
        }
      }
    }
  }

  for (int j = 0; j < layout.object_count(); ++j) {
    const int D = layout.rest_pose_count(j);
    for (int d = 0; d < D; ++d) {
      for (int s = 0; s < S; ++s) x[layout.rest_weight(j, d, s)] = 1.0 / D;
    }
  }
}

void set_object_node(const VariableLayout& layout, Eigen::VectorXd& x, int j, int node,
                     const Eigen::Matrix<double, 6, 1>& value,
                     const Eigen::Matrix<double, 6, 1>& tangent) {
  for (int c = 0; c < 6; ++c) {
    x[layout.object_value(j, node, c)] = value[c];
    x[layout.object_tangent(j, node, c)] = tangent[c];
  }
}

}  // namespace

Eigen::VectorXd initialize(const Scenario& scenario, const VariableLayout& layout) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.total());
  init_common(scenario, layout, x);

  const int N = layout.node_count();
  for (int j = 0; j < layout.object_count(); ++j) {
    const Eigen::Matrix<double, 6, 1> start = scenario.objects[j].start_pose.vector();
    const Eigen::Matrix<double, 6, 1> goal = scenario.objects[j].goal_pose.vector();
    const Eigen::Matrix<double, 6, 1> zero = Eigen::Matrix<double, 6, 1>::Zero();
    for (int s = 0; s < N - 1; ++s) set_object_node(layout, x, j, s, start, zero);
    set_object_node(layout, x, j, N - 1, goal, zero);
  }
  return x;
}

Eigen::VectorXd initialize_multi_object(const Scenario& scenario,
                                        const VariableLayout& layout) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(layout.total());
  init_common(scenario, layout, x);

  const int N = layout.node_count();
  const int S = layout.segment_count();
  const int M = layout.object_count();
  const double h = layout.horizon() / S;

  for (int j = 0; j < M; ++j) {
    const Eigen::Matrix<double, 6, 1> start = scenario.objects[j].start_pose.vector();
    const Eigen::Matrix<double, 6, 1> goal = scenario.objects[j].goal_pose.vector();
    const Eigen::Matrix<double, 6, 1> zero = Eigen::Matrix<double, 6, 1>::Zero();

    // Transport window in whole segments so that segments outside it carry
    // exactly zero velocity.
    const int first = static_cast<int>(static_cast<long>(j) * S / M);
    const int last = static_cast<int>(static_cast<long>(j + 1) * S / M);  // node index
    const double window = (last - first) * h;
    const Eigen::Matrix<double, 6, 1> slope =
        window > 0 ? ((goal - start) / window).eval() : zero;

    for (int s = 0; s < N; ++s) {
      if (s <= first) {
        set_object_node(layout, x, j, s, start, zero);
      } else if (s >= last) {
        set_object_node(layout, x, j, s, goal, zero);
      } else {
        const double f = static_cast<double>(s - first) / (last - first);
        set_object_node(layout, x, j, s, start + f * (goal - start), slope);
      }
    }
  }
  return x;
}

}  // namespace itamp
