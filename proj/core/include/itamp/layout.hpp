#pragma once

#include <cstdint>
#include <vector>

#include "itamp/scene.hpp"

namespace itamp {

/// Flat indexing of every decision variable into one vector.
///
/// Block order: per manipulator (joint spline nodes as value+tangent pairs,
/// then the association-weight segments of its grasp pairs, then the grasp
/// parameters delta/theta per pair); per object (pose spline, then rest
/// weights); grasp-orientation schedules last, when enabled.
class VariableLayout {
 public:
  static VariableLayout build(const Scenario& scenario);

  int total() const { return total_; }
  int node_count() const { return node_count_; }
  int segment_count() const { return node_count_ - 1; }
  double horizon() const { return horizon_; }

  // manipulator joint splines
  int joint_value(int manipulator, int node, int joint) const;
  int joint_tangent(int manipulator, int node, int joint) const;
  int manipulator_dof(int manipulator) const { return dofs_[manipulator]; }
  int manipulator_count() const { return static_cast<int>(dofs_.size()); }

  // object pose splines (6 coordinates: position, Euler XYZ)
  int object_value(int object, int node, int coord) const;
  int object_tangent(int object, int node, int coord) const;
  int object_count() const { return static_cast<int>(object_spline_offset_.size()); }
  int rest_weight(int object, int rest_index, int segment) const;
  int rest_pose_count(int object) const { return rest_counts_[object]; }

  // grasp pairs
  const std::vector<GraspPair>& pairs() const { return pairs_; }
  int pair_index(int manipulator, const GraspableRef& graspable) const;  // -1 if absent
  int weight(int pair, int segment) const;
  int grasp_delta(int pair) const;
  int grasp_theta(int pair) const;
  bool has_orientation_weights() const { return !orientation_offset_.empty(); }
  int orientation_weight(int pair, int k, int segment) const;
  static constexpr int kOrientationCount = 4;

  /// Mask (1 = frozen) covering every object pose-spline variable; used by
  /// the presolve phase.
  std::vector<std::uint8_t> object_spline_mask() const;

 private:
  int total_ = 0;
  int node_count_ = 2;
  double horizon_ = 1.0;
  std::vector<int> dofs_;
  std::vector<int> manip_spline_offset_;
  std::vector<int> pair_weight_offset_;
  std::vector<int> pair_grasp_offset_;
  std::vector<int> object_spline_offset_;
  std::vector<int> rest_offset_;
  std::vector<int> rest_counts_;
  std::vector<int> orientation_offset_;
  std::vector<GraspPair> pairs_;
};

/// Total decision-variable count for a scenario.
int count_variables(const Scenario& scenario);

}  // namespace itamp
