#include "itamp/layout.hpp"

#include <cassert>
#include <stdexcept>

namespace itamp {

VariableLayout VariableLayout::build(const Scenario& scenario) {
  VariableLayout l;
  l.node_count_ = scenario.node_count();
  l.horizon_ = scenario.horizon;
  l.pairs_ = grasp_pairs(scenario);

  const int N = l.node_count_;
  const int S = N - 1;
  const int n_manip = static_cast<int>(scenario.manipulators.size());
  const int n_obj = static_cast<int>(scenario.objects.size());
  const int n_pairs = static_cast<int>(l.pairs_.size());

  l.dofs_.resize(n_manip);
  l.manip_spline_offset_.resize(n_manip);
  l.pair_weight_offset_.assign(n_pairs, 0);
  l.pair_grasp_offset_.assign(n_pairs, 0);
  l.object_spline_offset_.resize(n_obj);
  l.rest_offset_.resize(n_obj);
  l.rest_counts_.resize(n_obj);

  int offset = 0;
  for (int i = 0; i < n_manip; ++i) {
    const int n = scenario.manipulators[i].chain.dof();
    l.dofs_[i] = n;
    l.manip_spline_offset_[i] = offset;
    offset += 2 * n * N;
    for (int p = 0; p < n_pairs; ++p) {
      if (l.pairs_[p].manipulator != i) continue;
      l.pair_weight_offset_[p] = offset;
      offset += S;
    }
    for (int p = 0; p < n_pairs; ++p) {
      if (l.pairs_[p].manipulator != i) continue;
      l.pair_grasp_offset_[p] = offset;
      offset += 2;
    }
  }
  for (int j = 0; j < n_obj; ++j) {
    l.object_spline_offset_[j] = offset;
    offset += 2 * 6 * N;
    l.rest_offset_[j] = offset;
    l.rest_counts_[j] = static_cast<int>(scenario.objects[j].rest_poses.size());
    offset += l.rest_counts_[j] * S;
  }
  if (scenario.extensions.orientation_weights) {
    l.orientation_offset_.assign(n_pairs, -1);
    for (int p = 0; p < n_pairs; ++p) {
      if (!l.pairs_[p].graspable.is_object) continue;  // handles have no face choice
      l.orientation_offset_[p] = offset;
      offset += kOrientationCount * S;
    }
  }
  l.total_ = offset;
  return l;
}

int VariableLayout::joint_value(int manipulator, int node, int joint) const {
  const int n = dofs_[manipulator];
  assert(node >= 0 && node < node_count_ && joint >= 0 && joint < n);
  return manip_spline_offset_[manipulator] + node * 2 * n + joint;
}

int VariableLayout::joint_tangent(int manipulator, int node, int joint) const {
  const int n = dofs_[manipulator];
  return manip_spline_offset_[manipulator] + node * 2 * n + n + joint;
}

int VariableLayout::object_value(int object, int node, int coord) const {
  assert(node >= 0 && node < node_count_ && coord >= 0 && coord < 6);
  return object_spline_offset_[object] + node * 12 + coord;
}

int VariableLayout::object_tangent(int object, int node, int coord) const {
  return object_spline_offset_[object] + node * 12 + 6 + coord;
}

int VariableLayout::rest_weight(int object, int rest_index, int segment) const {
  assert(rest_index >= 0 && rest_index < rest_counts_[object]);
  assert(segment >= 0 && segment < segment_count());
  return rest_offset_[object] + rest_index * segment_count() + segment;
}

int VariableLayout::pair_index(int manipulator, const GraspableRef& graspable) const {
  for (int p = 0; p < static_cast<int>(pairs_.size()); ++p) {
    if (pairs_[p].manipulator == manipulator && pairs_[p].graspable == graspable) return p;
  }
  return -1;
}

int VariableLayout::weight(int pair, int segment) const {
  assert(segment >= 0 && segment < segment_count());
  return pair_weight_offset_[pair] + segment;
}

int VariableLayout::grasp_delta(int pair) const { return pair_grasp_offset_[pair]; }

int VariableLayout::grasp_theta(int pair) const { return pair_grasp_offset_[pair] + 1; }

int VariableLayout::orientation_weight(int pair, int k, int segment) const {
  if (orientation_offset_.empty() || orientation_offset_[pair] < 0) {
    throw std::logic_error("orientation weights are not enabled for this pair");
  }
  return orientation_offset_[pair] + k * segment_count() + segment;
}

std::vector<std::uint8_t> VariableLayout::object_spline_mask() const {
  std::vector<std::uint8_t> mask(total_, 0);
  for (int j = 0; j < object_count(); ++j) {
    const int begin = object_spline_offset_[j];
    for (int k = 0; k < 12 * node_count_; ++k) mask[begin + k] = 1;
  }
  return mask;
}

int count_variables(const Scenario& scenario) {
  return VariableLayout::build(scenario).total();
}

}  // namespace itamp
