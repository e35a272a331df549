#include "itamp/jacobian_check.hpp"

#include <algorithm>
#include <cmath>

#include "itamp/initialization.hpp"

namespace itamp {

double JacobianCheck::worst() const {
  double w = 0.0;
  for (const auto& [family, err] : worst_error) w = std::max(w, err);
  return w;
}

bool JacobianCheck::passed(double tol) const { return worst() <= tol; }

Eigen::VectorXd random_state(const Scenario& scenario, const VariableLayout& layout,
                             std::mt19937& rng) {
  std::uniform_real_distribution<double> u01(0.05, 0.95);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  Eigen::VectorXd x = initialize(scenario, layout);

  for (int i = 0; i < layout.manipulator_count(); ++i) {
    const KinematicChain& chain = scenario.manipulators[i].chain;
    for (int s = 0; s < layout.node_count(); ++s) {
      for (int k = 0; k < chain.dof(); ++k) {
        const Joint& joint = chain.joints[k];
        double& v = x[layout.joint_value(i, s, k)];
        v = std::clamp(v + 0.4 * sym(rng), joint.lower, joint.upper);
        x[layout.joint_tangent(i, s, k)] = 0.4 * sym(rng);
      }
    }
  }
  for (int j = 0; j < layout.object_count(); ++j) {
    for (int s = 0; s < layout.node_count(); ++s) {
      for (int c = 0; c < 3; ++c) {
        x[layout.object_value(j, s, c)] += 0.25 * sym(rng);
        x[layout.object_value(j, s, 3 + c)] += 0.35 * sym(rng);
        x[layout.object_tangent(j, s, c)] = 0.4 * sym(rng);
        x[layout.object_tangent(j, s, 3 + c)] = 0.4 * sym(rng);
      }
      // keep pitch clear of the gimbal branch
      double& pitch = x[layout.object_value(j, s, 4)];
      pitch = std::clamp(pitch, -1.1, 1.1);
    }
  }
  for (int p = 0; p < static_cast<int>(layout.pairs().size()); ++p) {
    const GraspPair& pair = layout.pairs()[p];
    for (int s = 0; s < layout.segment_count(); ++s) x[layout.weight(p, s)] = u01(rng);
    double dmin = 0.0, dmax = 0.0;
    if (pair.graspable.is_object) {
      dmin = scenario.objects[pair.graspable.index].delta_min;
      dmax = scenario.objects[pair.graspable.index].delta_max;
    }
    std::uniform_real_distribution<double> ud(dmin, dmax);
    x[layout.grasp_delta(p)] = dmin < dmax ? ud(rng) : dmin;
    x[layout.grasp_theta(p)] = 0.6 * sym(rng);
    if (layout.has_orientation_weights() && pair.graspable.is_object) {
      for (int k = 0; k < VariableLayout::kOrientationCount; ++k) {
        for (int s = 0; s < layout.segment_count(); ++s) {
          x[layout.orientation_weight(p, k, s)] = u01(rng);
        }
      }
    }
  }
  for (int j = 0; j < layout.object_count(); ++j) {
    for (int d = 0; d < layout.rest_pose_count(j); ++d) {
      for (int s = 0; s < layout.segment_count(); ++s) {
        x[layout.rest_weight(j, d, s)] = u01(rng);
      }
    }
  }
  return x;
}

namespace {

Eigen::VectorXd raw_values(const ResidualSet& set, const Eigen::VectorXd& x,
                           std::vector<Eigen::Triplet<double>>* triplets) {
  Eigen::VectorXd raw(set.rows);
  std::vector<Eigen::Triplet<double>> local;
  int row0 = 0;
  for (const auto& block : set.blocks) {
    block->evaluate(x, raw.segment(row0, block->rows()),
                    triplets ? *triplets : local, row0);
    row0 += block->rows();
    local.clear();
  }
  return raw;
}

}  // namespace

JacobianCheck check_jacobians(const Scenario& scenario, const VariableLayout& layout,
                              const ResidualSet& set, int states, unsigned seed,
                              double fd_step, const std::string* sabotage_family) {
  JacobianCheck out;
  out.states = states;
  std::mt19937 rng(seed);

  // Row -> family lookup.
  std::vector<const std::string*> row_family(set.rows);
  {
    int row0 = 0;
    for (const auto& block : set.blocks) {
      for (int k = 0; k < block->rows(); ++k) row_family[row0 + k] = &block->family();
      row0 += block->rows();
    }
  }
  for (const auto& block : set.blocks) out.worst_error.emplace(block->family(), 0.0);

  for (int state = 0; state < states; ++state) {
    Eigen::VectorXd x = random_state(scenario, layout, rng);

    std::vector<Eigen::Triplet<double>> triplets;
    raw_values(set, x, &triplets);

    Eigen::SparseMatrix<double> J(set.rows, layout.total());
    J.setFromTriplets(triplets.begin(), triplets.end());
    if (sabotage_family) {
      for (int row0 = 0, bi = 0; bi < static_cast<int>(set.blocks.size()); ++bi) {
        if (set.blocks[bi]->family() == *sabotage_family) {
          J.coeffRef(row0, 0) += 1e-2;
          break;
        }
        row0 += set.blocks[bi]->rows();
      }
    }

    for (int v = 0; v < layout.total(); ++v) {
      Eigen::VectorXd xp = x, xm = x;
      xp[v] += fd_step;
      xm[v] -= fd_step;
      const Eigen::VectorXd fd =
          (raw_values(set, xp, nullptr) - raw_values(set, xm, nullptr)) / (2.0 * fd_step);

      // Compare the dense FD column against the sparse analytic column.
      Eigen::VectorXd col = Eigen::VectorXd::Zero(set.rows);
      for (Eigen::SparseMatrix<double>::InnerIterator it(J, v); it; ++it) {
        col[it.row()] = it.value();
      }
      for (int r = 0; r < set.rows; ++r) {
        const double denom = std::max({1.0, std::abs(col[r]), std::abs(fd[r])});
        const double err = std::abs(col[r] - fd[r]) / denom;
        auto& worst = out.worst_error[*row_family[r]];
        worst = std::max(worst, err);
      }
    }
  }
  return out;
}

}  // namespace itamp
