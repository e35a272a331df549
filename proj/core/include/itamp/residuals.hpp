#pragma once

#include <Eigen/Sparse>

#include <memory>
#include <string>
#include <vector>

#include "itamp/layout.hpp"
#include "itamp/scene.hpp"

namespace itamp {

enum class BlockKind { equality, inequality, objective };

/// One constraint/objective term instance. Blocks emit *raw* values:
/// equality residuals r, inequality constraint values c (feasible when
/// c >= 0), or objective quantities (already carrying their quadrature
/// scale). The assembler applies the penalty transform: sqrt(weight) * r for
/// equalities and objectives, sqrt(weight) * max(0, -c)^{3/2} for
/// inequalities, so the penalized objective uses quadratic and cubic
/// penalties respectively.
class ResidualBlock {
 public:
  ResidualBlock(std::string family, BlockKind kind, double weight, int rows,
                std::vector<double> sample_times = {})
      : family_(std::move(family)),
        kind_(kind),
        weight_(weight),
        rows_(rows),
        sample_times_(std::move(sample_times)) {}
  virtual ~ResidualBlock() = default;

  const std::string& family() const { return family_; }
  BlockKind kind() const { return kind_; }
  double weight() const { return weight_; }
  int rows() const { return rows_; }
  const std::vector<double>& sample_times() const { return sample_times_; }

  /// Writes raw values into residual[0..rows) and Jacobian triplets with
  /// rows offset by row0. Emitted sparsity is a superset of the true
  /// nonzeros (entries may be zero-valued).
  virtual void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> residual,
                        std::vector<Eigen::Triplet<double>>& jacobian,
                        int row0) const = 0;

 private:
  std::string family_;
  BlockKind kind_;
  double weight_;
  int rows_;
  std::vector<double> sample_times_;
};

struct ResidualSet {
  std::vector<std::unique_ptr<ResidualBlock>> blocks;
  int rows = 0;

  /// Family names in declaration order, each exactly once.
  std::vector<std::string> families() const;
};

/// Builds every residual block of the scenario: boundary, position,
/// velocity, rest, rest partition, capacity, collision, bounds, and the
/// enabled extensions, plus the smoothness objective terms.
ResidualSet build_residual_blocks(const Scenario& scenario, const VariableLayout& layout);

/// Sample times for position/velocity/rest/capacity blocks: the endpoints
/// and the midpoint of every segment, 2(N-1)+1 distinct times.
std::vector<double> constraint_sample_times(int node_count, double horizon);

/// Collision sampling: 11 equally spaced times on each segment; duplicates
/// at shared segment endpoints are retained, 11(N-1) samples total.
std::vector<double> collision_sample_times(int node_count, double horizon);

}  // namespace itamp
