#pragma once

#include <Eigen/Sparse>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "itamp/residuals.hpp"

namespace itamp {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Stacked penalty residual and sparse Jacobian at x. Row order follows
/// block declaration order, then sample order. Frozen columns (mask value 1)
/// are dropped from the Jacobian, which pins those variables.
struct AssembleResult {
  Eigen::VectorXd residual;              // penalty-transformed
  Eigen::VectorXd raw;                   // raw constraint/objective values
  Eigen::SparseMatrix<double> jacobian;  // of `residual`
  std::map<std::string, double> family_violations;  // constraint families only

  double objective() const { return 0.5 * residual.squaredNorm(); }
};

AssembleResult assemble(const ResidualSet& set, const Eigen::VectorXd& x, int variables,
                        const std::vector<std::uint8_t>* frozen = nullptr,
                        double constraint_scale = 1.0);

/// Solves the damped normal equations (J^T J + lambda I) d = -J^T r with a
/// sparse symmetric positive-definite factorization. Columns flagged in the
/// frozen mask are zeroed first, so the returned step is exactly zero on
/// frozen coordinates. On factorization failure the damping is increased
/// tenfold up to 10 times before reporting a SolverError.
Eigen::VectorXd gauss_newton_step(const Eigen::VectorXd& residual,
                                  const Eigen::SparseMatrix<double>& jacobian,
                                  double lambda,
                                  const std::vector<std::uint8_t>* frozen = nullptr);

struct IterationRecord {
  int iteration = 0;
  int round = 0;
  double objective = 0.0;
  double gradient_norm = 0.0;  // infinity norm of J^T r
  double lambda = 0.0;
  double step_norm = 0.0;
  bool accepted = false;
  std::map<std::string, double> violations;
};

struct SolveResult {
  Eigen::VectorXd x;
  std::vector<IterationRecord> history;
  std::map<std::string, double> final_violations;
  int iterations = 0;
  std::string termination;
  bool converged = false;
  double objective = 0.0;
};

/// Damped Gauss-Newton with backtracking line search on the penalized
/// objective 0.5 * |r|^2. Deterministic given identical inputs. Optional
/// outer rounds rescale the constraint penalty weights by `penalty_ramp`
/// between rounds. Per-iteration records go to `log` when given, one line
/// per iteration in key=value format.
SolveResult solve(const ResidualSet& set, Eigen::VectorXd init,
                  const SolverSettings& settings,
                  const std::vector<std::uint8_t>* frozen = nullptr,
                  std::ostream* log = nullptr);

/// Warm-start phase: runs `iterations` solver iterations with every object
/// pose-spline variable frozen; those coordinates are returned bit-for-bit
/// unchanged.
Eigen::VectorXd presolve(const Scenario& scenario, const VariableLayout& layout,
                         const ResidualSet& set, const Eigen::VectorXd& init,
                         int iterations, std::ostream* log = nullptr);

}  // namespace itamp
