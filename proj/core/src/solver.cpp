#include "itamp/solver.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <ostream>

namespace itamp {

namespace {

double sqrt_weight(double w) { return std::sqrt(w); }

}  // namespace

AssembleResult assemble(const ResidualSet& set, const Eigen::VectorXd& x, int variables,
                        const std::vector<std::uint8_t>* frozen, double constraint_scale) {
  AssembleResult out;
  out.raw.resize(set.rows);
  out.residual.resize(set.rows);
  std::vector<Eigen::Triplet<double>> triplets;

  int row0 = 0;
  for (const auto& block : set.blocks) {
    const size_t trip_begin = triplets.size();
    block->evaluate(x, out.raw.segment(row0, block->rows()), triplets, row0);

    const auto raw_block = out.raw.segment(row0, block->rows());
    if (!raw_block.allFinite()) {
      throw SolverError("non-finite residual in family '" + block->family() + "'");
    }

    double mu = block->weight();
    if (block->kind() != BlockKind::objective) mu *= constraint_scale;
    const double sq = sqrt_weight(mu);

    // Per-row scale chaining the penalty transform through the raw Jacobian.
    Eigen::VectorXd row_scale = Eigen::VectorXd::Constant(block->rows(), sq);
    if (block->kind() == BlockKind::inequality) {
      double viol = 0.0;
      for (int k = 0; k < block->rows(); ++k) {
        const double v = std::max(0.0, -raw_block[k]);
        viol = std::max(viol, v);
        out.residual[row0 + k] = sq * std::pow(v, 1.5);
        row_scale[k] = sq * (-1.5) * std::sqrt(v);
      }
      auto& fam = out.family_violations[block->family()];
      fam = std::max(fam, viol);
    } else {
      out.residual.segment(row0, block->rows()) = sq * raw_block;
      if (block->kind() == BlockKind::equality) {
        auto& fam = out.family_violations[block->family()];
        fam = std::max(fam, raw_block.cwiseAbs().maxCoeff());
      }
    }

    for (size_t k = trip_begin; k < triplets.size(); ++k) {
      auto& t = triplets[k];
      double v = t.value() * row_scale[t.row() - row0 + 0];
      if (frozen && (*frozen)[t.col()]) v = 0.0;
      t = Eigen::Triplet<double>(t.row(), t.col(), v);
    }
    row0 += block->rows();
  }

  out.jacobian.resize(set.rows, variables);
  out.jacobian.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

Eigen::VectorXd gauss_newton_step(const Eigen::VectorXd& residual,
                                  const Eigen::SparseMatrix<double>& jacobian,
                                  double lambda,
                                  const std::vector<std::uint8_t>* frozen) {
  Eigen::SparseMatrix<double> J = jacobian;
  if (frozen) {
    // Zeroing frozen columns makes the damped system return exactly zero on
    // those coordinates.
    for (int col = 0; col < J.outerSize(); ++col) {
      if (!(*frozen)[col]) continue;
      for (Eigen::SparseMatrix<double>::InnerIterator it(J, col); it; ++it) {
        it.valueRef() = 0.0;
      }
    }
  }

  const int n = static_cast<int>(J.cols());
  Eigen::SparseMatrix<double> JtJ = Eigen::SparseMatrix<double>(J.transpose()) * J;
  Eigen::SparseMatrix<double> identity(n, n);
  identity.setIdentity();
  const Eigen::VectorXd rhs = -(J.transpose() * residual);

  double lm = lambda;
  for (int attempt = 0; attempt < 10; ++attempt) {
    Eigen::SparseMatrix<double> system = JtJ;
    if (lm > 0.0) system = JtJ + lm * identity;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(system);
    if (chol.info() == Eigen::Success) {
      Eigen::VectorXd step = chol.solve(rhs);
      if (chol.info() == Eigen::Success && step.allFinite()) return step;
    }
    lm = std::max(lm * 10.0, 1e-12);
  }
  throw SolverError("normal-equation factorization failed after 10 damping increases");
}

SolveResult solve(const ResidualSet& set, Eigen::VectorXd init,
                  const SolverSettings& settings,
                  const std::vector<std::uint8_t>* frozen, std::ostream* log) {
  SolveResult result;
  result.x = std::move(init);
  const int variables = static_cast<int>(result.x.size());

  auto emit = [&](const IterationRecord& rec) {
    result.history.push_back(rec);
    if (!log) return;
    (*log) << "iter=" << rec.iteration << " round=" << rec.round
           << " objective=" << rec.objective << " grad_norm=" << rec.gradient_norm
           << " lambda=" << rec.lambda << " step_norm=" << rec.step_norm
           << " accepted=" << (rec.accepted ? 1 : 0);
    for (const auto& [family, viol] : rec.violations) {
      (*log) << " viol." << family << "=" << viol;
    }
    (*log) << "\n";
  };

  double lambda = settings.initial_damping;
  int total_iterations = 0;

  for (int round = 0; round < std::max(1, settings.outer_rounds); ++round) {
    const double scale = std::pow(settings.penalty_ramp, round);

    AssembleResult sys;
    try {
      sys = assemble(set, result.x, variables, frozen, scale);
    } catch (const SolverError& err) {
      result.termination = err.what();
      result.converged = false;
      return result;
    }
    double f = sys.objective();

    for (int iter = 0; iter < settings.max_iterations; ++iter) {
      const Eigen::VectorXd grad = sys.jacobian.transpose() * sys.residual;
      const double grad_norm = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;

      IterationRecord rec;
      rec.iteration = total_iterations;
      rec.round = round;
      rec.objective = f;
      rec.gradient_norm = grad_norm;
      rec.lambda = lambda;
      rec.violations = sys.family_violations;

      if (grad_norm <= settings.gradient_tolerance) {
        rec.accepted = true;
        emit(rec);
        result.termination = "gradient_tolerance";
        result.converged = true;
        result.final_violations = sys.family_violations;
        result.objective = f;
        result.iterations = total_iterations;
        goto done_round;
      }

      Eigen::VectorXd step;
      try {
        step = gauss_newton_step(sys.residual, sys.jacobian, lambda, frozen);
      } catch (const SolverError& err) {
        result.termination = err.what();
        result.converged = false;
        result.final_violations = sys.family_violations;
        result.objective = f;
        result.iterations = total_iterations;
        emit(rec);
        return result;
      }

      // Backtracking line search with an Armijo sufficient-decrease test.
      const double slope = grad.dot(step);
      double alpha = 1.0;
      bool accepted = false;
      AssembleResult next;
      if (slope < 0.0) {
        for (int ls = 0; ls <= settings.max_backtracks; ++ls) {
          bool finite = true;
          try {
            next = assemble(set, result.x + alpha * step, variables, frozen, scale);
          } catch (const SolverError&) {
            finite = false;
          }
          if (finite) {
            const double f_new = next.objective();
            if (std::isfinite(f_new) && f_new <= f + settings.armijo * alpha * slope) {
              accepted = true;
              break;
            }
          }
          alpha *= settings.backtrack;
        }
      }

      if (accepted) {
        result.x += alpha * step;
        sys = std::move(next);
        f = sys.objective();
        lambda = std::max(lambda * settings.damping_decrease, settings.damping_floor);
        rec.accepted = true;
        rec.step_norm = (alpha * step).cwiseAbs().maxCoeff();
        rec.objective = f;
        rec.violations = sys.family_violations;
        ++total_iterations;
        emit(rec);
        if (rec.step_norm <= settings.step_tolerance) {
          result.termination = "step_tolerance";
          result.converged = true;
          result.final_violations = sys.family_violations;
          result.objective = f;
          result.iterations = total_iterations;
          goto done_round;
        }
      } else {
        lambda *= settings.damping_increase;
        rec.accepted = false;
        ++total_iterations;
        emit(rec);
        if (lambda > 1e16) {
          result.termination = "stalled";
          result.converged = false;
          result.final_violations = sys.family_violations;
          result.objective = f;
          result.iterations = total_iterations;
          return result;
        }
      }
    }

    result.termination = "max_iterations";
    result.converged = false;
    result.final_violations = sys.family_violations;
    result.objective = f;
    result.iterations = total_iterations;
  done_round:;
  }

  return result;
}

Eigen::VectorXd presolve(const Scenario& scenario, const VariableLayout& layout,
                         const ResidualSet& set, const Eigen::VectorXd& init,
                         int iterations, std::ostream* log) {
  if (iterations <= 0) return init;
  const std::vector<std::uint8_t> mask = layout.object_spline_mask();
  SolverSettings settings = scenario.solver;
  settings.max_iterations = iterations;
  settings.outer_rounds = 1;
  SolveResult result = solve(set, init, settings, &mask, log);
  return result.x;
}

}  // namespace itamp
