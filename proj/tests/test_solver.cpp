#include <doctest.h>

#include <random>

#include "itamp/audits.hpp"
#include "itamp/extract.hpp"
#include "itamp/initialization.hpp"
#include "itamp/manifold.hpp"
#include "itamp/solver.hpp"
#include "support/scenarios.hpp"

using namespace itamp;

namespace {

class IdentityBlock : public ResidualBlock {
 public:
  explicit IdentityBlock(int n) : ResidualBlock("identity", BlockKind::equality, 1.0, n) {}

  void evaluate(const Eigen::VectorXd& x, Eigen::Ref<Eigen::VectorXd> r,
                std::vector<Eigen::Triplet<double>>& jac, int row0) const override {
    for (int i = 0; i < rows(); ++i) {
      r[i] = x[i];
      jac.emplace_back(row0 + i, i, 1.0);
    }
  }
};

ManipulatorSpec rail(const std::string& name) {
  ManipulatorSpec m;
  m.name = name;
  Joint j;
  j.kind = JointKind::prismatic;
  j.axis = Eigen::Vector3d::UnitX();
  j.origin = Pose({0, 0, 0.1}, {0, 0, 0});
  j.lower = -2;
  j.upper = 2;
  m.chain.joints = {j};
  m.rest_configuration = Eigen::VectorXd::Zero(1);
  return m;
}

Scenario transport_toy() {
  Scenario sc;
  sc.manipulators = {rail("carriage")};
  sc.objects = {testing::upright_object("box", 0.0, 0.0, 1.0, 0.0)};
  sc.horizon = 4.0;
  sc.segments = 4;
  sc.collision_pairs = CollisionPairPolicy::none;
  sc.objective.beta1 = 1e-3;
  sc.solver.max_iterations = 300;
  sc.solver.initial_damping = 1e-3;
  return sc;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("assemble: empty set") {
    ResidualSet set;
    const AssembleResult sys = assemble(set, Eigen::VectorXd::Zero(5), 5);
    CHECK(sys.residual.size() == 0);
    CHECK(sys.jacobian.rows() == 0);
    CHECK(sys.jacobian.cols() == 5);
  }

  TEST_CASE("assemble: one equality block, three samples, six rows each") {
    Scenario sc = transport_toy();
    sc.segments = 1;  // three constraint samples
    const VariableLayout l = VariableLayout::build(sc);
    const ResidualSet set = build_residual_blocks(sc, l);
    for (const auto& b : set.blocks) {
      if (b->family() == std::string("velocity")) CHECK(b->rows() == 18);
    }
  }

  TEST_CASE("assemble: J^T r matches the gradient of the penalized objective") {
    const Scenario sc = testing::check_scenario();
    const VariableLayout l = VariableLayout::build(sc);
    const ResidualSet set = build_residual_blocks(sc, l);
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    Eigen::VectorXd x = initialize(sc, l);
    for (int k = 0; k < x.size(); ++k) x[k] += u(rng);

    const AssembleResult sys = assemble(set, x, l.total());
    const Eigen::VectorXd grad = sys.jacobian.transpose() * sys.residual;
    const double h = 1e-6;
    std::uniform_int_distribution<int> pick(0, l.total() - 1);
    for (int trial = 0; trial < 25; ++trial) {
      const int k = pick(rng);
      Eigen::VectorXd xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      const double fd =
          (assemble(set, xp, l.total()).objective() - assemble(set, xm, l.total()).objective()) /
          (2 * h);
      CHECK(std::abs(grad[k] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }

  TEST_CASE("gauss-newton step: identity residual converges in one step") {
    ResidualSet set;
    set.blocks.push_back(std::make_unique<IdentityBlock>(4));
    set.rows = 4;
    Eigen::VectorXd x(4);
    x << 1.0, -2.0, 0.5, 3.0;
    const AssembleResult sys = assemble(set, x, 4);
    const Eigen::VectorXd step = gauss_newton_step(sys.residual, sys.jacobian, 0.0);
    CHECK((step + x).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("gauss-newton step: huge damping follows the gradient") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<Eigen::Triplet<double>> trip;
    const int rows = 12, cols = 6;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if ((r + c) % 2 == 0) trip.emplace_back(r, c, u(rng));
      }
    }
    Eigen::SparseMatrix<double> J(rows, cols);
    J.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd r(rows);
    for (int k = 0; k < rows; ++k) r[k] = u(rng);

    const Eigen::VectorXd step = gauss_newton_step(r, J, 1e12);
    const Eigen::VectorXd grad_dir = (-(J.transpose() * r)).normalized();
    const double cos_angle = step.normalized().dot(grad_dir);
    CHECK(cos_angle > std::cos(1.0 * M_PI / 180.0));
  }

  TEST_CASE("gauss-newton step matches a dense factorization oracle") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 10; ++trial) {
      const int rows = 15, cols = 8;
      Eigen::MatrixXd Jd(rows, cols);
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) Jd(r, c) = u(rng);
      }
      Eigen::VectorXd r(rows);
      for (int k = 0; k < rows; ++k) r[k] = u(rng);
      const double lambda = 0.3;

      const Eigen::MatrixXd lhs =
          Jd.transpose() * Jd + lambda * Eigen::MatrixXd::Identity(cols, cols);
      const Eigen::VectorXd expect = lhs.ldlt().solve(-Jd.transpose() * r);

      const Eigen::SparseMatrix<double> J = Jd.sparseView();
      const Eigen::VectorXd got = gauss_newton_step(r, J, lambda);
      CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("already-optimal input terminates immediately") {
    Scenario sc = transport_toy();
    sc.objects[0].goal_pose = sc.objects[0].start_pose;  // nothing to do
    const VariableLayout l = VariableLayout::build(sc);
    const ResidualSet set = build_residual_blocks(sc, l);
    Eigen::VectorXd x = initialize(sc, l);
    // zero weights, rest weight concentrated on the actual resting pose
    for (int p = 0; p < static_cast<int>(l.pairs().size()); ++p) {
      for (int s = 0; s < l.segment_count(); ++s) x[l.weight(p, s)] = 0.0;
    }
    for (int d = 0; d < l.rest_pose_count(0); ++d) {
      const bool upright = sc.objects[0].rest_poses[d].axis[2] > 0.5;
      for (int s = 0; s < l.segment_count(); ++s) {
        x[l.rest_weight(0, d, s)] = upright ? 1.0 : 0.0;
      }
    }
    const SolveResult result = solve(set, x, sc.solver);
    CHECK(result.converged);
    CHECK(result.iterations <= 2);
    CHECK(result.objective < 1e-20);
  }

  TEST_CASE("1-D transport toy: weight locks to one while the object moves") {
    const Scenario sc = transport_toy();
    const VariableLayout l = VariableLayout::build(sc);
    const ResidualSet set = build_residual_blocks(sc, l);
    const SolveResult result = solve(set, initialize(sc, l), sc.solver);
    REQUIRE(result.converged);

    const SegmentSchedule w = weight_schedule(result.x, l, 0);
    CHECK(w.values().maxCoeff() > 0.95);

    // The carriage rides the object over the whole horizon, so the 1-D
    // manifold distance with w = 1 is (near) zero.
    const TrajectorySpline carriage = manipulator_spline(result.x, l, 0);
    const TrajectorySpline object = object_spline(result.x, l, 0);
    TrajectorySpline m(1, sc.horizon, l.node_count());
    TrajectorySpline p(1, sc.horizon, l.node_count());
    for (int s = 0; s < l.node_count(); ++s) {
      m.values()(0, s) = carriage.values()(0, s);
      m.tangents()(0, s) = carriage.tangents()(0, s);
      p.values()(0, s) = object.values()(0, s);
      p.tangents()(0, s) = object.tangents()(0, s);
    }
    CHECK(manifold_distance_1d(m, p, 1.0, 0.0, sc.horizon) < 1e-6);

    // object actually transported
    CHECK(std::abs(object.eval(sc.horizon)[0] - 1.0) < 1e-2);
    CHECK(mode_exclusivity_deficit(l, result.x, 1e-3) <= 1e-2);
  }

  TEST_CASE("accepted steps never increase the penalized objective") {
    const Scenario sc = transport_toy();
    const VariableLayout l = VariableLayout::build(sc);
    const ResidualSet set = build_residual_blocks(sc, l);
    const SolveResult result = solve(set, initialize(sc, l), sc.solver);
    double last = std::numeric_limits<double>::infinity();
    for (const IterationRecord& rec : result.history) {
      if (rec.accepted) {
        CHECK(rec.objective <= last + 1e-15);
        last = rec.objective;
      }
    }
  }

  TEST_CASE("determinism: bit-identical histories and solutions") {
    const Scenario sc = transport_toy();
    const VariableLayout l = VariableLayout::build(sc);
    const ResidualSet set = build_residual_blocks(sc, l);
    const SolveResult a = solve(set, initialize(sc, l), sc.solver);
    const SolveResult b = solve(set, initialize(sc, l), sc.solver);
    REQUIRE(a.history.size() == b.history.size());
    for (size_t k = 0; k < a.history.size(); ++k) {
      CHECK(a.history[k].objective == b.history[k].objective);
      CHECK(a.history[k].gradient_norm == b.history[k].gradient_norm);
      CHECK(a.history[k].lambda == b.history[k].lambda);
    }
    CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("frozen coordinates never move") {
    const Scenario sc = transport_toy();
    const VariableLayout l = VariableLayout::build(sc);
    const ResidualSet set = build_residual_blocks(sc, l);
    const Eigen::VectorXd init = initialize(sc, l);

    SUBCASE("presolve freezes the object splines bit-for-bit") {
      const Eigen::VectorXd out = presolve(sc, l, set, init, 10);
      const auto mask = l.object_spline_mask();
      bool any_free_moved = false;
      for (int v = 0; v < l.total(); ++v) {
        if (mask[v]) {
          CHECK(out[v] == init[v]);
        } else if (out[v] != init[v]) {
          any_free_moved = true;
        }
      }
      CHECK(any_free_moved);
    }
    SUBCASE("zero presolve iterations return the input unchanged") {
      const Eigen::VectorXd out = presolve(sc, l, set, init, 0);
      CHECK((out - init).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("presolve does not increase the penalized objective") {
      const Eigen::VectorXd out = presolve(sc, l, set, init, 10);
      CHECK(assemble(set, out, l.total()).objective() <=
            assemble(set, init, l.total()).objective() + 1e-12);
    }
  }

  TEST_CASE("non-finite residual at the start names the offending family") {
    const Scenario sc = transport_toy();
    const VariableLayout l = VariableLayout::build(sc);
    const ResidualSet set = build_residual_blocks(sc, l);
    Eigen::VectorXd x = initialize(sc, l);
    x[l.joint_value(0, 0, 0)] = std::numeric_limits<double>::quiet_NaN();
    const SolveResult result = solve(set, x, sc.solver);
    CHECK_FALSE(result.converged);
    CHECK(result.termination.find("non-finite") != std::string::npos);
    CHECK(result.termination.find("boundary") != std::string::npos);
  }
}
