// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "itamp/audits.hpp"
#include "itamp/extract.hpp"
#include "itamp/initialization.hpp"
#include "itamp/manifold.hpp"
#include "itamp/pose.hpp"
#include "itamp/residuals.hpp"
#include "itamp/scenario_io.hpp"
#include "itamp/solver.hpp"
#include "support/scenarios.hpp"

using namespace itamp;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

std::vector<Criterion> g_results;

template <typename Fn>
void criterion(int id, const std::string& name, double budget_s, Fn&& fn) {
  Criterion c{id, name};
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = fn(detail);
  } catch (const std::exception& err) {
    detail = std::string("exception: ") + err.what();
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (c.seconds > budget_s) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("exceeded runtime budget of ") +
              std::to_string(budget_s) + " s";
  }
  c.passed = ok;
  c.detail = detail;
  g_results.push_back(c);
  std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", id,
              name.c_str(), c.seconds, detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
}

std::string g_cli;
fs::path g_tmp;

int run_cli(const std::string& args, std::string& output) {
  const fs::path out_file = g_tmp / "cli_output.txt";
  const std::string cmd = g_cli + " " + args + " > " + out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::ostringstream buf;
  buf << in.rdbuf();
  output = buf.str();
  return status;
}

SolveResult run_scenario(const Scenario& sc, const VariableLayout& l) {
  const ResidualSet set = build_residual_blocks(sc, l);
  Eigen::VectorXd x = sc.solver.multi_object_init ? initialize_multi_object(sc, l)
                                                  : initialize(sc, l);
  if (sc.solver.presolve_iterations > 0) {
    x = presolve(sc, l, set, x, sc.solver.presolve_iterations);
  }
  return solve(set, x, sc.solver);
}

struct SolvedScenario {
  std::string name;
  Scenario sc;
  VariableLayout l;
  SolveResult result;
};
std::vector<SolvedScenario> g_solved;  // collected for the mode-exclusivity audit

bool object_at_goal(const Scenario& sc, const VariableLayout& l, const Eigen::VectorXd& x,
                    int j, double pos_tol, double rot_tol) {
  const Eigen::Matrix<double, 6, 1> goal = sc.objects[j].goal_pose.vector();
  const Eigen::Matrix<double, 6, 1> reached = object_spline(x, l, j).eval(l.horizon());
  if ((reached.head<3>() - goal.head<3>()).norm() > pos_tol) return false;
  const Eigen::Matrix3d R_goal = euler_to_rotation(goal.tail<3>());
  const Eigen::Matrix3d R_got = euler_to_rotation(reached.tail<3>());
  return log_so3(R_goal.transpose() * R_got).norm() <= rot_tol;
}

// --- criteria ---------------------------------------------------------------

bool table_variable_counts(std::string& detail) {
  const int expected[5] = {305, 436, 567, 698, 829};
  double cli_seconds = 0.0;
  for (int arms = 1; arms <= 5; ++arms) {
    const fs::path file = g_tmp / ("line" + std::to_string(arms) + ".scn");
    {
      std::ofstream out(file);
      out << write_scenario(testing::line_scenario(arms));
    }
    std::string output;
    const auto start = std::chrono::steady_clock::now();
    const int status = run_cli("info " + file.string(), output);
    cli_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (status != 0) {
      detail = "info exited nonzero";
      return false;
    }
    const std::string needle = "variables: " + std::to_string(expected[arms - 1]);
    if (output.find(needle) == std::string::npos) {
      detail = "missing '" + needle + "' for " + std::to_string(arms) + " arms";
      return false;
    }
  }
  if (cli_seconds > 1.0) {
    detail = "info calls took " + std::to_string(cli_seconds) + " s (budget 1 s)";
    return false;
  }
  detail = "info reports 305/436/567/698/829 in " + std::to_string(cli_seconds) + " s";
  return true;
}

bool manifold_grid(std::string& detail) {
  auto ramp = [](double to) {
    TrajectorySpline p(1, 1.0, 8);
    for (int k = 0; k < 8; ++k) {
      p.values()(0, k) = to * k / 7.0;
      p.tangents()(0, k) = to;
    }
    return p;
  };
  // d vanishes along w = 1 for any displacement
  for (double disp : {0.0, 0.25, 0.5, 1.0}) {
    if (minimize_manifold_distance_1d(ramp(disp), 1.0, 10) > 1e-6) {
      detail = "w = 1 column not flat";
      return false;
    }
  }
  // and along zero displacement for any w
  for (double w : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    if (minimize_manifold_distance_1d(ramp(0.0), w, 10) > 1e-6) {
      detail = "zero-displacement row not flat";
      return false;
    }
  }
  // interior point: matched trajectories evaluate to 0.25 exactly
  const TrajectorySpline unit = ramp(1.0);
  const double matched = manifold_distance_1d(unit, unit, 0.5, 0.0, 1.0);
  if (std::abs(matched - 0.25) > 1e-6) {
    detail = "matched value " + std::to_string(matched);
    return false;
  }
  const double minimized = minimize_manifold_distance_1d(unit, 0.5, 10);
  if (minimized < 0.01) {
    detail = "interior point collapsed to " + std::to_string(minimized);
    return false;
  }
  detail = "matched 0.25, minimized >= 0.01 at (w=0.5, disp=1)";
  return true;
}

bool jacobian_suite(std::string& detail) {
  const fs::path file = g_tmp / "check.scn";
  {
    std::ofstream out(file);
    out << write_scenario(testing::check_scenario());
  }
  std::string output;
  const int status = run_cli("check " + file.string() + " --states 10 --tol 1e-5", output);
  if (status != 0) {
    detail = "check exited nonzero:\n" + output;
    return false;
  }
  detail = "cmd_check passed at 1e-5";
  return true;
}

bool pick_and_place(std::string& detail) {
  const Scenario sc = testing::pick_and_place_scenario();
  const VariableLayout l = VariableLayout::build(sc);
  const SolveResult result = run_scenario(sc, l);
  if (!result.converged) {
    detail = "did not converge: " + result.termination;
    return false;
  }
  g_solved.push_back({"pick_and_place", sc, l, result});
  if (!object_at_goal(sc, l, result.x, 0, 1e-2, 5e-2)) {
    detail = "object missed the goal";
    return false;
  }
  const double pos_viol = max_position_violation(sc, l, result.x, 0.1);
  if (pos_viol > 1e-3) {
    detail = "position violation " + std::to_string(pos_viol);
    return false;
  }
  const double cap = max_capacity_violation(sc, l, result.x);
  const double bounds = max_bounds_violation(sc, l, result.x);
  if (cap > 1e-6 || bounds > 1e-6) {
    detail = "capacity " + std::to_string(cap) + ", bounds " + std::to_string(bounds);
    return false;
  }
  detail = "converged in " + std::to_string(result.iterations) + " iterations";
  return true;
}

bool handover_emergence(std::string& detail) {
  // restricted: both arms must participate, left before right
  {
    const Scenario sc = testing::handover_scenario(true);
    const VariableLayout l = VariableLayout::build(sc);
    const SolveResult result = run_scenario(sc, l);
    if (!result.converged) {
      detail = "restricted case did not converge: " + result.termination;
      return false;
    }
    g_solved.push_back({"handover", sc, l, result});
    if (!object_at_goal(sc, l, result.x, 0, 1e-2, 5e-2)) {
      detail = "restricted case missed the goal";
      return false;
    }
    const SegmentSchedule wa = weight_schedule(result.x, l, 0);
    const SegmentSchedule wb = weight_schedule(result.x, l, 1);
    if (wa.values().maxCoeff() < 0.5 || wb.values().maxCoeff() < 0.5) {
      detail = "one arm never engaged";
      return false;
    }
    auto window = [&](const SegmentSchedule& w) {
      int first = -1, last = -1;
      for (int s = 0; s < w.segment_count(); ++s) {
        if (w.values()[s] >= 0.5) {
          if (first < 0) first = s;
          last = s;
        }
      }
      return std::make_pair(first, last);
    };
    const auto [a0, a1] = window(wa);
    const auto [b0, b1] = window(wb);
    if (!(a0 <= b0 && a1 <= b1)) {
      detail = "left window does not precede right";
      return false;
    }
  }
  // unrestricted: the long right arm completes the task alone
  {
    const Scenario sc = testing::handover_scenario(false);
    const VariableLayout l = VariableLayout::build(sc);
    const SolveResult result = run_scenario(sc, l);
    if (!result.converged) {
      detail = "unrestricted case did not converge: " + result.termination;
      return false;
    }
    g_solved.push_back({"handover_free", sc, l, result});
    if (!object_at_goal(sc, l, result.x, 0, 1e-2, 5e-2)) {
      detail = "unrestricted case missed the goal";
      return false;
    }
    const SegmentSchedule wa = weight_schedule(result.x, l, 0);
    if (wa.values().maxCoeff() > 0.1) {
      detail = "short arm still engaged at w = " + std::to_string(wa.values().maxCoeff());
      return false;
    }
  }
  detail = "handover emerges only under the reach restriction";
  return true;
}

bool mode_exclusivity(std::string& detail) {
  if (g_solved.empty()) {
    detail = "no converged scenarios to audit";
    return false;
  }
  for (const SolvedScenario& s : g_solved) {
    const double deficit = mode_exclusivity_deficit(s.l, s.result.x, 1e-3);
    if (deficit > 1e-2) {
      detail = s.name + " deficit " + std::to_string(deficit);
      return false;
    }
  }
  detail = std::to_string(g_solved.size()) + " solved scenarios audited";
  return true;
}

bool schedule_shaping(std::string& detail) {
  const Scenario sc = testing::two_object_scenario();
  const VariableLayout l = VariableLayout::build(sc);
  const SolveResult base = run_scenario(sc, l);
  if (!base.converged) {
    detail = "base solve did not converge: " + base.termination;
    return false;
  }
  g_solved.push_back({"two_object", sc, l, base});

  Scenario shaped = sc;
  shaped.objective.object_accel = {1.0};
  const ResidualSet set2 = build_residual_blocks(shaped, l);
  const SolveResult cont = solve(set2, base.x, shaped.solver);
  if (!cont.converged) {
    detail = "continuation did not converge: " + cont.termination;
    return false;
  }
  g_solved.push_back({"two_object_shaped", shaped, l, cont});

  auto weight_sum = [&](const Eigen::VectorXd& x, int j, int s) {
    double sum = 0.0;
    for (int p = 0; p < static_cast<int>(l.pairs().size()); ++p) {
      if (l.pairs()[p].graspable == GraspableRef{true, j}) sum += x[l.weight(p, s)];
    }
    return sum;
  };
  auto windows = [&](const Eigen::VectorXd& x) {
    std::vector<int> lengths(2, 0);
    for (int j = 0; j < 2; ++j) {
      for (int s = 0; s < l.segment_count(); ++s) {
        if (weight_sum(x, j, s) > 0.5) ++lengths[j];
      }
    }
    return lengths;
  };
  for (int s = 0; s < l.segment_count(); ++s) {
    if (weight_sum(base.x, 0, s) > 0.5 && weight_sum(base.x, 1, s) > 0.5) {
      detail = "base windows overlap";
      return false;
    }
    if (weight_sum(cont.x, 0, s) > 0.5 && weight_sum(cont.x, 1, s) > 0.5) {
      detail = "shaped windows overlap";
      return false;
    }
  }
  const std::vector<int> w0 = windows(base.x);
  const std::vector<int> w1 = windows(cont.x);
  if (w0 == w1) {
    detail = "window lengths unchanged";
    return false;
  }
  std::ostringstream msg;
  msg << "windows (" << w0[0] << "," << w0[1] << ") -> (" << w1[0] << "," << w1[1] << ")";
  detail = msg.str();
  return true;
}

bool weight_rate_limit(std::string& detail) {
  Scenario sc = testing::handover_scenario(true);
  sc.horizon = 9.0;  // 1 s segments
  sc.segments = 9;
  sc.extensions.weight_rate_limits = true;
  sc.extensions.rate_upper = 0.5;
  sc.extensions.rate_lower = -0.5;
  sc.solver.outer_rounds = 4;
  sc.solver.penalty_ramp = 1000.0;
  sc.solver.max_iterations = 400;
  const VariableLayout l = VariableLayout::build(sc);
  const SolveResult result = run_scenario(sc, l);
  if (!result.converged) {
    detail = "did not converge: " + result.termination;
    return false;
  }
  g_solved.push_back({"rate_limited", sc, l, result});

  const double step = max_weight_step(l, result.x);
  if (step > 0.5 + 1e-6) {
    detail = "adjacent weight change " + std::to_string(step);
    return false;
  }
  // the object may only move while its weights sum close to one
  const TrajectorySpline obj = object_spline(result.x, l, 0);
  for (double t : constraint_sample_times(l.node_count(), l.horizon())) {
    double sum = 0.0;
    const int s = std::min(static_cast<int>(t * l.segment_count() / l.horizon()),
                           l.segment_count() - 1);
    for (int p = 0; p < static_cast<int>(l.pairs().size()); ++p) {
      if (l.pairs()[p].graspable.is_object) sum += result.x[l.weight(p, s)];
    }
    if (sum <= 0.9 && obj.velocity(t).head<3>().norm() > 1e-3) {
      detail = "object moved at weight sum " + std::to_string(sum);
      return false;
    }
  }
  detail = "max |dw| = " + std::to_string(step);
  return true;
}

bool sampling_contract(std::string& detail) {
  const Scenario sc = testing::pick_and_place_scenario();  // N = 10
  const VariableLayout l = VariableLayout::build(sc);
  const ResidualSet set = build_residual_blocks(sc, l);
  const int samples = 2 * (l.node_count() - 1) + 1;
  const int csamples = 11 * (l.node_count() - 1);
  for (const auto& b : set.blocks) {
    const std::string& f = b->family();
    if (f == "position" || f == "velocity") {
      if (static_cast<int>(b->sample_times().size()) != samples ||
          b->rows() != 6 * samples) {
        detail = f + " block has wrong sampling";
        return false;
      }
    } else if (f == "rest") {
      if (static_cast<int>(b->sample_times().size()) != samples ||
          b->rows() != 2 * samples) {
        detail = "rest block has wrong sampling";
        return false;
      }
    } else if (f == "collision") {
      if (static_cast<int>(b->sample_times().size()) != csamples ||
          b->rows() != csamples) {
        detail = "collision block has wrong sampling";
        return false;
      }
    }
  }
  detail = "position/velocity/rest at 19 samples, collision at 99 per pair";
  return true;
}

bool convergence_trend(std::string& detail) {
  // Wall-clock times, mesh scenes, the specific 4-handover local minimum and
  // absolute objective values are out of scope; only the qualitative trend
  // "iterations to convergence is non-decreasing in the number of arms" is
  // reproduced on the 1-3 arm line scenarios.
  std::vector<int> iterations;
  for (int arms = 1; arms <= 3; ++arms) {
    const Scenario sc = testing::line_scenario(arms);
    const VariableLayout l = VariableLayout::build(sc);
    const SolveResult result = run_scenario(sc, l);
    if (!result.converged) {
      detail = std::to_string(arms) + "-arm line did not converge: " + result.termination;
      return false;
    }
    g_solved.push_back({"line" + std::to_string(arms), sc, l, result});
    iterations.push_back(result.iterations);
  }
  for (size_t k = 1; k < iterations.size(); ++k) {
    if (iterations[k] < iterations[k - 1]) {
      detail = "iterations decreased with more arms";
      return false;
    }
  }
  std::ostringstream msg;
  msg << "iterations " << iterations[0] << " <= " << iterations[1] << " <= "
      << iterations[2];
  detail = msg.str();
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  for (int k = 1; k + 1 < argc; ++k) {
    if (std::string(argv[k]) == "--cli") g_cli = argv[k + 1];
  }
  if (g_cli.empty()) {
    std::cerr << "usage: itamp_acceptance --cli <path-to-itamp-binary>\n";
    return 2;
  }
  g_tmp = fs::temp_directory_path() / "itamp_acceptance";
  fs::create_directories(g_tmp);

  criterion(1, "Table variable counts (305..829, exact)", 30.0, table_variable_counts);
  criterion(2, "1-D constraint-manifold grid", 10.0, manifold_grid);
  criterion(3, "finite-difference Jacobian suite", 60.0, jacobian_suite);
  criterion(4, "single-arm pick and place", 30.0, pick_and_place);
  criterion(5, "handover emergence under reach limits", 120.0, handover_emergence);
  criterion(7, "schedule shaping via object-acceleration terms", 120.0, schedule_shaping);
  criterion(8, "association-weight rate limits", 120.0, weight_rate_limit);
  criterion(6, "mode-exclusivity audit over all solved scenarios", 60.0, mode_exclusivity);
  criterion(9, "sampling contract row counts", 5.0, sampling_contract);
  criterion(10, "iterations non-decreasing over the 1-3 arm line", 600.0, convergence_trend);

  int failures = 0;
  for (const Criterion& c : g_results) failures += c.passed ? 0 : 1;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(g_results.size()) - failures,
              g_results.size());
  return failures == 0 ? 0 : 1;
}
