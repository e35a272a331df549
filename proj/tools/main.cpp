#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <string>

#include "itamp/artifacts.hpp"
#include "itamp/initialization.hpp"
#include "itamp/jacobian_check.hpp"
#include "itamp/layout.hpp"
#include "itamp/residuals.hpp"
#include "itamp/scenario_io.hpp"
#include "itamp/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitSolver = 3;
constexpr int kExitValidation = 4;

int log_level() {
  const char* env = std::getenv("ITAMP_LOG");
  if (!env) return 1;
  return std::atoi(env);
}

int cmd_solve(const std::string& path, const std::string& out_dir, int max_iters,
              unsigned seed, const std::string& preset) {
  itamp::Scenario scenario = itamp::parse_scenario(path);
  if (max_iters >= 0) scenario.solver.max_iterations = max_iters;
  if (preset == "multi-object") {
    scenario.solver.multi_object_init = true;
    if (scenario.solver.presolve_iterations == 0) scenario.solver.presolve_iterations = 10;
  } else if (!preset.empty()) {
    std::cerr << "unknown preset '" << preset << "'\n";
    return kExitParse;
  }

  const itamp::VariableLayout layout = itamp::VariableLayout::build(scenario);
  Eigen::VectorXd x = scenario.solver.multi_object_init
                          ? itamp::initialize_multi_object(scenario, layout)
                          : itamp::initialize(scenario, layout);

  if (seed != 0) {
    // Symmetry-breaking jitter on the manipulator spline variables.
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> jitter(-1e-4, 1e-4);
    for (int i = 0; i < layout.manipulator_count(); ++i) {
      for (int s = 0; s < layout.node_count(); ++s) {
        for (int k = 0; k < layout.manipulator_dof(i); ++k) {
          x[layout.joint_value(i, s, k)] += jitter(rng);
          x[layout.joint_tangent(i, s, k)] += jitter(rng);
        }
      }
    }
  }

  const itamp::ResidualSet blocks = itamp::build_residual_blocks(scenario, layout);
  std::ostream* log = log_level() >= 2 ? &std::cerr : nullptr;

  if (scenario.solver.presolve_iterations > 0) {
    x = itamp::presolve(scenario, layout, blocks, x, scenario.solver.presolve_iterations,
                        log);
  }

  const itamp::SolveResult result = itamp::solve(blocks, x, scenario.solver, nullptr, log);
  const itamp::RunArtifacts artifacts =
      itamp::write_artifacts(out_dir, scenario, layout, result);

  if (log_level() >= 1) {
    std::cout << "variables: " << layout.total() << "\n";
    std::cout << "iterations: " << result.iterations << "\n";
    std::cout << "termination: " << result.termination << "\n";
    std::cout << "objective: " << result.objective << "\n";
    for (const auto& [family, viol] : result.final_violations) {
      std::cout << "violation." << family << ": " << viol << "\n";
    }
    std::cout << "artifacts: " << artifacts.summary.parent_path().string() << "\n";
  }
  return result.converged ? kExitOk : kExitSolver;
}

int cmd_check(const std::string& path, double tol, int states, unsigned seed,
              const std::string& perturb_family) {
  const itamp::Scenario scenario = itamp::parse_scenario(path);
  const itamp::VariableLayout layout = itamp::VariableLayout::build(scenario);
  const itamp::ResidualSet blocks = itamp::build_residual_blocks(scenario, layout);

  const std::string* sabotage = perturb_family.empty() ? nullptr : &perturb_family;
  const itamp::JacobianCheck check =
      itamp::check_jacobians(scenario, layout, blocks, states, seed, 1e-6, sabotage);

  bool ok = true;
  for (const auto& [family, err] : check.worst_error) {
    const bool pass = err <= tol;
    ok = ok && pass;
    std::cout << "family " << family << ": worst_rel_err=" << err
              << (pass ? " ok" : " FAIL") << "\n";
  }
  std::cout << (ok ? "jacobian check passed" : "jacobian check FAILED") << " (tol=" << tol
            << ", states=" << states << ")\n";
  return ok ? kExitOk : kExitValidation;
}

int cmd_info(const std::string& path) {
  const itamp::Scenario scenario = itamp::parse_scenario(path);
  const itamp::VariableLayout layout = itamp::VariableLayout::build(scenario);
  const itamp::ResidualSet blocks = itamp::build_residual_blocks(scenario, layout);

  std::cout << "variables: " << layout.total() << "\n";
  std::cout << "robots: " << scenario.manipulators.size() << "\n";
  std::cout << "objects: " << scenario.objects.size() << "\n";
  std::cout << "grasp_pairs: " << layout.pairs().size() << "\n";
  std::cout << "node_count: " << layout.node_count() << "\n";
  std::cout << "segments: " << layout.segment_count() << "\n";
  std::cout << "constraint_sample_times: "
            << itamp::constraint_sample_times(layout.node_count(), layout.horizon()).size()
            << "\n";
  std::cout << "collision_samples_per_pair: "
            << itamp::collision_sample_times(layout.node_count(), layout.horizon()).size()
            << "\n";

  struct FamilyInfo {
    int blocks = 0;
    int rows = 0;
    size_t samples = 0;
  };
  std::map<std::string, FamilyInfo> families;
  std::vector<std::string> order;
  for (const auto& b : blocks.blocks) {
    auto [it, inserted] = families.try_emplace(b->family());
    if (inserted) order.push_back(b->family());
    it->second.blocks += 1;
    it->second.rows += b->rows();
    it->second.samples = b->sample_times().size();
  }
  for (const std::string& name : order) {
    const FamilyInfo& info = families[name];
    std::cout << "family " << name << ": blocks=" << info.blocks << " rows=" << info.rows
              << " samples_per_block=" << info.samples << "\n";
  }
  std::cout << "total_rows: " << blocks.rows << "\n";
  return kExitOk;
}

int cmd_plot(const std::string& artifacts_dir, const std::string& out_dir) {
  const auto plots = itamp::write_plots(artifacts_dir, out_dir);
  for (const auto& p : plots) std::cout << p.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"implicit task-assignment trajectory optimizer"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", preset, perturb_family;
  int max_iters = -1, states = 10;
  unsigned seed = 0;
  double tol = 1e-5;

  CLI::App* solve = app.add_subcommand("solve", "solve a scenario and export artifacts");
  solve->add_option("scenario", scenario_path, "scenario file")->required();
  solve->add_option("--out", out_dir, "output directory");
  solve->add_option("--max-iters", max_iters, "iteration cap override");
  solve->add_option("--seed", seed, "symmetry-breaking jitter seed (0 = off)");
  solve->add_option("--preset", preset, "initialization preset (multi-object)");

  CLI::App* check = app.add_subcommand("check", "finite-difference Jacobian validation");
  check->add_option("scenario", scenario_path, "scenario file")->required();
  check->add_option("--tol", tol, "relative error tolerance");
  check->add_option("--states", states, "random states per family");
  check->add_option("--seed", seed, "random state seed");
  check->add_option("--perturb-family", perturb_family,
                    "fixture: corrupt one family's Jacobian");

  CLI::App* info = app.add_subcommand("info", "variable and block counts");
  info->add_option("scenario", scenario_path, "scenario file")->required();

  std::string plot_in, plot_out = ".";
  CLI::App* plot = app.add_subcommand("plot", "render SVG plots from exported CSVs");
  plot->add_option("artifacts", plot_in, "artifacts directory")->required();
  plot->add_option("-o,--out", plot_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(scenario_path, out_dir, max_iters, seed, preset);
    if (check->parsed()) return cmd_check(scenario_path, tol, states, seed, perturb_family);
    if (info->parsed()) return cmd_info(scenario_path);
    if (plot->parsed()) return cmd_plot(plot_in, plot_out);
  } catch (const itamp::ParseError& err) {
    std::cerr << "parse error: " << err.what() << "\n";
    return kExitParse;
  } catch (const itamp::SolverError& err) {
    std::cerr << "solver error: " << err.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitParse;
  }
  return kExitOk;
}
