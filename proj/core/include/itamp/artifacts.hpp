#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "itamp/layout.hpp"
#include "itamp/scene.hpp"
#include "itamp/solver.hpp"

namespace itamp {

/// Files exported by one solver run. Every artifact is reproducible
/// byte-for-byte from (scenario, config); plots are pure functions of the
/// CSVs.
struct RunArtifacts {
  std::filesystem::path trajectories;  // 101 uniform samples, one column per coordinate
  std::filesystem::path schedules;     // per-segment w / r / gamma values
  std::filesystem::path convergence;   // per-iteration objective and violations
  std::filesystem::path summary;       // key = value run summary
  std::vector<std::filesystem::path> plots;
};

RunArtifacts write_artifacts(const std::filesystem::path& dir, const Scenario& scenario,
                             const VariableLayout& layout, const SolveResult& result);

/// Renders step plots of the exported schedules and the convergence curve
/// into out_dir. Reads only the CSVs in artifacts_dir; throws
/// std::runtime_error naming any missing file.
std::vector<std::filesystem::path> write_plots(const std::filesystem::path& artifacts_dir,
                                               const std::filesystem::path& out_dir);

/// Write-temp-then-rename file write.
void atomic_write(const std::filesystem::path& path, const std::string& content);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::filesystem::path& path);

}  // namespace itamp
