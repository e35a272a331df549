#include "itamp/artifacts.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "itamp/extract.hpp"

namespace itamp {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string pair_label(const Scenario& sc, const GraspPair& pair) {
  const std::string holder = sc.manipulators[pair.manipulator].name;
  const std::string target = pair.graspable.is_object
                                 ? sc.objects[pair.graspable.index].name
                                 : sc.manipulators[pair.graspable.index].name;
  return holder + "." + target;
}

constexpr int kTrajectorySamples = 101;

std::string trajectories_csv(const Scenario& sc, const VariableLayout& l,
                             const Eigen::VectorXd& x) {
  std::ostringstream out;
  out << "time";
  for (int i = 0; i < l.manipulator_count(); ++i) {
    for (int k = 0; k < l.manipulator_dof(i); ++k) {
      out << "," << sc.manipulators[i].name << ".q" << k;
    }
  }
  static const char* kCoords[6] = {"px", "py", "pz", "rx", "ry", "rz"};
  for (int j = 0; j < l.object_count(); ++j) {
    for (const char* c : kCoords) out << "," << sc.objects[j].name << "." << c;
  }
  out << "\n";

  std::vector<TrajectorySpline> manips, objects;
  for (int i = 0; i < l.manipulator_count(); ++i) manips.push_back(manipulator_spline(x, l, i));
  for (int j = 0; j < l.object_count(); ++j) objects.push_back(object_spline(x, l, j));

  for (int s = 0; s < kTrajectorySamples; ++s) {
    const double t = l.horizon() * s / (kTrajectorySamples - 1);
    out << fmt(t);
    for (const TrajectorySpline& spline : manips) {
      const Eigen::VectorXd q = spline.eval(t);
      for (int k = 0; k < q.size(); ++k) out << "," << fmt(q[k]);
    }
    for (const TrajectorySpline& spline : objects) {
      const Eigen::VectorXd p = spline.eval(t);
      for (int c = 0; c < 6; ++c) out << "," << fmt(p[c]);
    }
    out << "\n";
  }
  return out.str();
}

std::string schedules_csv(const Scenario& sc, const VariableLayout& l,
                          const Eigen::VectorXd& x) {
  std::ostringstream out;
  out << "segment,t_start,t_end";
  for (int p = 0; p < static_cast<int>(l.pairs().size()); ++p) {
    out << ",w." << pair_label(sc, l.pairs()[p]);
  }
  for (int j = 0; j < l.object_count(); ++j) {
    for (int d = 0; d < l.rest_pose_count(j); ++d) {
      out << ",r." << sc.objects[j].name << ".d" << d;
    }
  }
  if (l.has_orientation_weights()) {
    for (int p = 0; p < static_cast<int>(l.pairs().size()); ++p) {
      if (!l.pairs()[p].graspable.is_object) continue;
      for (int k = 0; k < VariableLayout::kOrientationCount; ++k) {
        out << ",gamma." << pair_label(sc, l.pairs()[p]) << ".k" << k;
      }
    }
  }
  out << "\n";

  const double h = l.horizon() / l.segment_count();
  for (int s = 0; s < l.segment_count(); ++s) {
    out << s << "," << fmt(s * h) << "," << fmt((s + 1) * h);
    for (int p = 0; p < static_cast<int>(l.pairs().size()); ++p) {
      out << "," << fmt(x[l.weight(p, s)]);
    }
    for (int j = 0; j < l.object_count(); ++j) {
      for (int d = 0; d < l.rest_pose_count(j); ++d) {
        out << "," << fmt(x[l.rest_weight(j, d, s)]);
      }
    }
    if (l.has_orientation_weights()) {
      for (int p = 0; p < static_cast<int>(l.pairs().size()); ++p) {
        if (!l.pairs()[p].graspable.is_object) continue;
        for (int k = 0; k < VariableLayout::kOrientationCount; ++k) {
          out << "," << fmt(x[l.orientation_weight(p, k, s)]);
        }
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string convergence_csv(const SolveResult& result) {
  std::ostringstream out;
  out << "iteration,round,objective,gradient_norm,lambda,step_norm,accepted";
  std::vector<std::string> families;
  if (!result.history.empty()) {
    for (const auto& [family, _] : result.history.front().violations) {
      families.push_back(family);
      out << ",viol." << family;
    }
  }
  out << "\n";
  for (const IterationRecord& rec : result.history) {
    out << rec.iteration << "," << rec.round << "," << fmt(rec.objective) << ","
        << fmt(rec.gradient_norm) << "," << fmt(rec.lambda) << "," << fmt(rec.step_norm)
        << "," << (rec.accepted ? 1 : 0);
    for (const std::string& family : families) {
      const auto it = rec.violations.find(family);
      out << "," << fmt(it == rec.violations.end() ? 0.0 : it->second);
    }
    out << "\n";
  }
  return out.str();
}

std::string summary_text(const VariableLayout& l, const SolveResult& result) {
  std::ostringstream out;
  out << "variables = " << l.total() << "\n";
  out << "iterations = " << result.iterations << "\n";
  out << "termination = " << result.termination << "\n";
  out << "converged = " << (result.converged ? "true" : "false") << "\n";
  out << "objective = " << fmt(result.objective) << "\n";
  for (const auto& [family, viol] : result.final_violations) {
    out << "violation." << family << " = " << fmt(viol) << "\n";
  }
  return out.str();
}

// --- SVG ------------------------------------------------------------------

constexpr double kW = 800, kH = 400;
constexpr double kMargin = 50;

const char* kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

double sx(double t, double t_max) { return kMargin + (kW - 2 * kMargin) * t / t_max; }
double sy(double v, double lo, double hi) {
  return kH - kMargin - (kH - 2 * kMargin) * (v - lo) / (hi - lo);
}

std::string svg_header(const std::string& title) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kW << " " << kH
      << "\">\n";
  out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kMargin << "\" y=\"24\" font-size=\"16\">" << title
      << "</text>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\""
      << kW - kMargin << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
  return out.str();
}

/// Step plot of per-segment schedules in [0, 1] over time.
std::string schedule_svg(const std::string& title, const CsvTable& table,
                         const std::string& prefix) {
  const int c_start = table.column("t_start");
  const int c_end = table.column("t_end");
  if (c_start < 0 || c_end < 0) throw std::runtime_error("schedules CSV lacks time columns");
  const double t_max = table.rows.empty() ? 1.0 : table.rows.back()[c_end];

  std::ostringstream out;
  out << svg_header(title);
  int color = 0;
  double legend_y = 40;
  for (size_t c = 0; c < table.header.size(); ++c) {
    const std::string& name = table.header[c];
    if (name.rfind(prefix, 0) != 0) continue;
    std::ostringstream pts;
    for (const auto& row : table.rows) {
      pts << sx(row[c_start], t_max) << "," << sy(row[c], 0, 1) << " ";
      pts << sx(row[c_end], t_max) << "," << sy(row[c], 0, 1) << " ";
    }
    out << "<polyline data-name=\"" << name << "\" fill=\"none\" stroke=\""
        << kPalette[color % 8] << "\" stroke-width=\"2\" points=\"" << pts.str()
        << "\"/>\n";
    out << "<text x=\"" << kW - kMargin - 180 << "\" y=\"" << legend_y
        << "\" font-size=\"12\" fill=\"" << kPalette[color % 8] << "\">" << name
        << "</text>\n";
    legend_y += 16;
    ++color;
  }
  out << "</svg>\n";
  return out.str();
}

std::string convergence_svg(const CsvTable& table) {
  const int c_obj = table.column("objective");
  if (c_obj < 0) throw std::runtime_error("convergence CSV lacks objective column");
  double lo = 1e300, hi = -1e300;
  for (const auto& row : table.rows) {
    lo = std::min(lo, row[c_obj]);
    hi = std::max(hi, row[c_obj]);
  }
  if (table.rows.empty()) lo = 0, hi = 1;
  if (hi <= lo) hi = lo + 1;

  std::ostringstream out;
  out << svg_header("penalized objective per iteration");
  std::ostringstream pts;
  const double n = std::max<size_t>(table.rows.size() - 1, 1);
  for (size_t k = 0; k < table.rows.size(); ++k) {
    pts << sx(static_cast<double>(k), n) << "," << sy(table.rows[k][c_obj], lo, hi) << " ";
  }
  out << "<polyline data-name=\"objective\" fill=\"none\" stroke=\"#1f77b4\" "
      << "stroke-width=\"2\" points=\"" << pts.str() << "\"/>\n";
  out << "<text x=\"" << kMargin + 4 << "\" y=\"" << kMargin + 4
      << "\" font-size=\"12\">max " << fmt(hi) << "</text>\n";
  out << "<text x=\"" << kMargin + 4 << "\" y=\"" << kH - kMargin - 6
      << "\" font-size=\"12\">min " << fmt(lo) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing CSV file: " + path.string());
  CsvTable table;
  std::string line;
  if (std::getline(in, line)) {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream rs(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
    table.rows.push_back(std::move(row));
  }
  return table;
}

int CsvTable::column(const std::string& name) const {
  for (size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return static_cast<int>(c);
  }
  return -1;
}

RunArtifacts write_artifacts(const std::filesystem::path& dir, const Scenario& scenario,
                             const VariableLayout& layout, const SolveResult& result) {
  std::filesystem::create_directories(dir);
  RunArtifacts artifacts;
  artifacts.trajectories = dir / "trajectories.csv";
  artifacts.schedules = dir / "schedules.csv";
  artifacts.convergence = dir / "convergence.csv";
  artifacts.summary = dir / "summary.txt";

  atomic_write(artifacts.trajectories, trajectories_csv(scenario, layout, result.x));
  atomic_write(artifacts.schedules, schedules_csv(scenario, layout, result.x));
  atomic_write(artifacts.convergence, convergence_csv(result));
  atomic_write(artifacts.summary, summary_text(layout, result));
  artifacts.plots = write_plots(dir, dir);
  return artifacts;
}

std::vector<std::filesystem::path> write_plots(const std::filesystem::path& artifacts_dir,
                                               const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const CsvTable schedules = read_csv(artifacts_dir / "schedules.csv");
  const CsvTable convergence = read_csv(artifacts_dir / "convergence.csv");

  std::vector<std::filesystem::path> plots;
  auto emit = [&](const std::filesystem::path& name, const std::string& svg) {
    atomic_write(out_dir / name, svg);
    plots.push_back(out_dir / name);
  };

  emit("weights.svg", schedule_svg("association weights", schedules, "w."));
  bool has_rest = false, has_gamma = false;
  for (const std::string& h : schedules.header) {
    has_rest = has_rest || h.rfind("r.", 0) == 0;
    has_gamma = has_gamma || h.rfind("gamma.", 0) == 0;
  }
  if (has_rest) emit("rest.svg", schedule_svg("rest-pose weights", schedules, "r."));
  if (has_gamma) {
    emit("orientation.svg", schedule_svg("grasp-orientation weights", schedules, "gamma."));
  }
  emit("convergence.svg", convergence_svg(convergence));
  return plots;
}

}  // namespace itamp
