#include "itamp/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace itamp {

namespace {

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> tokens;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

struct TokenReader {
  const std::vector<std::string>& tokens;
  size_t pos = 0;
  int line;
  const std::string& key;

  bool done() const { return pos >= tokens.size(); }

  std::string next(const std::string& what) {
    if (done()) throw ParseError(line, key, "expected " + what);
    return tokens[pos++];
  }

  double number(const std::string& what) {
    const std::string tok = next(what);
    try {
      size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParseError(line, key, "expected a number for " + what + ", got '" + tok + "'");
    }
  }

  int integer(const std::string& what) {
    const double v = number(what);
    if (v != std::floor(v)) throw ParseError(line, key, what + " must be an integer");
    return static_cast<int>(v);
  }

  Eigen::Vector3d vec3(const std::string& what) {
    Eigen::Vector3d v;
    for (int c = 0; c < 3; ++c) v[c] = number(what);
    return v;
  }

  Pose pose(const std::string& what) {
    Pose p;
    p.position = vec3(what + " position");
    p.euler = vec3(what + " euler angles");
    return p;
  }

  void expect(const std::string& literal) {
    const std::string tok = next("'" + literal + "'");
    if (tok != literal) {
      throw ParseError(line, key, "expected '" + literal + "', got '" + tok + "'");
    }
  }

  void finish() {
    if (!done()) throw ParseError(line, key, "unexpected trailing token '" + tokens[pos] + "'");
  }

  bool boolean(const std::string& what) {
    const std::string tok = next(what);
    if (tok == "true" || tok == "1") return true;
    if (tok == "false" || tok == "0") return false;
    throw ParseError(line, key, what + " must be true or false");
  }
};

CollisionPrimitive parse_primitive(TokenReader& r) {
  const std::string kind = r.next("primitive kind (sphere|capsule)");
  if (kind == "sphere") {
    r.expect("radius");
    const double radius = r.number("radius");
    r.expect("center");
    const Eigen::Vector3d c = r.vec3("center");
    return CollisionPrimitive::sphere(radius, c);
  }
  if (kind == "capsule") {
    r.expect("radius");
    const double radius = r.number("radius");
    r.expect("segment");
    const Eigen::Vector3d a = r.vec3("segment start");
    const Eigen::Vector3d b = r.vec3("segment end");
    return CollisionPrimitive::capsule(radius, a, b);
  }
  throw ParseError(r.line, r.key, "unknown primitive kind '" + kind + "'");
}

struct ObjectDraft {
  ObjectSpec spec;
  bool cuboid_rest = false;
  bool explicit_rest = false;
  bool has_delta_limits = false;
  bool has_collision = false;
  double support_z = 0.0;
  std::string holder_name;
  int line = 0;
};

struct ParserState {
  Scenario scenario;
  std::string section;
  std::optional<ManipulatorSpec> robot;
  std::optional<ObjectDraft> object;
  std::vector<ObjectDraft> drafts;
  bool robot_has_rest = false;
};

void finish_robot(ParserState& st, int line) {
  if (!st.robot) return;
  if (st.robot->chain.joints.empty()) {
    throw ParseError(line, "robot", "robot '" + st.robot->name + "' has no joints");
  }
  if (!st.robot_has_rest) {
    throw ParseError(line, "robot",
                     "robot '" + st.robot->name + "' is missing rest_configuration");
  }
  st.scenario.manipulators.push_back(*st.robot);
  st.robot.reset();
  st.robot_has_rest = false;
}

void finish_object(ParserState& st, int line) {
  if (!st.object) return;
  ObjectDraft& d = *st.object;
  if (d.cuboid_rest && d.explicit_rest) {
    throw ParseError(line, "rest_poses",
                     "object '" + d.spec.name + "' mixes cuboid and explicit rest poses");
  }
  if (!d.explicit_rest) {
    d.spec.rest_poses = ObjectSpec::cuboid_rest_poses(d.spec.dimensions, d.support_z);
  }
  if (!d.has_delta_limits) d.spec.default_delta_limits();
  if (!d.has_collision) d.spec.default_collision();
  d.line = line;
  st.drafts.push_back(d);
  st.object.reset();
}

void handle_key(ParserState& st, int line, const std::string& key, TokenReader& r) {
  Scenario& sc = st.scenario;
  const std::string& sec = st.section;

  if (sec == "horizon") {
    if (key == "T") {
      sc.horizon = r.number("horizon T");
    } else if (key == "segments") {
      sc.segments = r.integer("segments");
    } else {
      throw ParseError(line, key, "unknown key in [horizon]");
    }
  } else if (sec == "objective") {
    if (key == "beta1") {
      sc.objective.beta1 = r.number("beta1");
    } else if (key == "beta2") {
      sc.objective.beta2 = r.number("beta2");
    } else if (key == "beta3") {
      sc.objective.beta3 = r.number("beta3");
    } else if (key == "object_accel") {
      sc.objective.object_accel.clear();
      while (!r.done()) sc.objective.object_accel.push_back(r.number("object_accel"));
    } else {
      throw ParseError(line, key, "unknown key in [objective]");
    }
  } else if (sec == "penalties") {
    PenaltyWeights& pw = sc.penalties;
    double* slot = nullptr;
    if (key == "boundary") slot = &pw.boundary;
    else if (key == "position") slot = &pw.position;
    else if (key == "velocity") slot = &pw.velocity;
    else if (key == "rest") slot = &pw.rest;
    else if (key == "rest_partition") slot = &pw.rest_partition;
    else if (key == "capacity") slot = &pw.capacity;
    else if (key == "collision") slot = &pw.collision;
    else if (key == "bounds") slot = &pw.bounds;
    else if (key == "weight_rate") slot = &pw.weight_rate;
    else if (key == "orientation_partition") slot = &pw.orientation_partition;
    else throw ParseError(line, key, "unknown key in [penalties]");
    *slot = r.number("penalty weight");
    if (*slot < 0) throw ParseError(line, key, "penalty weight must be non-negative");
  } else if (sec == "extensions") {
    if (key == "orientation_weights") {
      sc.extensions.orientation_weights = r.boolean("orientation_weights");
    } else if (key == "weight_rate_limits") {
      sc.extensions.weight_rate_limits = r.boolean("weight_rate_limits");
    } else if (key == "rate_upper") {
      sc.extensions.rate_upper = r.number("rate_upper");
    } else if (key == "rate_lower") {
      sc.extensions.rate_lower = r.number("rate_lower");
    } else {
      throw ParseError(line, key, "unknown key in [extensions]");
    }
  } else if (sec == "solver") {
    SolverSettings& s = sc.solver;
    if (key == "max_iterations") s.max_iterations = r.integer("max_iterations");
    else if (key == "gradient_tolerance") s.gradient_tolerance = r.number("gradient_tolerance");
    else if (key == "step_tolerance") s.step_tolerance = r.number("step_tolerance");
    else if (key == "initial_damping") s.initial_damping = r.number("initial_damping");
    else if (key == "outer_rounds") s.outer_rounds = r.integer("outer_rounds");
    else if (key == "penalty_ramp") s.penalty_ramp = r.number("penalty_ramp");
    else if (key == "presolve_iterations") s.presolve_iterations = r.integer("presolve_iterations");
    else if (key == "multi_object_init") s.multi_object_init = r.boolean("multi_object_init");
    else throw ParseError(line, key, "unknown key in [solver]");
  } else if (sec == "robots") {
    if (key == "robot") {
      finish_robot(st, line);
      st.robot = ManipulatorSpec{};
      st.robot->name = r.next("robot name");
    } else if (!st.robot) {
      throw ParseError(line, key, "no robot declared yet in [robots]");
    } else if (key == "joint") {
      Joint j;
      const std::string kind = r.next("joint kind (revolute|prismatic)");
      if (kind == "revolute") j.kind = JointKind::revolute;
      else if (kind == "prismatic") j.kind = JointKind::prismatic;
      else throw ParseError(line, key, "unknown joint kind '" + kind + "'");
      r.expect("axis");
      j.axis = r.vec3("axis");
      if (j.axis.norm() < 1e-12) throw ParseError(line, key, "axis must be nonzero");
      j.axis.normalize();
      r.expect("origin");
      j.origin = r.pose("origin");
      if (!r.done()) {
        r.expect("limits");
        j.lower = r.number("lower limit");
        j.upper = r.number("upper limit");
        if (j.lower > j.upper) throw ParseError(line, key, "limits.min > limits.max");
      }
      st.robot->chain.joints.push_back(j);
    } else if (key == "tool") {
      st.robot->chain.tool = r.pose("tool");
    } else if (key == "rest_configuration") {
      std::vector<double> vals;
      while (!r.done()) vals.push_back(r.number("rest configuration entry"));
      st.robot->rest_configuration =
          Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<long>(vals.size()));
      st.robot_has_rest = true;
    } else if (key == "collision") {
      r.expect("link");
      const int link = r.integer("link index");
      CollisionPrimitive prim = parse_primitive(r);
      st.robot->chain.collision_bodies.emplace_back(link, prim);
    } else if (key == "interactive") {
      st.robot->is_interactive_object = r.boolean("interactive");
    } else if (key == "handle") {
      st.robot->handle = r.pose("handle");
    } else {
      throw ParseError(line, key, "unknown key in [robots]");
    }
  } else if (sec == "objects") {
    if (key == "object") {
      finish_object(st, line);
      ObjectDraft d;
      d.spec.name = r.next("object name");
      st.object = d;
    } else if (!st.object) {
      throw ParseError(line, key, "no object declared yet in [objects]");
    } else if (key == "dimensions") {
      st.object->spec.dimensions = r.vec3("dimensions");
    } else if (key == "start_pose") {
      st.object->spec.start_pose = r.pose("start_pose");
    } else if (key == "goal_pose") {
      st.object->spec.goal_pose = r.pose("goal_pose");
    } else if (key == "rest_poses") {
      r.expect("cuboid");
      st.object->cuboid_rest = true;
    } else if (key == "rest_pose") {
      r.expect("axis");
      RestPose rp;
      rp.axis = r.vec3("axis");
      if (std::abs(rp.axis.norm() - 1.0) > 1e-6) {
        throw ParseError(line, key, "rest axis must be unit length");
      }
      r.expect("elevation");
      rp.elevation = r.number("elevation");
      st.object->spec.rest_poses.push_back(rp);
      st.object->explicit_rest = true;
    } else if (key == "support_z") {
      st.object->support_z = r.number("support_z");
    } else if (key == "collision") {
      st.object->spec.collision.push_back(parse_primitive(r));
      st.object->has_collision = true;
    } else if (key == "grasp_tool") {
      st.object->spec.grasp_tool = r.pose("grasp_tool");
    } else if (key == "delta_limits") {
      st.object->spec.delta_min = r.number("delta min");
      st.object->spec.delta_max = r.number("delta max");
      st.object->has_delta_limits = true;
    } else if (key == "initial_holder") {
      st.object->holder_name = r.next("robot name");
    } else {
      throw ParseError(line, key, "unknown key in [objects]");
    }
  } else if (sec == "obstacles") {
    if (key == "obstacle") {
      sc.obstacles.push_back(parse_primitive(r));
    } else if (key == "pairs") {
      const std::string mode = r.next("pairs mode (default|none)");
      if (mode == "default") sc.collision_pairs = CollisionPairPolicy::all;
      else if (mode == "none") sc.collision_pairs = CollisionPairPolicy::none;
      else throw ParseError(line, key, "unknown pairs mode '" + mode + "'");
    } else {
      throw ParseError(line, key, "unknown key in [obstacles]");
    }
  } else {
    throw ParseError(line, key, "key outside of any section");
  }
  r.finish();
}

}  // namespace

Scenario parse_scenario_string(const std::string& text) {
  ParserState st;
  std::istringstream in(text);
  std::string raw_line;
  int line = 0;

  static const std::vector<std::string> kSections = {
      "horizon", "objective", "penalties", "extensions",
      "solver",  "robots",    "objects",   "obstacles"};

  while (std::getline(in, raw_line)) {
    ++line;
    const size_t hash = raw_line.find('#');
    if (hash != std::string::npos) raw_line = raw_line.substr(0, hash);
    const std::string text_line = trim(raw_line);
    if (text_line.empty()) continue;

    if (text_line.front() == '[') {
      if (text_line.back() != ']') {
        throw ParseError(line, text_line, "malformed section header");
      }
      const std::string name = text_line.substr(1, text_line.size() - 2);
      bool known = false;
      for (const std::string& s : kSections) known = known || s == name;
      if (!known) throw ParseError(line, name, "unknown section");
      // leaving [robots]/[objects] finalizes the open entity
      finish_robot(st, line);
      finish_object(st, line);
      st.section = name;
      continue;
    }

    const size_t eq = text_line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(line, text_line, "expected 'key = value'");
    }
    const std::string key = trim(text_line.substr(0, eq));
    const std::vector<std::string> tokens = tokenize(text_line.substr(eq + 1));
    TokenReader reader{tokens, 0, line, key};
    handle_key(st, line, key, reader);
  }
  finish_robot(st, line);
  finish_object(st, line);

  // Resolve initial holders by name.
  for (ObjectDraft& d : st.drafts) {
    if (!d.holder_name.empty() && d.holder_name != "none") {
      int found = -1;
      for (int i = 0; i < static_cast<int>(st.scenario.manipulators.size()); ++i) {
        if (st.scenario.manipulators[i].name == d.holder_name) found = i;
      }
      if (found < 0) {
        throw ParseError(d.line, "initial_holder",
                         "unknown robot '" + d.holder_name + "'");
      }
      d.spec.initial_holder = found;
    }
    st.scenario.objects.push_back(d.spec);
  }

  try {
    st.scenario.validate();
  } catch (const std::invalid_argument& err) {
    throw ParseError(line, "scenario", err.what());
  }
  return st.scenario;
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, path, "cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_string(buf.str());
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt3(const Eigen::Vector3d& v) {
  return fmt(v[0]) + " " + fmt(v[1]) + " " + fmt(v[2]);
}

std::string fmt_pose(const Pose& p) { return fmt3(p.position) + " " + fmt3(p.euler); }

void write_primitive(std::ostringstream& out, const CollisionPrimitive& p) {
  if (p.kind == CollisionPrimitive::Kind::sphere) {
    out << "sphere radius " << fmt(p.radius) << " center " << fmt3(p.a);
  } else {
    out << "capsule radius " << fmt(p.radius) << " segment " << fmt3(p.a) << " "
        << fmt3(p.b);
  }
}

}  // namespace

std::string write_scenario(const Scenario& sc) {
  std::ostringstream out;
  out << "[horizon]\n";
  out << "T = " << fmt(sc.horizon) << "\n";
  out << "segments = " << sc.segments << "\n\n";

  out << "[objective]\n";
  out << "beta1 = " << fmt(sc.objective.beta1) << "\n";
  out << "beta2 = " << fmt(sc.objective.beta2) << "\n";
  out << "beta3 = " << fmt(sc.objective.beta3) << "\n";
  if (!sc.objective.object_accel.empty()) {
    out << "object_accel =";
    for (double w : sc.objective.object_accel) out << " " << fmt(w);
    out << "\n";
  }
  out << "\n[penalties]\n";
  const PenaltyWeights& pw = sc.penalties;
  out << "boundary = " << fmt(pw.boundary) << "\n";
  out << "position = " << fmt(pw.position) << "\n";
  out << "velocity = " << fmt(pw.velocity) << "\n";
  out << "rest = " << fmt(pw.rest) << "\n";
  out << "rest_partition = " << fmt(pw.rest_partition) << "\n";
  out << "capacity = " << fmt(pw.capacity) << "\n";
  out << "collision = " << fmt(pw.collision) << "\n";
  out << "bounds = " << fmt(pw.bounds) << "\n";
  out << "weight_rate = " << fmt(pw.weight_rate) << "\n";
  out << "orientation_partition = " << fmt(pw.orientation_partition) << "\n";

  out << "\n[extensions]\n";
  out << "orientation_weights = " << (sc.extensions.orientation_weights ? "true" : "false")
      << "\n";
  out << "weight_rate_limits = " << (sc.extensions.weight_rate_limits ? "true" : "false")
      << "\n";
  out << "rate_upper = " << fmt(sc.extensions.rate_upper) << "\n";
  out << "rate_lower = " << fmt(sc.extensions.rate_lower) << "\n";

  out << "\n[solver]\n";
  const SolverSettings& s = sc.solver;
  out << "max_iterations = " << s.max_iterations << "\n";
  out << "gradient_tolerance = " << fmt(s.gradient_tolerance) << "\n";
  out << "step_tolerance = " << fmt(s.step_tolerance) << "\n";
  out << "initial_damping = " << fmt(s.initial_damping) << "\n";
  out << "outer_rounds = " << s.outer_rounds << "\n";
  out << "penalty_ramp = " << fmt(s.penalty_ramp) << "\n";
  out << "presolve_iterations = " << s.presolve_iterations << "\n";
  out << "multi_object_init = " << (s.multi_object_init ? "true" : "false") << "\n";

  out << "\n[robots]\n";
  for (const ManipulatorSpec& m : sc.manipulators) {
    out << "robot = " << m.name << "\n";
    for (const Joint& j : m.chain.joints) {
      out << "joint = " << (j.kind == JointKind::revolute ? "revolute" : "prismatic")
          << " axis " << fmt3(j.axis) << " origin " << fmt_pose(j.origin) << " limits "
          << fmt(j.lower) << " " << fmt(j.upper) << "\n";
    }
    out << "tool = " << fmt_pose(m.chain.tool) << "\n";
    out << "rest_configuration =";
    for (int k = 0; k < m.rest_configuration.size(); ++k) {
      out << " " << fmt(m.rest_configuration[k]);
    }
    out << "\n";
    for (const auto& [link, prim] : m.chain.collision_bodies) {
      out << "collision = link " << link << " ";
      write_primitive(out, prim);
      out << "\n";
    }
    if (m.is_interactive_object) {
      out << "interactive = true\n";
      out << "handle = " << fmt_pose(m.handle) << "\n";
    }
  }

  out << "\n[objects]\n";
  for (const ObjectSpec& o : sc.objects) {
    out << "object = " << o.name << "\n";
    out << "dimensions = " << fmt3(o.dimensions) << "\n";
    out << "start_pose = " << fmt_pose(o.start_pose) << "\n";
    out << "goal_pose = " << fmt_pose(o.goal_pose) << "\n";
    for (const RestPose& rp : o.rest_poses) {
      out << "rest_pose = axis " << fmt3(rp.axis) << " elevation " << fmt(rp.elevation)
          << "\n";
    }
    for (const CollisionPrimitive& p : o.collision) {
      out << "collision = ";
      write_primitive(out, p);
      out << "\n";
    }
    out << "grasp_tool = " << fmt_pose(o.grasp_tool) << "\n";
    out << "delta_limits = " << fmt(o.delta_min) << " " << fmt(o.delta_max) << "\n";
    if (o.initial_holder >= 0) {
      out << "initial_holder = " << sc.manipulators[o.initial_holder].name << "\n";
    }
  }

  out << "\n[obstacles]\n";
  for (const CollisionPrimitive& p : sc.obstacles) {
    out << "obstacle = ";
    write_primitive(out, p);
    out << "\n";
  }
  if (sc.collision_pairs == CollisionPairPolicy::none) out << "pairs = none\n";
  return out.str();
}

}  // namespace itamp
