#include "cocarry/scenario_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace cocarry {

CouplingModel coupling_preset(const std::string& name) {
  CouplingModel m;
  m.rest_vector = Vec3(1.0, 0.0, 0.0);
  m.grasp_compliance = 2e-3;
  if (name == "experiment_object") {
    // Stiff in tension along the major axis, moderately stiff when pushed
    // (partial buckling), compliant sideways and very compliant vertically.
    m.kind = CouplingKind::anisotropic;
    m.stiffness_tension = 3000.0;
    m.stiffness_compression = 500.0;
    m.stiffness_lateral = Eigen::Vector2d(100.0, 10.0);
    m.damping = Vec3(70.0, 5.0, 1.0);
  } else if (name == "rope") {
    // Slack at engagement: the natural length exceeds the grasp distance.
    m.kind = CouplingKind::rope;
    m.rest_length = 1.15;
    m.stiffness_tension = 500.0;
    m.stiffness_compression = 0.0;
    m.stiffness_lateral = Eigen::Vector2d::Zero();
    m.damping = Vec3(5.0, 0.0, 0.0);
  } else if (name == "aluminum_profile") {
    m.kind = CouplingKind::rigid_rod;
    m.stiffness_tension = 5000.0;
    m.stiffness_compression = 5000.0;
    m.stiffness_lateral = Eigen::Vector2d(5000.0, 5000.0);
    m.damping = Vec3(100.0, 100.0, 100.0);
  } else {
    throw ConfigError("unknown coupling preset: " + name);
  }
  return m;
}

ScenarioConfig preset_scenario(const std::string& coupling_name) {
  ScenarioConfig config;
  config.coupling = coupling_preset(coupling_name);
  config.path = build_experiment_path(1.0, 0.3, 3.0, 1.0);
  return config;
}

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

[[noreturn]] void fail(const std::string& file, int line, const std::string& msg) {
  throw ConfigError(file + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_numbers(const Entry& e, const std::string& file) {
  std::vector<double> values;
  std::istringstream in(e.value);
  std::string token;
  while (in >> token) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(token, &used));
      if (used != token.size()) {
        throw std::invalid_argument(token);
      }
    } catch (const std::exception&) {
      fail(file, e.line, "key '" + e.key + "': not a number: '" + token + "'");
    }
  }
  if (values.empty()) {
    fail(file, e.line, "key '" + e.key + "': empty value");
  }
  return values;
}

double parse_scalar(const Entry& e, const std::string& file) {
  const auto values = parse_numbers(e, file);
  if (values.size() != 1) {
    fail(file, e.line, "key '" + e.key + "': expected one number");
  }
  return values[0];
}

VecX parse_vector(const Entry& e, const std::string& file, int size, bool allow_splat) {
  const auto values = parse_numbers(e, file);
  VecX out(size);
  if (values.size() == 1 && allow_splat) {
    out.setConstant(values[0]);
    return out;
  }
  if (static_cast<int>(values.size()) != size) {
    fail(file, e.line,
         "key '" + e.key + "': expected " + std::to_string(size) + " numbers, got " +
             std::to_string(values.size()));
  }
  for (int i = 0; i < size; ++i) {
    out[i] = values[i];
  }
  return out;
}

Vec3 parse_vec3(const Entry& e, const std::string& file, bool allow_splat = true) {
  return parse_vector(e, file, 3, allow_splat);
}

}  // namespace

ScenarioConfig parse_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw ConfigError("cannot open scenario file: " + file.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), file.string());
}

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& name) {
  std::vector<Entry> entries;
  {
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto comment = raw.find('#');
      if (comment != std::string::npos) {
        raw.erase(comment);
      }
      const std::string stripped = trim(raw);
      if (stripped.empty()) {
        continue;
      }
      if (stripped.front() == '[') {
        if (stripped.back() != ']') {
          fail(name, line, "malformed section header");
        }
        section = trim(stripped.substr(1, stripped.size() - 2));
        continue;
      }
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) {
        fail(name, line, "expected 'key = value'");
      }
      Entry e;
      e.section = section;
      e.key = trim(stripped.substr(0, eq));
      e.value = trim(stripped.substr(eq + 1));
      e.line = line;
      if (e.section.empty()) {
        fail(name, line, "key outside of any [section]");
      }
      if (e.key.empty() || e.value.empty()) {
        fail(name, line, "empty key or value");
      }
      entries.push_back(std::move(e));
    }
  }

  ScenarioConfig config;
  config.path.segments.clear();

  // Presets are applied before their sections' overrides.
  bool coupling_defined = false;
  bool path_preset = false;
  for (const Entry& e : entries) {
    if (e.section == "coupling" && e.key == "preset") {
      config.coupling = coupling_preset(e.value);
      coupling_defined = true;
    } else if (e.section == "path" && e.key == "preset") {
      if (e.value != "experiment") {
        fail(name, e.line, "unknown path preset: " + e.value);
      }
      path_preset = true;
    }
  }

  double square_side = 1.0;
  double vertical_drop = 0.3;
  double segment_time = 3.0;
  double dwell = 1.0;
  bool have_path_dims = false;
  std::vector<PathSegment> custom_segments;
  std::vector<DhLink> arm_links;
  std::vector<Entry> seen;

  for (const Entry& e : entries) {
    for (const Entry& other : seen) {
      if (other.section == e.section && other.key == e.key && e.key != "segment" &&
          e.key != "arm_link") {
        fail(name, e.line, "duplicate key '" + e.key + "' (first at line " +
                               std::to_string(other.line) + ")");
      }
    }
    seen.push_back(e);

    if (e.section == "sim") {
      if (e.key == "controller") {
        if (e.value == "aci") {
          config.controller = ControllerMode::aci;
        } else if (e.value == "admittance_only" || e.value == "admittance") {
          config.controller = ControllerMode::admittance_only;
        } else {
          fail(name, e.line, "controller must be 'aci' or 'admittance_only'");
        }
      } else if (e.key == "dt") {
        config.dt = parse_scalar(e, name);
      } else if (e.key == "max_duration") {
        config.max_duration = parse_scalar(e, name);
      } else if (e.key == "settle_time") {
        config.settle_time = parse_scalar(e, name);
      } else if (e.key == "seed") {
        try {
          config.seed = std::stoull(e.value);
        } catch (const std::exception&) {
          fail(name, e.line, "seed must be an unsigned integer");
        }
      } else {
        fail(name, e.line, "unknown key in [sim]: " + e.key);
      }
    } else if (e.section == "robot") {
      if (e.key == "base_mount_xyz") {
        const Vec3 t = parse_vec3(e, name, false);
        Eigen::Isometry3d mount = config.robot.base_mount;
        mount.translation() = t;
        config.robot.base_mount = mount;
      } else if (e.key == "tool_offset") {
        Eigen::Isometry3d tool = Eigen::Isometry3d::Identity();
        tool.translate(Vec3(parse_vec3(e, name, false)));
        config.robot.tool_transform = tool;
      } else if (e.key == "arm_link") {
        const auto v = parse_numbers(e, name);
        if (v.size() != 3) {
          fail(name, e.line, "arm_link expects 'a d alpha'");
        }
        arm_links.push_back({v[0], v[1], v[2]});
      } else if (e.key == "q_start") {
        config.q_start = parse_vector(e, name, config.robot.dof(), false);
      } else {
        fail(name, e.line, "unknown key in [robot]: " + e.key);
      }
    } else if (e.section == "gains") {
      if (e.key == "K") {
        config.weights.task_gain = parse_vector(e, name, 6, true);
      } else if (e.key == "W1") {
        config.weights.task_weight = parse_vector(e, name, 6, true);
      } else if (e.key == "W2") {
        config.weights.damping_weight = parse_vector(e, name, config.robot.dof(), true);
      } else if (e.key == "W3") {
        config.weights.posture_weight = parse_vector(e, name, config.robot.dof(), true);
      } else if (e.key == "q_def") {
        config.weights.default_posture = parse_vector(e, name, config.robot.dof(), false);
      } else if (e.key == "posture_gain") {
        config.weights.posture_gain = parse_scalar(e, name);
      } else if (e.key == "k_min") {
        config.damping_schedule.k_min = parse_scalar(e, name);
      } else if (e.key == "k_max") {
        config.damping_schedule.k_max = parse_scalar(e, name);
      } else if (e.key == "w0") {
        config.damping_schedule.w0 = parse_scalar(e, name);
      } else if (e.key == "base_velocity_limit") {
        config.limits.base = parse_scalar(e, name);
      } else if (e.key == "arm_velocity_limit") {
        config.limits.arm = parse_scalar(e, name);
      } else if (e.key == "exec_tau") {
        config.exec_tau = parse_scalar(e, name);
      } else {
        fail(name, e.line, "unknown key in [gains]: " + e.key);
      }
    } else if (e.section == "admittance") {
      if (e.key == "mass") {
        config.adm_mass = parse_vec3(e, name);
      } else if (e.key == "damping") {
        config.adm_damping = parse_vec3(e, name);
      } else {
        fail(name, e.line, "unknown key in [admittance]: " + e.key);
      }
    } else if (e.section == "adaptive") {
      if (e.key == "window_length") {
        config.window_length = parse_scalar(e, name);
      } else if (e.key == "epsilon") {
        config.epsilon = parse_scalar(e, name);
      } else if (e.key == "motion_floor") {
        config.motion_floor = parse_scalar(e, name);
      } else if (e.key == "initial_alpha") {
        config.initial_alpha = parse_scalar(e, name);
      } else {
        fail(name, e.line, "unknown key in [adaptive]: " + e.key);
      }
    } else if (e.section == "coupling") {
      if (e.key == "preset") {
        // applied in the pre-pass
      } else if (e.key == "kind") {
        if (e.value == "rigid_rod") {
          config.coupling.kind = CouplingKind::rigid_rod;
        } else if (e.value == "rope") {
          config.coupling.kind = CouplingKind::rope;
        } else if (e.value == "anisotropic") {
          config.coupling.kind = CouplingKind::anisotropic;
        } else {
          fail(name, e.line, "coupling kind must be rigid_rod, rope or anisotropic");
        }
        coupling_defined = true;
      } else if (e.key == "rest_vector") {
        config.coupling.rest_vector = parse_vec3(e, name, false);
      } else if (e.key == "rest_length") {
        config.coupling.rest_length = parse_scalar(e, name);
      } else if (e.key == "stiffness_tension") {
        config.coupling.stiffness_tension = parse_scalar(e, name);
      } else if (e.key == "stiffness_compression") {
        config.coupling.stiffness_compression = parse_scalar(e, name);
      } else if (e.key == "stiffness_lateral") {
        const auto v = parse_numbers(e, name);
        if (v.size() == 1) {
          config.coupling.stiffness_lateral.setConstant(v[0]);
        } else if (v.size() == 2) {
          config.coupling.stiffness_lateral = Eigen::Vector2d(v[0], v[1]);
        } else {
          fail(name, e.line, "stiffness_lateral expects 1 or 2 numbers");
        }
      } else if (e.key == "damping") {
        config.coupling.damping = parse_vec3(e, name);
      } else if (e.key == "grasp_compliance") {
        config.coupling.grasp_compliance = parse_scalar(e, name);
      } else {
        fail(name, e.line, "unknown key in [coupling]: " + e.key);
      }
    } else if (e.section == "ft_noise") {
      if (e.key == "sigma") {
        config.ft_noise.sigma = parse_vec3(e, name);
      } else if (e.key == "bias") {
        config.ft_noise.bias = parse_vec3(e, name);
      } else {
        fail(name, e.line, "unknown key in [ft_noise]: " + e.key);
      }
    } else if (e.section == "mocap") {
      if (e.key == "sigma") {
        config.mocap.sigma = parse_scalar(e, name);
      } else if (e.key == "latency_steps") {
        config.mocap.latency_steps = static_cast<int>(parse_scalar(e, name));
      } else {
        fail(name, e.line, "unknown key in [mocap]: " + e.key);
      }
    } else if (e.section == "human") {
      if (e.key == "bandwidth") {
        config.human.bandwidth = parse_scalar(e, name);
      } else if (e.key == "force_cap") {
        config.human.force_cap = parse_scalar(e, name);
      } else if (e.key == "max_speed") {
        config.human.max_speed = parse_scalar(e, name);
      } else if (e.key == "align_tol") {
        config.human.align_tol = parse_scalar(e, name);
      } else {
        fail(name, e.line, "unknown key in [human]: " + e.key);
      }
    } else if (e.section == "path") {
      if (e.key == "preset") {
        // applied in the pre-pass
      } else if (e.key == "square_side") {
        square_side = parse_scalar(e, name);
        have_path_dims = true;
      } else if (e.key == "vertical_drop") {
        vertical_drop = parse_scalar(e, name);
        have_path_dims = true;
      } else if (e.key == "segment_time") {
        segment_time = parse_scalar(e, name);
        have_path_dims = true;
      } else if (e.key == "dwell") {
        dwell = parse_scalar(e, name);
      } else if (e.key == "segment") {
        std::istringstream row(e.value);
        PathSegment seg;
        std::string label;
        if (!(row >> seg.displacement.x() >> seg.displacement.y() >> seg.displacement.z() >>
              seg.duration >> label)) {
          fail(name, e.line, "segment expects 'dx dy dz duration label'");
        }
        try {
          seg.label = interval_label_from_string(label);
        } catch (const ConfigError& err) {
          fail(name, e.line, err.what());
        }
        custom_segments.push_back(seg);
      } else {
        fail(name, e.line, "unknown key in [path]: " + e.key);
      }
    } else {
      fail(name, e.line, "unknown section [" + e.section + "]");
    }
  }

  if (!arm_links.empty()) {
    config.robot.arm = arm_links;
  }
  if (!coupling_defined) {
    throw ConfigError(name + ": missing coupling definition ([coupling] kind or preset)");
  }
  if (!custom_segments.empty()) {
    if (path_preset || have_path_dims) {
      throw ConfigError(name + ": give either [path] segment rows or a preset, not both");
    }
    config.path.segments = custom_segments;
    config.path.dwell = dwell;
  } else {
    config.path = build_experiment_path(square_side, vertical_drop, segment_time, dwell);
  }

  try {
    config.validate();
  } catch (const ConfigError& err) {
    throw ConfigError(name + ": " + err.what());
  }
  return config;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string fmt_vec(const VecX& v) {
  std::string out;
  for (int i = 0; i < v.size(); ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += fmt(v[i]);
  }
  return out;
}

std::string fmt_vec3(const Vec3& v) { return fmt_vec(VecX(v)); }

const char* kind_name(CouplingKind kind) {
  switch (kind) {
    case CouplingKind::rigid_rod: return "rigid_rod";
    case CouplingKind::rope: return "rope";
    case CouplingKind::anisotropic: return "anisotropic";
  }
  return "anisotropic";
}

}  // namespace

std::string serialize_scenario(const ScenarioConfig& config) {
  std::ostringstream out;
  out << "[sim]\n";
  out << "controller = " << to_string(config.controller) << "\n";
  out << "dt = " << fmt(config.dt) << "\n";
  out << "max_duration = " << fmt(config.max_duration) << "\n";
  out << "settle_time = " << fmt(config.settle_time) << "\n";
  out << "seed = " << config.seed << "\n";

  out << "\n[robot]\n";
  out << "base_mount_xyz = " << fmt_vec3(config.robot.base_mount.translation()) << "\n";
  out << "tool_offset = " << fmt_vec3(config.robot.tool_transform.translation()) << "\n";
  for (const DhLink& link : config.robot.arm) {
    out << "arm_link = " << fmt(link.a) << ' ' << fmt(link.d) << ' ' << fmt(link.alpha) << "\n";
  }
  if (config.q_start.size() > 0) {
    out << "q_start = " << fmt_vec(config.q_start) << "\n";
  }

  out << "\n[gains]\n";
  out << "K = " << fmt_vec(config.weights.task_gain) << "\n";
  out << "W1 = " << fmt_vec(config.weights.task_weight) << "\n";
  out << "W2 = " << fmt_vec(config.weights.damping_weight) << "\n";
  out << "W3 = " << fmt_vec(config.weights.posture_weight) << "\n";
  out << "q_def = " << fmt_vec(config.weights.default_posture) << "\n";
  out << "posture_gain = " << fmt(config.weights.posture_gain) << "\n";
  out << "k_min = " << fmt(config.damping_schedule.k_min) << "\n";
  out << "k_max = " << fmt(config.damping_schedule.k_max) << "\n";
  out << "w0 = " << fmt(config.damping_schedule.w0) << "\n";
  out << "base_velocity_limit = " << fmt(config.limits.base) << "\n";
  out << "arm_velocity_limit = " << fmt(config.limits.arm) << "\n";
  out << "exec_tau = " << fmt(config.exec_tau) << "\n";

  out << "\n[admittance]\n";
  out << "mass = " << fmt_vec3(config.adm_mass) << "\n";
  out << "damping = " << fmt_vec3(config.adm_damping) << "\n";

  out << "\n[adaptive]\n";
  out << "window_length = " << fmt(config.window_length) << "\n";
  out << "epsilon = " << fmt(config.epsilon) << "\n";
  out << "motion_floor = " << fmt(config.motion_floor) << "\n";
  out << "initial_alpha = " << fmt(config.initial_alpha) << "\n";

  out << "\n[coupling]\n";
  out << "kind = " << kind_name(config.coupling.kind) << "\n";
  out << "rest_vector = " << fmt_vec3(config.coupling.rest_vector) << "\n";
  out << "rest_length = " << fmt(config.coupling.rest_length) << "\n";
  out << "stiffness_tension = " << fmt(config.coupling.stiffness_tension) << "\n";
  out << "stiffness_compression = " << fmt(config.coupling.stiffness_compression) << "\n";
  out << "stiffness_lateral = " << fmt(config.coupling.stiffness_lateral[0]) << ' '
      << fmt(config.coupling.stiffness_lateral[1]) << "\n";
  out << "damping = " << fmt_vec3(config.coupling.damping) << "\n";
  out << "grasp_compliance = " << fmt(config.coupling.grasp_compliance) << "\n";

  out << "\n[ft_noise]\n";
  out << "sigma = " << fmt_vec3(config.ft_noise.sigma) << "\n";
  out << "bias = " << fmt_vec3(config.ft_noise.bias) << "\n";

  out << "\n[mocap]\n";
  out << "sigma = " << fmt(config.mocap.sigma) << "\n";
  out << "latency_steps = " << config.mocap.latency_steps << "\n";

  out << "\n[human]\n";
  out << "bandwidth = " << fmt(config.human.bandwidth) << "\n";
  out << "force_cap = " << fmt(config.human.force_cap) << "\n";
  out << "max_speed = " << fmt(config.human.max_speed) << "\n";
  out << "align_tol = " << fmt(config.human.align_tol) << "\n";

  out << "\n[path]\n";
  out << "dwell = " << fmt(config.path.dwell) << "\n";
  for (const PathSegment& seg : config.path.segments) {
    out << "segment = " << fmt_vec3(seg.displacement) << ' ' << fmt(seg.duration) << ' '
        << to_string(seg.label) << "\n";
  }
  return out.str();
}

void atomic_write_file(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ConfigError("cannot write file: " + tmp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      throw ConfigError("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace cocarry
