#include "cocarry/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace cocarry {

const char* to_string(ControllerMode mode) {
  return mode == ControllerMode::aci ? "aci" : "admittance_only";
}

void ScenarioConfig::validate() const {
  robot.validate();
  weights.validate(robot.dof());
  coupling.validate();
  path.validate();
  if (dt <= 0.0) {
    throw ConfigError("dt must be positive");
  }
  if (max_duration <= 0.0) {
    throw ConfigError("max duration must be positive");
  }
  if (settle_time < 0.0) {
    throw ConfigError("settle time must be non-negative");
  }
  if (window_length <= 0.0 || epsilon <= 0.0 || motion_floor < 0.0) {
    throw ConfigError("adaptive window parameters out of range");
  }
  if ((adm_mass.array() <= 0.0).any() || (adm_damping.array() <= 0.0).any()) {
    throw ConfigError("admittance mass and damping must be positive");
  }
  if (exec_tau < 0.0) {
    throw ConfigError("execution time constant must be non-negative");
  }
  if (limits.base <= 0.0 || limits.arm <= 0.0) {
    throw ConfigError("velocity limits must be positive");
  }
  if (damping_schedule.k_min <= 0.0 || damping_schedule.k_max < damping_schedule.k_min) {
    throw ConfigError("damping schedule requires 0 < k_min <= k_max");
  }
  if (q_start.size() != 0 && q_start.size() != robot.dof()) {
    throw ConfigError("q_start dimension does not match the robot");
  }
}

DampingSchedule ScenarioConfig::resolved_schedule() const {
  DampingSchedule sched = damping_schedule;
  if (sched.w0 <= 0.0) {
    JointState posture{weights.default_posture, VecX()};
    sched.w0 = 0.1 * arm_manipulability(robot, posture);
  }
  return sched;
}

VecX ScenarioConfig::start_configuration() const {
  return q_start.size() == robot.dof() ? q_start : weights.default_posture;
}

namespace {

Vec3 axis_angle_of(const Eigen::Quaterniond& q) {
  Eigen::Quaterniond r = q;
  if (r.w() < 0.0) {
    r.coeffs() *= -1.0;
  }
  const Eigen::AngleAxisd aa(r);
  return aa.angle() * aa.axis();
}

}  // namespace

namespace {

ScenarioConfig validated(ScenarioConfig config) {
  config.validate();
  return config;
}

}  // namespace

Simulation::Simulation(ScenarioConfig config)
    : config_(validated(std::move(config))),
      schedule_(config_.resolved_schedule()),
      state_{config_.start_configuration(), VecX::Zero(config_.robot.dof())},
      qdot_exec_(VecX::Zero(config_.robot.dof())),
      human_(config_.path, config_.human,
             forward_kinematics(config_.robot, {config_.start_configuration(), VecX()})
                     .position +
                 config_.coupling.rest_vector),
      admittance_(config_.adm_mass, config_.adm_damping),
      window_(config_.window_length, config_.epsilon, config_.motion_floor,
              config_.initial_alpha),
      ft_sensor_(config_.ft_noise, config_.seed),
      mocap_(config_.mocap.sigma, config_.mocap.latency_steps, config_.seed + 0x9e3779b9ull),
      settle_left_(config_.settle_time) {
  const Pose grasp = forward_kinematics(config_.robot, state_);
  grasp_prev_ = grasp.position;
  engagement_offset_ = human_.position() - grasp.position;
  reference_.pose = grasp;
  log_.dt = config_.dt;
  log_.controller = to_string(config_.controller);
  log_.completion_time = config_.max_duration;
}

bool Simulation::step() {
  if (done_) {
    return false;
  }
  const double dt = config_.dt;
  const int dof = config_.robot.dof();

  // Current grasp kinematics; robot Cartesian velocity by finite difference.
  const Pose grasp = forward_kinematics(config_.robot, state_);
  const Vec3 v_robot = (grasp.position - grasp_prev_) / dt;

  // Human reacts to the previous object reaction and to misalignment.
  const Vec3 misalignment =
      (human_.position() - grasp.position) - engagement_offset_;
  human_.step(-force_on_robot_prev_, misalignment, dt);

  // Object coupling and sensing.
  const Vec3 force =
      object_force(config_.coupling, human_.position(), grasp.position,
                   human_.velocity(), v_robot);
  const Vec3 f_measured = ft_sensor_.measure(force);
  const Vec3 v_h_measured = mocap_.measure(human_.velocity());

  // Adaptive collaborative interface.
  const Vec3 v_adm = admittance_.step(f_measured, dt);
  double alpha = 0.0;
  if (config_.controller == ControllerMode::aci) {
    alpha = window_.update(v_adm, v_h_measured, dt);
  }
  const Vec3 v_d = reference_velocity(v_adm, alpha, v_h_measured);
  integrate_reference(reference_, v_d, dt);

  // Whole-body resolution and joint-space execution.
  VecX qdot_cmd = wholebody_step(config_.robot, state_, reference_.pose,
                                 reference_.twist, config_.weights, schedule_);
  std::uint16_t saturation = 0;
  for (int i = 0; i < dof; ++i) {
    const double limit = i < RobotModel::kBaseDof ? config_.limits.base : config_.limits.arm;
    if (std::abs(qdot_cmd[i]) > limit) {
      qdot_cmd[i] = std::copysign(limit, qdot_cmd[i]);
      saturation |= static_cast<std::uint16_t>(1u << i);
    }
  }
  if (saturation != 0) {
    ++log_.saturation_events;
  }
  if (config_.exec_tau > 0.0) {
    qdot_exec_ += (dt / config_.exec_tau) * (qdot_cmd - qdot_exec_);
  } else {
    qdot_exec_ = qdot_cmd;
  }
  state_.q += qdot_exec_ * dt;
  state_.qdot = qdot_exec_;

  if (!state_.q.allFinite()) {
    throw NumericError("simulation state became non-finite at t=" + std::to_string(t_));
  }

  force_on_robot_prev_ = force;
  grasp_prev_ = grasp.position;

  SimRecord rec;
  rec.t = t_;
  rec.q = state_.q;
  rec.grasp_pos = grasp.position;
  rec.grasp_axis_angle = axis_angle_of(grasp.orientation);
  rec.v_adm = v_adm;
  rec.v_h_meas = v_h_measured;
  rec.alpha = alpha;
  rec.v_d = v_d;
  rec.f_h = f_measured;
  rec.human_pos = human_.position();
  rec.robot_pos = grasp.position;
  rec.label = human_.script_complete() ? IntervalLabel::none : human_.current_label();
  rec.saturation = saturation;
  log_.records.push_back(std::move(rec));

  t_ += dt;

  if (human_.script_complete()) {
    if (!log_.completed) {
      log_.completed = true;
      log_.completion_time = t_;
      log_.pause_time = human_.pause_time();
    }
    settle_left_ -= dt;
    if (settle_left_ <= 0.0) {
      done_ = true;
    }
  }
  if (t_ >= config_.max_duration) {
    if (!log_.completed) {
      log_.completion_time = config_.max_duration;
      log_.pause_time = human_.pause_time();
    }
    done_ = true;
  }
  return !done_;
}

void Simulation::run() {
  while (step()) {
  }
}

SimLog run_scenario(const ScenarioConfig& config) {
  Simulation sim(config);
  sim.run();
  return sim.take_log();
}

const char* const kLogCsvHeader =
    "t,q0,q1,q2,q3,q4,q5,q6,q7,q8,"
    "grasp_x,grasp_y,grasp_z,grasp_rx,grasp_ry,grasp_rz,"
    "v_adm_x,v_adm_y,v_adm_z,v_h_x,v_h_y,v_h_z,alpha,"
    "v_d_x,v_d_y,v_d_z,f_h_x,f_h_y,f_h_z,"
    "human_x,human_y,human_z,robot_x,robot_y,robot_z,interval,saturation";

namespace {

void append_number(std::string& out, double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

void append_vec(std::string& out, const Vec3& v) {
  for (int i = 0; i < 3; ++i) {
    out.push_back(',');
    append_number(out, v[i]);
  }
}

}  // namespace

std::string log_to_csv(const SimLog& log) {
  std::string out;
  out.reserve(log.records.size() * 220 + 256);
  out += kLogCsvHeader;
  out.push_back('\n');
  for (const SimRecord& rec : log.records) {
    append_number(out, rec.t);
    for (int i = 0; i < rec.q.size(); ++i) {
      out.push_back(',');
      append_number(out, rec.q[i]);
    }
    append_vec(out, rec.grasp_pos);
    append_vec(out, rec.grasp_axis_angle);
    append_vec(out, rec.v_adm);
    append_vec(out, rec.v_h_meas);
    out.push_back(',');
    append_number(out, rec.alpha);
    append_vec(out, rec.v_d);
    append_vec(out, rec.f_h);
    append_vec(out, rec.human_pos);
    append_vec(out, rec.robot_pos);
    out.push_back(',');
    out += to_string(rec.label);
    out.push_back(',');
    out += std::to_string(rec.saturation);
    out.push_back('\n');
  }
  return out;
}

}  // namespace cocarry
