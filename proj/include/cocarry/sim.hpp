#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cocarry/coupling.hpp"
#include "cocarry/hqp.hpp"
#include "cocarry/human.hpp"
#include "cocarry/interaction.hpp"
#include "cocarry/kinematics.hpp"

namespace cocarry {

enum class ControllerMode { aci, admittance_only };

const char* to_string(ControllerMode mode);

struct VelocityLimits {
  double base = 0.5;  ///< [m/s] and [rad/s] on the base DoFs
  double arm = 1.0;   ///< [rad/s] on the arm joints
};

struct MocapParams {
  double sigma = 0.0;     ///< [m/s]
  int latency_steps = 0;  ///< control periods
};

/// Complete declarative description of one run.
struct ScenarioConfig {
  RobotModel robot = make_default_model();
  VecX q_start;  ///< empty: default posture

  ControllerMode controller = ControllerMode::aci;
  HqpWeights weights = default_weights(robot);
  DampingSchedule damping_schedule{0.1, 1.0, 0.0};  ///< w0 <= 0: 10% of posture manipulability
  VelocityLimits limits;
  double exec_tau = 0.1;  ///< actuation velocity-tracking constant [s]; 0 = ideal

  Vec3 adm_mass = Vec3::Constant(6.0);
  Vec3 adm_damping = Vec3::Constant(30.0);
  double window_length = 0.25;
  double epsilon = 1e-6;
  double motion_floor = 1e-3;
  double initial_alpha = 0.0;

  CouplingModel coupling;
  FtNoise ft_noise;
  MocapParams mocap;
  HumanParams human;
  PathScript path;

  double dt = 1e-3;
  double max_duration = 120.0;
  double settle_time = 2.0;
  std::uint64_t seed = 0;

  void validate() const;
  /// Damping schedule with w0 resolved (10% of the default-posture arm
  /// manipulability when left at zero).
  DampingSchedule resolved_schedule() const;
  VecX start_configuration() const;
};

struct SimRecord {
  double t = 0.0;
  VecX q;
  Vec3 grasp_pos = Vec3::Zero();
  Vec3 grasp_axis_angle = Vec3::Zero();
  Vec3 v_adm = Vec3::Zero();
  Vec3 v_h_meas = Vec3::Zero();
  double alpha = 0.0;
  Vec3 v_d = Vec3::Zero();
  Vec3 f_h = Vec3::Zero();
  Vec3 human_pos = Vec3::Zero();
  Vec3 robot_pos = Vec3::Zero();
  IntervalLabel label = IntervalLabel::none;
  std::uint16_t saturation = 0;  ///< bitmask of saturated joints
};

struct SimLog {
  double dt = 1e-3;
  std::string controller;
  std::vector<SimRecord> records;
  bool completed = false;
  double completion_time = 0.0;  ///< script completion, or max_duration on timeout
  double pause_time = 0.0;
  std::int64_t saturation_events = 0;

  double duration() const { return static_cast<double>(records.size()) * dt; }
};

/// One closed-loop run advanced one control period at a time.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config);

  /// Runs one control period; returns false once the run has finished
  /// (script completed and settled, or timed out).
  bool step();

  void run();
  const SimLog& log() const { return log_; }
  SimLog take_log() { return std::move(log_); }
  const ScenarioConfig& config() const { return config_; }

 private:
  ScenarioConfig config_;
  DampingSchedule schedule_;
  JointState state_;
  VecX qdot_exec_;
  HumanAgent human_;
  AdmittanceController admittance_;
  AdaptiveWindow window_;
  ReferenceState reference_;
  FtSensor ft_sensor_;
  MocapSensor mocap_;
  Vec3 engagement_offset_;  ///< p_h - p_r at engagement
  Vec3 grasp_prev_;
  Vec3 force_on_robot_prev_ = Vec3::Zero();
  SimLog log_;
  double t_ = 0.0;
  double settle_left_;
  bool done_ = false;
};

/// Runs a validated scenario to completion and returns the full log.
SimLog run_scenario(const ScenarioConfig& config);

/// Stable CSV serialization of a log (fixed header, one row per record,
/// shortest round-trip number formatting).
std::string log_to_csv(const SimLog& log);
extern const char* const kLogCsvHeader;

}  // namespace cocarry
