#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cocarry/types.hpp"

namespace cocarry {

enum class IntervalLabel : std::uint8_t {
  none = 0,
  lowering_lifting,
  pulling,
  sideways_right,
  pushing,
  sideways_left,
};

const char* to_string(IntervalLabel label);
IntervalLabel interval_label_from_string(const std::string& name);

struct PathSegment {
  Vec3 displacement = Vec3::Zero();  ///< [m]
  double duration = 1.0;             ///< [s]
  IntervalLabel label = IntervalLabel::none;
};

/// Scripted sequence of point-to-point sub-movements with a fixed dwell
/// after each segment. Script time tau runs from 0 to total_duration().
struct PathScript {
  std::vector<PathSegment> segments;
  double dwell = 1.0;  ///< hold after each segment [s]

  struct Eval {
    Vec3 offset = Vec3::Zero();    ///< displacement from the script origin
    Vec3 velocity = Vec3::Zero();  ///< d(offset)/d(tau)
    IntervalLabel label = IntervalLabel::none;
  };

  void validate() const;
  double total_duration() const;
  Eval eval(double tau) const;
  /// Next segment-start boundary (or the script end) at or after tau;
  /// these are the points where the agent may have to wait for the robot.
  double next_boundary(double tau) const;
  Vec3 net_displacement() const;
};

/// Six sub-movements: down and up by vertical_drop, then a closed square of
/// side square_side (pull, sideways right, push, sideways left), each taking
/// segment_time. The agent faces +x with the robot behind it, so its right
/// hand side is -y.
PathScript build_experiment_path(double square_side, double vertical_drop,
                                 double segment_time, double dwell);

/// Quintic point-to-point profile with zero boundary velocity; t is clamped
/// to [0, T]. Returns position and velocity.
std::pair<Vec3, Vec3> minjerk_eval(const Vec3& p0, const Vec3& p1, double total_time,
                                   double t);

struct HumanParams {
  double bandwidth = 20.0;   ///< hand tracking bandwidth [1/s]
  double force_cap = 40.0;   ///< object reaction magnitude that halts the agent [N]
  double max_speed = 1.5;    ///< hand speed limit [m/s]
  double align_tol = 0.15;   ///< misalignment allowed before starting a sub-movement [m]
};

/// Scripted human partner. Tracks the scripted nominal motion, slows down in
/// proportion to the object reaction force, and does not start the next
/// sub-movement while the object is misaligned beyond align_tol (waiting for
/// the robot to be realigned through the object, as a cooperative partner
/// would). All behaviour is deterministic.
class HumanAgent {
 public:
  HumanAgent(PathScript script, HumanParams params, const Vec3& start_position);

  /// Advances one control period. force_on_human is the object reaction at
  /// the hand; misalignment is the drift of the human-robot relative
  /// displacement from its engagement value.
  void step(const Vec3& force_on_human, const Vec3& misalignment, double dt);

  const Vec3& position() const { return position_; }
  const Vec3& velocity() const { return velocity_; }
  IntervalLabel current_label() const;
  double script_clock() const { return clock_; }
  double pause_time() const { return pause_time_; }
  bool script_complete() const;
  const PathScript& script() const { return script_; }
  Vec3 nominal_end_position() const { return origin_ + script_.net_displacement(); }

 private:
  PathScript script_;
  HumanParams params_;
  Vec3 origin_;
  Vec3 position_;
  Vec3 velocity_ = Vec3::Zero();
  double clock_ = 0.0;
  double pause_time_ = 0.0;
};

/// Motion-capture measurement of the hand velocity: pure delay of
/// latency_steps control periods plus seeded Gaussian noise. Outputs zero
/// while the delay line fills.
class MocapSensor {
 public:
  MocapSensor(double sigma, int latency_steps, std::uint64_t seed);

  Vec3 measure(const Vec3& v_true);

 private:
  double sigma_;
  std::size_t latency_;
  std::deque<Vec3> delay_line_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace cocarry
