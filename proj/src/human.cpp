#include "cocarry/human.hpp"

#include <algorithm>
#include <cmath>

namespace cocarry {

const char* to_string(IntervalLabel label) {
  switch (label) {
    case IntervalLabel::none: return "none";
    case IntervalLabel::lowering_lifting: return "lowering_lifting";
    case IntervalLabel::pulling: return "pulling";
    case IntervalLabel::sideways_right: return "sideways_right";
    case IntervalLabel::pushing: return "pushing";
    case IntervalLabel::sideways_left: return "sideways_left";
  }
  return "none";
}

IntervalLabel interval_label_from_string(const std::string& name) {
  for (IntervalLabel label : {IntervalLabel::none, IntervalLabel::lowering_lifting,
                              IntervalLabel::pulling, IntervalLabel::sideways_right,
                              IntervalLabel::pushing, IntervalLabel::sideways_left}) {
    if (name == to_string(label)) {
      return label;
    }
  }
  throw ConfigError("unknown interval label: " + name);
}

void PathScript::validate() const {
  if (segments.empty()) {
    throw ConfigError("path script has no segments");
  }
  if (dwell < 0.0) {
    throw ConfigError("dwell time must be non-negative");
  }
  for (const PathSegment& seg : segments) {
    if (seg.duration <= 0.0) {
      throw ConfigError("segment durations must be positive");
    }
    if (!seg.displacement.allFinite()) {
      throw ConfigError("segment displacement must be finite");
    }
  }
}

double PathScript::total_duration() const {
  double total = 0.0;
  for (const PathSegment& seg : segments) {
    total += seg.duration + dwell;
  }
  return total;
}

PathScript::Eval PathScript::eval(double tau) const {
  Eval out;
  Vec3 reached = Vec3::Zero();
  double t0 = 0.0;
  for (const PathSegment& seg : segments) {
    const double dwell_end = t0 + seg.duration + dwell;
    if (tau < dwell_end) {
      const auto [pos, vel] =
          minjerk_eval(reached, reached + seg.displacement, seg.duration, tau - t0);
      out.offset = pos;
      out.velocity = vel;
      out.label = seg.label;
      return out;
    }
    reached += seg.displacement;
    t0 = dwell_end;
  }
  out.offset = reached;
  out.label = segments.back().label;
  return out;
}

double PathScript::next_boundary(double tau) const {
  double t0 = 0.0;
  for (const PathSegment& seg : segments) {
    t0 += seg.duration + dwell;
    if (tau <= t0 + 1e-12) {
      return t0;
    }
  }
  return t0;
}

Vec3 PathScript::net_displacement() const {
  Vec3 net = Vec3::Zero();
  for (const PathSegment& seg : segments) {
    net += seg.displacement;
  }
  return net;
}

PathScript build_experiment_path(double square_side, double vertical_drop,
                                 double segment_time, double dwell) {
  if (square_side <= 0.0 || vertical_drop <= 0.0 || segment_time <= 0.0 || dwell < 0.0) {
    throw ConfigError("experiment path needs positive dimensions and segment time");
  }
  PathScript script;
  script.dwell = dwell;
  script.segments = {
      {Vec3(0.0, 0.0, -vertical_drop), segment_time, IntervalLabel::lowering_lifting},
      {Vec3(0.0, 0.0, vertical_drop), segment_time, IntervalLabel::lowering_lifting},
      {Vec3(square_side, 0.0, 0.0), segment_time, IntervalLabel::pulling},
      {Vec3(0.0, -square_side, 0.0), segment_time, IntervalLabel::sideways_right},
      {Vec3(-square_side, 0.0, 0.0), segment_time, IntervalLabel::pushing},
      {Vec3(0.0, square_side, 0.0), segment_time, IntervalLabel::sideways_left},
  };
  return script;
}

std::pair<Vec3, Vec3> minjerk_eval(const Vec3& p0, const Vec3& p1, double total_time,
                                   double t) {
  if (total_time <= 0.0) {
    throw ConfigError("min-jerk profile needs a positive duration");
  }
  if (t <= 0.0) {
    return {p0, Vec3::Zero()};
  }
  if (t >= total_time) {
    return {p1, Vec3::Zero()};
  }
  const double s = t / total_time;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double blend = 10.0 * s3 - 15.0 * s3 * s + 6.0 * s3 * s2;
  const double blend_rate = (30.0 * s2 - 60.0 * s3 + 30.0 * s2 * s2) / total_time;
  return {p0 + blend * (p1 - p0), blend_rate * (p1 - p0)};
}

HumanAgent::HumanAgent(PathScript script, HumanParams params, const Vec3& start_position)
    : script_(std::move(script)), params_(params), origin_(start_position),
      position_(start_position) {
  script_.validate();
  if (params_.force_cap <= 0.0 || params_.bandwidth <= 0.0 || params_.max_speed <= 0.0 ||
      params_.align_tol <= 0.0) {
    throw ConfigError("human parameters must be positive");
  }
}

void HumanAgent::step(const Vec3& force_on_human, const Vec3& misalignment, double dt) {
  if (dt <= 0.0) {
    throw ConfigError("human step requires dt > 0");
  }
  // Yield in proportion to the object reaction; stop entirely at the cap.
  const double scale =
      std::clamp(1.0 - force_on_human.norm() / params_.force_cap, 0.0, 1.0);

  double next_clock = clock_ + scale * dt;
  // A misaligned object blocks the start of the next sub-movement: the
  // script clock may finish the current segment and its dwell but must not
  // cross into the next segment until the robot is realigned.
  if (misalignment.norm() > params_.align_tol) {
    next_clock = std::min(next_clock, script_.next_boundary(clock_));
  }
  const double advanced = next_clock - clock_;
  pause_time_ += dt - advanced;
  clock_ = next_clock;

  const PathScript::Eval nominal = script_.eval(clock_);
  const Vec3 target = origin_ + nominal.offset;
  const double rate = advanced / dt;  // d(tau)/dt actually realized
  Vec3 command = scale * (nominal.velocity * rate + params_.bandwidth * (target - position_));
  const double speed = command.norm();
  if (speed > params_.max_speed) {
    command *= params_.max_speed / speed;
  }
  position_ += command * dt;
  velocity_ = command;
}

IntervalLabel HumanAgent::current_label() const {
  // While holding at a segment boundary, report the interval just finished.
  return script_.eval(std::max(0.0, clock_ - 1e-9)).label;
}

bool HumanAgent::script_complete() const {
  return clock_ >= script_.total_duration() - 1e-12;
}

MocapSensor::MocapSensor(double sigma, int latency_steps, std::uint64_t seed)
    : sigma_(sigma), latency_(static_cast<std::size_t>(latency_steps)), rng_(seed) {
  if (sigma < 0.0 || latency_steps < 0) {
    throw ConfigError("mocap sigma must be >= 0 and latency >= 0 steps");
  }
}

Vec3 MocapSensor::measure(const Vec3& v_true) {
  delay_line_.push_back(v_true);
  Vec3 delayed = Vec3::Zero();
  if (delay_line_.size() > latency_) {
    delayed = delay_line_.front();
    delay_line_.pop_front();
  }
  Vec3 noisy = delayed;
  for (int i = 0; i < 3; ++i) {
    noisy[i] += sigma_ * gauss_(rng_);
  }
  return noisy;
}

}  // namespace cocarry
