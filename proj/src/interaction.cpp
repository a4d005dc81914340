#include "cocarry/interaction.hpp"

#include <algorithm>
#include <cmath>

namespace cocarry {

AdmittanceController::AdmittanceController(const Vec3& mass_diag, const Vec3& damping_diag)
    : mass_(mass_diag), damping_(damping_diag) {
  if ((mass_.array() <= 0.0).any() || (damping_.array() <= 0.0).any()) {
    throw ConfigError("admittance mass and damping diagonals must be positive");
  }
}

Vec3 AdmittanceController::step(const Vec3& force, double dt) {
  if (dt <= 0.0) {
    throw ConfigError("admittance step requires dt > 0");
  }
  if (!force.allFinite()) {
    throw NumericError("non-finite force into the admittance");
  }
  for (int i = 0; i < 3; ++i) {
    const double decay = std::exp(-damping_[i] / mass_[i] * dt);
    velocity_[i] = decay * velocity_[i] + (1.0 - decay) * force[i] / damping_[i];
  }
  return velocity_;
}

AdaptiveWindow::AdaptiveWindow(double window_len, double epsilon, double motion_floor,
                               double initial_alpha)
    : window_len_(window_len),
      epsilon_(epsilon),
      motion_floor_(motion_floor),
      alpha_(initial_alpha) {
  if (window_len <= 0.0 || epsilon <= 0.0 || motion_floor < 0.0) {
    throw ConfigError("adaptive window requires window_len > 0, epsilon > 0, motion_floor >= 0");
  }
  if (initial_alpha < 0.0 || initial_alpha > 1.0) {
    throw ConfigError("initial adaptive index must lie in [0, 1]");
  }
}

double AdaptiveWindow::update(const Vec3& v_adm, const Vec3& v_h, double dt) {
  if (dt <= 0.0) {
    throw ConfigError("adaptive window update requires dt > 0");
  }
  samples_.push_back({v_adm, v_h, dt});
  total_dt_ += dt;
  while (total_dt_ - samples_.front().dt >= window_len_) {
    total_dt_ -= samples_.front().dt;
    samples_.pop_front();
  }

  Vec3 disp_adm = Vec3::Zero();
  Vec3 disp_h = Vec3::Zero();
  for (const Sample& s : samples_) {
    disp_adm += s.v_adm * s.dt;
    disp_h += s.v_h * s.dt;
  }
  const double human_norm = disp_h.norm();
  if (human_norm < motion_floor_) {
    active_ = false;
    return alpha_;
  }
  active_ = true;
  const double raw = 1.0 - disp_adm.norm() / (human_norm + epsilon_);
  alpha_ = std::clamp(raw, 0.0, 1.0);
  return alpha_;
}

Vec3 reference_velocity(const Vec3& v_adm, double alpha, const Vec3& v_h) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw ConfigError("adaptive index out of [0, 1]");
  }
  return v_adm + alpha * v_h;
}

void integrate_reference(ReferenceState& ref, const Vec3& v_d, double dt) {
  if (dt <= 0.0) {
    throw ConfigError("reference integration requires dt > 0");
  }
  ref.pose.position += v_d * dt;
  ref.twist.head<3>() = v_d;
  ref.twist.tail<3>().setZero();
}

}  // namespace cocarry
