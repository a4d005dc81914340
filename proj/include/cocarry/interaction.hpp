#pragma once

#include <deque>

#include "cocarry/types.hpp"

namespace cocarry {

/// First-order admittance M vdot + D v = F, discretized exactly
/// (zero-order hold on the force), per axis.
class AdmittanceController {
 public:
  AdmittanceController(const Vec3& mass_diag, const Vec3& damping_diag);

  /// Advances one control period and returns the admittance velocity.
  Vec3 step(const Vec3& force, double dt);

  const Vec3& velocity() const { return velocity_; }
  void reset(const Vec3& velocity = Vec3::Zero()) { velocity_ = velocity; }

 private:
  Vec3 mass_;
  Vec3 damping_;
  Vec3 velocity_ = Vec3::Zero();
};

/// Sliding-window estimate of the object deformability:
///   alpha = 1 - ||int v_adm|| / (||int v_h|| + epsilon)
/// over the trailing window, clamped to [0, 1]. When the human window
/// displacement is below the motion floor the previous value is held.
class AdaptiveWindow {
 public:
  AdaptiveWindow(double window_len, double epsilon, double motion_floor,
                 double initial_alpha = 0.0);

  /// Pushes one sample pair and recomputes the index.
  double update(const Vec3& v_adm, const Vec3& v_h, double dt);

  double alpha() const { return alpha_; }
  /// True when the last update recomputed alpha (human moving above floor).
  bool active() const { return active_; }
  double window_length() const { return window_len_; }

 private:
  struct Sample {
    Vec3 v_adm;
    Vec3 v_h;
    double dt;
  };

  std::deque<Sample> samples_;
  double total_dt_ = 0.0;
  double window_len_;
  double epsilon_;
  double motion_floor_;
  double alpha_;
  bool active_ = false;
};

/// Reference pose and twist sent to the whole-body controller. The angular
/// part of the twist is identically zero and the orientation never changes.
struct ReferenceState {
  Pose pose;
  Vec6 twist = Vec6::Zero();
};

/// v_d = v_adm + alpha * v_h.
Vec3 reference_velocity(const Vec3& v_adm, double alpha, const Vec3& v_h);

/// Advances the reference position by v_d * dt; orientation untouched.
void integrate_reference(ReferenceState& ref, const Vec3& v_d, double dt);

}  // namespace cocarry
