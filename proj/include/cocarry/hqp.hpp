#pragma once

#include "cocarry/kinematics.hpp"
#include "cocarry/types.hpp"

namespace cocarry {

/// Gains and weights of the two-level whole-body program.
///
/// The primary task minimizes
///   || xdot_d + K e - J qdot ||^2_W1  +  || k qdot ||^2_W2
/// and the secondary task is the weighted posture objective
///   || q_def - q ||^2_W3, applied as a scaled negative gradient and
/// projected into the primary null space.
struct HqpWeights {
  Vec6 task_gain;         ///< diagonal of K [1/s]
  Vec6 task_weight;       ///< diagonal of W1
  VecX damping_weight;    ///< diagonal of W2, size m
  VecX posture_weight;    ///< diagonal of W3, size m (>= 0)
  VecX default_posture;   ///< q_def, size m
  double posture_gain = 1.0;  ///< [1/s]

  void validate(int dof) const;
};

/// Manipulability-scheduled damping factor: quadratic ramp from k_max at
/// w = 0 down to k_min at the threshold w0, constant beyond it.
struct DampingSchedule {
  double k_min = 0.1;
  double k_max = 1.0;
  double w0 = 0.01;
};

double damping_factor(double manipulability, const DampingSchedule& sched);

/// Closed-form minimizer of the primary task objective:
///   qdot1 = (J^T W1 J + k^2 W2)^-1 J^T W1 (xdot_d + K error).
VecX solve_primary(const Jacobian& jac, const Vec6& xdot_d, const Vec6& error,
                   const HqpWeights& weights, double k);

/// Posture velocity: posture_gain * 2 * W3 (q_def - q).
VecX secondary_velocity(const VecX& q, const HqpWeights& weights);

/// Projects qdot2 into the null space of the primary task using the same
/// damped weighted generalized inverse as solve_primary.
VecX nullspace_project(const Jacobian& jac, const HqpWeights& weights, double k,
                       const VecX& qdot2);

/// Full controller step: manipulability -> damping factor -> primary solve
/// plus null-space-projected posture velocity.
VecX wholebody_step(const RobotModel& model, const JointState& state, const Pose& x_d,
                    const Vec6& xdot_d, const HqpWeights& weights,
                    const DampingSchedule& sched);

/// Paper defaults for the 9-DoF mobile manipulator: K = diag{1,1,1,.1,.1,.1},
/// W1 = 100 diag{10,10,10,5,5,5}, W2 = 3 I, W3 = diag{0_3, 1_6}.
HqpWeights default_weights(const RobotModel& model);

}  // namespace cocarry
