#include "cocarry/hqp.hpp"

#include <Eigen/Cholesky>
#include <cmath>

namespace cocarry {

namespace {

void check_finite(const Jacobian& jac, const Vec6& xdot_d, const Vec6& error) {
  if (!jac.allFinite() || !xdot_d.allFinite() || !error.allFinite()) {
    throw NumericError("non-finite input to the whole-body solver");
  }
}

// Hessian of the primary objective, J^T W1 J + k^2 W2. SPD for k > 0.
MatX primary_hessian(const Jacobian& jac, const HqpWeights& weights, double k) {
  return jac.transpose() * weights.task_weight.asDiagonal() * jac +
         (k * k) * MatX(weights.damping_weight.asDiagonal());
}

Eigen::LLT<MatX> factorize(const MatX& hessian) {
  Eigen::LLT<MatX> llt(hessian);
  if (llt.info() != Eigen::Success) {
    throw NumericError("primary Hessian factorization failed");
  }
  return llt;
}

}  // namespace

void HqpWeights::validate(int dof) const {
  if ((task_gain.array() <= 0.0).any() || (task_weight.array() <= 0.0).any()) {
    throw ConfigError("task gain and task weight diagonals must be positive");
  }
  if (damping_weight.size() != dof || posture_weight.size() != dof ||
      default_posture.size() != dof) {
    throw ConfigError("weight dimensions do not match the model DoF");
  }
  if ((damping_weight.array() <= 0.0).any()) {
    throw ConfigError("damping weight diagonal must be positive");
  }
  if ((posture_weight.array() < 0.0).any()) {
    throw ConfigError("posture weight diagonal must be non-negative");
  }
  if (posture_gain <= 0.0) {
    throw ConfigError("posture gain must be positive");
  }
}

double damping_factor(double manipulability, const DampingSchedule& sched) {
  if (manipulability >= sched.w0) {
    return sched.k_min;
  }
  const double r = 1.0 - manipulability / sched.w0;
  return sched.k_min + (sched.k_max - sched.k_min) * r * r;
}

VecX solve_primary(const Jacobian& jac, const Vec6& xdot_d, const Vec6& error,
                   const HqpWeights& weights, double k) {
  if (k <= 0.0) {
    throw ConfigError("damping factor must be positive");
  }
  check_finite(jac, xdot_d, error);
  const Vec6 task = xdot_d + weights.task_gain.asDiagonal() * error;
  const VecX rhs = jac.transpose() * weights.task_weight.asDiagonal() * task;
  return factorize(primary_hessian(jac, weights, k)).solve(rhs);
}

VecX secondary_velocity(const VecX& q, const HqpWeights& weights) {
  return weights.posture_gain * 2.0 *
         (weights.posture_weight.asDiagonal() * (weights.default_posture - q));
}

VecX nullspace_project(const Jacobian& jac, const HqpWeights& weights, double k,
                       const VecX& qdot2) {
  if (k <= 0.0) {
    throw ConfigError("damping factor must be positive");
  }
  // (I - J# J) qdot2 with J# = H^-1 J^T W1, applied without forming the m x m
  // projector.
  const Vec6 image = jac * qdot2;
  const VecX rhs = jac.transpose() * weights.task_weight.asDiagonal() * image;
  return qdot2 - factorize(primary_hessian(jac, weights, k)).solve(rhs);
}

VecX wholebody_step(const RobotModel& model, const JointState& state, const Pose& x_d,
                    const Vec6& xdot_d, const HqpWeights& weights,
                    const DampingSchedule& sched) {
  weights.validate(model.dof());
  const double w = arm_manipulability(model, state);
  const double k = damping_factor(w, sched);
  const Jacobian jac = whole_body_jacobian(model, state);
  const Vec6 error = pose_error(x_d, forward_kinematics(model, state));
  const VecX qdot1 = solve_primary(jac, xdot_d, error, weights, k);
  const VecX qdot2 = secondary_velocity(state.q, weights);
  return qdot1 + nullspace_project(jac, weights, k, qdot2);
}

HqpWeights default_weights(const RobotModel& model) {
  const int m = model.dof();
  HqpWeights w;
  w.task_gain << 1.0, 1.0, 1.0, 0.1, 0.1, 0.1;
  w.task_weight << 1000.0, 1000.0, 1000.0, 500.0, 500.0, 500.0;
  w.damping_weight = VecX::Constant(m, 3.0);
  w.posture_weight = VecX::Ones(m);
  w.posture_weight.head(RobotModel::kBaseDof).setZero();
  w.default_posture = default_posture(model);
  w.posture_gain = 1.0;
  return w;
}

}  // namespace cocarry
