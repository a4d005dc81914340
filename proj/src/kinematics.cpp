#include "cocarry/kinematics.hpp"

#include <cmath>

namespace cocarry {

namespace {

Eigen::Isometry3d dh_transform(const DhLink& link, double q) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.rotate(Eigen::AngleAxisd(q, Vec3::UnitZ()));
  t.translate(Vec3(0.0, 0.0, link.d));
  t.translate(Vec3(link.a, 0.0, 0.0));
  t.rotate(Eigen::AngleAxisd(link.alpha, Vec3::UnitX()));
  return t;
}

Eigen::Isometry3d base_transform(const VecX& q) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.translate(Vec3(q[0], q[1], 0.0));
  t.rotate(Eigen::AngleAxisd(q[2], Vec3::UnitZ()));
  return t;
}

void check_state(const RobotModel& model, const JointState& state) {
  model.validate();
  if (state.q.size() != model.dof()) {
    throw ConfigError("joint state has dimension " + std::to_string(state.q.size()) +
                      ", model expects " + std::to_string(model.dof()));
  }
  if (!state.q.allFinite()) {
    throw NumericError("joint state contains non-finite values");
  }
}

}  // namespace

void RobotModel::validate() const {
  if (arm.size() != 6) {
    throw ConfigError("arm must have 6 joints, got " + std::to_string(arm.size()));
  }
  for (const DhLink& link : arm) {
    if (!std::isfinite(link.a) || !std::isfinite(link.d) || !std::isfinite(link.alpha)) {
      throw ConfigError("non-finite arm link parameter");
    }
  }
  if (!base_mount.matrix().allFinite() || !tool_transform.matrix().allFinite()) {
    throw ConfigError("non-finite mount or tool transform");
  }
}

RobotModel make_default_model() {
  RobotModel model;
  // UR16e, classic DH.
  model.arm = {
      {0.0, 0.1807, M_PI / 2.0},
      {-0.4784, 0.0, 0.0},
      {-0.3600, 0.0, 0.0},
      {0.0, 0.17415, M_PI / 2.0},
      {0.0, 0.11985, -M_PI / 2.0},
      {0.0, 0.11655, 0.0},
  };
  model.base_mount = Eigen::Isometry3d::Identity();
  model.base_mount.translate(Vec3(0.25, 0.0, 0.50));
  model.tool_transform = Eigen::Isometry3d::Identity();
  model.tool_transform.translate(Vec3(0.0, 0.0, 0.12));
  return model;
}

VecX default_posture(const RobotModel& model) {
  VecX q = VecX::Zero(model.dof());
  // Elbow-up carry posture; grasp roughly half a metre ahead of the arm root.
  q[3] = 0.0;
  q[4] = -2.0;
  q[5] = -1.4;
  q[6] = -1.3;
  q[7] = M_PI / 2.0;
  q[8] = 0.0;
  return q;
}

Pose forward_kinematics(const RobotModel& model, const JointState& state) {
  check_state(model, state);
  Eigen::Isometry3d t = base_transform(state.q) * model.base_mount;
  for (int i = 0; i < model.arm_dof(); ++i) {
    t = t * dh_transform(model.arm[i], state.q[RobotModel::kBaseDof + i]);
  }
  t = t * model.tool_transform;
  Pose pose;
  pose.position = t.translation();
  pose.orientation = Eigen::Quaterniond(t.rotation()).normalized();
  return pose;
}

Jacobian whole_body_jacobian(const RobotModel& model, const JointState& state) {
  check_state(model, state);
  const int m = model.dof();
  Jacobian jac(6, m);
  jac.setZero();

  // Chain walk, recording each arm joint's world axis and origin.
  Eigen::Isometry3d t = base_transform(state.q) * model.base_mount;
  std::vector<Vec3> axes(model.arm_dof());
  std::vector<Vec3> origins(model.arm_dof());
  for (int i = 0; i < model.arm_dof(); ++i) {
    axes[i] = t.rotation() * Vec3::UnitZ();
    origins[i] = t.translation();
    t = t * dh_transform(model.arm[i], state.q[RobotModel::kBaseDof + i]);
  }
  const Vec3 grasp = (t * model.tool_transform).translation();

  // Base columns: two unit translations, then yaw about the vertical axis
  // through the base origin.
  jac.col(0).head<3>() = Vec3::UnitX();
  jac.col(1).head<3>() = Vec3::UnitY();
  const Vec3 base_origin(state.q[0], state.q[1], 0.0);
  jac.col(2).head<3>() = Vec3::UnitZ().cross(grasp - base_origin);
  jac.col(2).tail<3>() = Vec3::UnitZ();

  for (int i = 0; i < model.arm_dof(); ++i) {
    jac.col(RobotModel::kBaseDof + i).head<3>() = axes[i].cross(grasp - origins[i]);
    jac.col(RobotModel::kBaseDof + i).tail<3>() = axes[i];
  }
  return jac;
}

Mat6 arm_flange_jacobian(const RobotModel& model, const JointState& state) {
  check_state(model, state);
  Mat6 jac;
  jac.setZero();
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();  // arm root frame
  std::vector<Vec3> axes(model.arm_dof());
  std::vector<Vec3> origins(model.arm_dof());
  for (int i = 0; i < model.arm_dof(); ++i) {
    axes[i] = t.rotation() * Vec3::UnitZ();
    origins[i] = t.translation();
    t = t * dh_transform(model.arm[i], state.q[RobotModel::kBaseDof + i]);
  }
  const Vec3 flange = t.translation();
  for (int i = 0; i < model.arm_dof(); ++i) {
    jac.col(i).head<3>() = axes[i].cross(flange - origins[i]);
    jac.col(i).tail<3>() = axes[i];
  }
  return jac;
}

double manipulability_measure(const Mat6& arm_jacobian) {
  return std::abs(arm_jacobian.determinant());
}

double arm_manipulability(const RobotModel& model, const JointState& state) {
  return manipulability_measure(arm_flange_jacobian(model, state));
}

Vec6 pose_error(const Pose& desired, const Pose& current) {
  Vec6 error;
  error.head<3>() = desired.position - current.position;
  Eigen::Quaterniond rel = desired.orientation * current.orientation.conjugate();
  if (rel.w() < 0.0) {
    rel.coeffs() *= -1.0;
  }
  const Eigen::AngleAxisd aa(rel);
  error.tail<3>() = aa.angle() * aa.axis();
  return error;
}

}  // namespace cocarry
