#pragma once

#include <vector>

#include "cocarry/types.hpp"

namespace cocarry {

/// One revolute joint of the serial arm, classic Denavit-Hartenberg
/// parameters. The joint transform is
///   RotZ(q) * TransZ(d) * TransX(a) * RotX(alpha).
struct DhLink {
  double a = 0.0;      ///< link length [m]
  double d = 0.0;      ///< link offset [m]
  double alpha = 0.0;  ///< link twist [rad]
};

/// Planar omni-directional base (x, y, yaw) carrying a serial 6R arm.
/// Generalized coordinates are ordered base-first: (x, y, yaw, q_arm...).
struct RobotModel {
  static constexpr int kBaseDof = 3;

  std::vector<DhLink> arm;
  Eigen::Isometry3d base_mount = Eigen::Isometry3d::Identity();      ///< base frame -> arm root
  Eigen::Isometry3d tool_transform = Eigen::Isometry3d::Identity();  ///< flange -> grasp point

  int arm_dof() const { return static_cast<int>(arm.size()); }
  int dof() const { return kBaseDof + arm_dof(); }

  /// Throws ConfigError if the arm is not a 6R chain with finite parameters.
  void validate() const;
};

struct JointState {
  VecX q;     ///< (x, y, yaw, arm joints); size must equal model.dof()
  VecX qdot;  ///< optional velocities, empty when unused
};

/// UR16e link parameters with the arm mounted on the front of the base
/// deck and a short tool extension for the grasp point.
RobotModel make_default_model();

/// Arm posture used both as the controller's default posture and as the
/// simulator's start configuration (elbow up, grasp forward of the base).
VecX default_posture(const RobotModel& model);

/// World-frame grasp pose. Pure function of (model, q).
Pose forward_kinematics(const RobotModel& model, const JointState& state);

/// 6 x m geometric Jacobian of the grasp point in the world frame,
/// rows (v; omega). Columns 1-2 are the base translations, column 3 the
/// base yaw, the rest the arm joints.
Jacobian whole_body_jacobian(const RobotModel& model, const JointState& state);

/// Arm-only Jacobian taken at the flange, expressed in the arm root frame
/// (independent of the base placement).
Mat6 arm_flange_jacobian(const RobotModel& model, const JointState& state);

/// sqrt(det(J J^T)) of a square 6x6 arm Jacobian.
double manipulability_measure(const Mat6& arm_jacobian);

/// Manipulability of the arm chain at the flange; 0 at a singularity.
double arm_manipulability(const RobotModel& model, const JointState& state);

/// 6-vector task error: position difference stacked with the axis-angle
/// of the rotation carrying `current` onto `desired`.
Vec6 pose_error(const Pose& desired, const Pose& current);

}  // namespace cocarry
