#include "cocarry/coupling.hpp"

#include <algorithm>
#include <cmath>

namespace cocarry {

namespace {

// Engagement width over which rope damping ramps in, so the transmitted
// force stays continuous across the slack/taut transition.
constexpr double kRopeDampingRamp = 0.01;  // [m]

double soften(double stiffness, double compliance) {
  return stiffness / (1.0 + compliance * stiffness);
}

}  // namespace

void CouplingModel::validate() const {
  if (stiffness_tension < 0.0 || stiffness_compression < 0.0 ||
      (stiffness_lateral.array() < 0.0).any() || (damping.array() < 0.0).any() ||
      grasp_compliance < 0.0) {
    throw ConfigError("coupling stiffness, damping and compliance must be non-negative");
  }
  if (kind != CouplingKind::rigid_rod && rest_vector.norm() < 1e-9) {
    throw ConfigError("rope and anisotropic couplings need a non-zero rest vector");
  }
  if (kind == CouplingKind::rope &&
      (stiffness_compression != 0.0 || stiffness_lateral.squaredNorm() != 0.0)) {
    throw ConfigError("a rope has zero compression and lateral stiffness");
  }
}

Mat3 CouplingModel::object_frame() const {
  Mat3 frame;
  Vec3 major = rest_vector;
  if (major.norm() < 1e-9) {
    return Mat3::Identity();
  }
  major.normalize();
  Vec3 lateral_h = Vec3::UnitZ().cross(major);
  if (lateral_h.norm() < 1e-9) {
    lateral_h = Vec3::UnitX().cross(major);
  }
  lateral_h.normalize();
  const Vec3 lateral_v = major.cross(lateral_h);
  frame.col(0) = major;
  frame.col(1) = lateral_h;
  frame.col(2) = lateral_v;
  return frame;
}

Vec3 object_force(const CouplingModel& model, const Vec3& p_h, const Vec3& p_r,
                  const Vec3& v_h, const Vec3& v_r) {
  model.validate();
  const Vec3 rel = p_h - p_r;
  const Vec3 rel_dot = v_h - v_r;

  if (model.kind == CouplingKind::rope) {
    const double length = rel.norm();
    const double natural = model.natural_length();
    if (length <= natural || length < 1e-12) {
      return Vec3::Zero();
    }
    const Vec3 dir = rel / length;
    const double stretch = length - natural;
    const double k = soften(model.stiffness_tension, model.grasp_compliance);
    const double ramp = std::min(1.0, stretch / kRopeDampingRamp);
    const double rate = dir.dot(rel_dot);
    const double magnitude = std::max(0.0, k * stretch + ramp * model.damping[0] * rate);
    return magnitude * dir;  // pulls the robot toward the human
  }

  const Mat3 frame = model.object_frame();
  const Vec3 elongation = frame.transpose() * (rel - model.rest_vector);
  const Vec3 elongation_rate = frame.transpose() * rel_dot;

  Vec3 force_object = Vec3::Zero();
  // Major axis: stiffness selected by the sign of the elongation.
  const double k_major = elongation[0] >= 0.0 ? model.stiffness_tension
                                              : model.stiffness_compression;
  force_object[0] = soften(k_major, model.grasp_compliance) * elongation[0] +
                    model.damping[0] * elongation_rate[0];
  for (int i = 1; i < 3; ++i) {
    force_object[i] =
        soften(model.stiffness_lateral[i - 1], model.grasp_compliance) * elongation[i] +
        model.damping[i] * elongation_rate[i];
  }
  return frame * force_object;
}

FtSensor::FtSensor(const FtNoise& noise, std::uint64_t seed) : noise_(noise), rng_(seed) {
  if ((noise_.sigma.array() < 0.0).any()) {
    throw ConfigError("sensor noise sigma must be non-negative");
  }
}

Vec3 FtSensor::measure(const Vec3& force) {
  Vec3 measured = force + noise_.bias;
  for (int i = 0; i < 3; ++i) {
    measured[i] += noise_.sigma[i] * gauss_(rng_);
  }
  return measured;
}

}  // namespace cocarry
