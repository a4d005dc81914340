#pragma once

#include <cstdint>
#include <random>

#include "cocarry/types.hpp"

namespace cocarry {

enum class CouplingKind { rigid_rod, rope, anisotropic };

/// Spring-damper law of the carried object between the human hand point and
/// the robot grasp point.
///
/// Displacements are decomposed in the object frame fixed at engagement:
/// the major axis is the rest_vector direction, the first lateral axis is
/// horizontal and the second close to vertical. The major axis selects
/// tension or compression stiffness by sign; each lateral axis has its own
/// stiffness. A rope transmits only line tension beyond its natural length.
/// grasp_compliance is a series compliance (soft robotic hand) that softens
/// the transmitted elastic force.
struct CouplingModel {
  CouplingKind kind = CouplingKind::anisotropic;
  Vec3 rest_vector = Vec3::UnitX();   ///< robot grasp -> human hand at engagement [m]
  double rest_length = 0.0;           ///< rope natural length [m]; <= 0 means |rest_vector|
  double stiffness_tension = 0.0;     ///< major axis, stretched [N/m]
  double stiffness_compression = 0.0; ///< major axis, compressed [N/m]
  Eigen::Vector2d stiffness_lateral = Eigen::Vector2d::Zero();  ///< horizontal, vertical [N/m]
  Vec3 damping = Vec3::Zero();        ///< major, lateral-h, lateral-v [N s/m]
  double grasp_compliance = 0.0;      ///< series compliance [m/N]

  void validate() const;

  /// Orthonormal object frame (major, lateral-horizontal, lateral-vertical).
  Mat3 object_frame() const;

  double natural_length() const {
    return rest_length > 0.0 ? rest_length : rest_vector.norm();
  }
};

/// Force exerted by the object on the robot grasp point; the human hand
/// receives the negation.
Vec3 object_force(const CouplingModel& model, const Vec3& p_h, const Vec3& p_r,
                  const Vec3& v_h, const Vec3& v_r);

struct FtNoise {
  Vec3 sigma = Vec3::Zero();  ///< per-axis standard deviation [N]
  Vec3 bias = Vec3::Zero();   ///< [N]
};

/// Simulated force/torque sensor: adds bias plus seeded Gaussian noise.
class FtSensor {
 public:
  FtSensor(const FtNoise& noise, std::uint64_t seed);

  Vec3 measure(const Vec3& force);

 private:
  FtNoise noise_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace cocarry
