#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "canal/geometry.hpp"

namespace canal {

/// Thrown when a dynamics step produces a non-finite value.
class ModelDivergence : public std::runtime_error {
 public:
  explicit ModelDivergence(const std::string& what) : std::runtime_error(what) {}
};

/// Planar vessel state: world pose + body-frame velocities.
struct VesselState {
  double x = 0.0;    // [m]
  double y = 0.0;    // [m]
  double psi = 0.0;  // heading [rad], wrapped to (-pi, pi]
  double u = 0.0;    // surge [m/s]
  double v = 0.0;    // sway [m/s]
  double r = 0.0;    // yaw rate [rad/s]

  Vec6 as_vector() const {
    Vec6 z;
    z << x, y, psi, u, v, r;
    return z;
  }
  static VesselState from_vector(const Vec6& z) {
    return VesselState{z(0), z(1), z(2), z(3), z(4), z(5)};
  }
  Vec2 position() const { return Vec2(x, y); }
  Vec3 body_velocity() const { return Vec3(u, v, r); }
  bool finite() const;
};

/// Forces of the four thrusters [N].
struct ThrustCommand {
  Vec4 f = Vec4::Zero();

  static ThrustCommand zero() { return ThrustCommand{}; }
};

// 3-DOF vessel model with diagonal added-mass and linear damping, a 3x4
// thrust allocation matrix, and a 3-disc hull footprint.
struct VesselModel {
  Vec3 M_diag{12.0, 24.0, 3.0};   // m11, m22 [kg], m33 [kg m^2]
  Vec3 D_diag{6.0, 12.0, 2.5};    // linear damping
  Eigen::Matrix<double, 3, 4> B;  // thrust allocation
  double hull_width = 0.45;       // a [m]
  double hull_length = 0.9;       // b [m]
  std::array<Vec2, 3> disc_offsets{Vec2(-0.3, 0.0), Vec2(0.0, 0.0), Vec2(0.3, 0.0)};
  double r_disc = 0.28;  // footprint disc radius [m]
  double f_max = 6.0;    // per-thruster force bound [N]

  VesselModel();

  /// Throws std::invalid_argument when an invariant fails (non-positive
  /// masses, negative damping, discs not covering the hull rectangle).
  void validate() const;

  static VesselModel from_json_file(const std::string& path);
  static VesselModel from_json_text(const std::string& text);
};

/// Rotation mapping body rates [u v r] to world rates [xdot ydot psidot].
Mat3 heading_rotation(double psi);

/// Skew-symmetric Coriolis/centripetal matrix for the diagonal-mass model.
Mat3 coriolis(const Vec3& body_vel, const VesselModel& model);

/// Continuous-time state derivative; shared by the Euler step and the RK4 plant.
Vec6 continuous_rhs(const Vec6& z, const Vec4& thrust, const VesselModel& model);

/// One explicit Euler step of length tau. Heading is renormalized.
/// Throws ModelDivergence naming the first non-finite field.
VesselState step_dynamics(const VesselState& state, const ThrustCommand& cmd,
                          const VesselModel& model, double tau);

/// One RK4 step of length dt; used as the simulator's plant.
VesselState rk4_step(const VesselState& state, const ThrustCommand& cmd,
                     const VesselModel& model, double dt);

/// World-frame centers of the three footprint discs.
std::array<Vec2, 3> disc_centers(const VesselState& state, const VesselModel& model);

/// Analytic Jacobians of step_dynamics w.r.t. state and input.
void linearize_dynamics(const VesselState& state, const ThrustCommand& cmd,
                        const VesselModel& model, double tau,
                        Eigen::Matrix<double, 6, 6>& A, Eigen::Matrix<double, 6, 4>& B);

}  // namespace canal
