#include "canal/vessel_model.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace canal {

bool VesselState::finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(psi) && std::isfinite(u) &&
         std::isfinite(v) && std::isfinite(r);
}

VesselModel::VesselModel() {
  // Two longitudinal thrusters at lateral offsets +-width/2 and two lateral
  // thrusters at longitudinal offsets +-length/2 (quarter-scale Roboat layout).
  const double half_w = hull_width / 2.0;
  const double half_l = hull_length / 2.0;
  B << 1.0, 1.0, 0.0, 0.0,
       0.0, 0.0, 1.0, 1.0,
       -half_w, half_w, half_l, -half_l;
}

void VesselModel::validate() const {
  if (!(M_diag.array() > 0.0).all())
    throw std::invalid_argument("vessel model: mass entries must be positive");
  if (!(D_diag.array() >= 0.0).all())
    throw std::invalid_argument("vessel model: damping entries must be non-negative");
  if (r_disc <= 0.0) throw std::invalid_argument("vessel model: r_disc must be positive");
  if (f_max <= 0.0) throw std::invalid_argument("vessel model: f_max must be positive");
  if (hull_width <= 0.0 || hull_length <= 0.0)
    throw std::invalid_argument("vessel model: hull dimensions must be positive");

  // The disc union must cover the hull rectangle; sample its boundary.
  const double half_w = hull_width / 2.0;
  const double half_l = hull_length / 2.0;
  const int n_samples = 64;
  for (int i = 0; i < n_samples; ++i) {
    const double s = static_cast<double>(i) / n_samples;  // walk the perimeter
    Vec2 p;
    if (s < 0.25) {
      p = Vec2(-half_l + 4.0 * s * hull_length, -half_w);
    } else if (s < 0.5) {
      p = Vec2(half_l, -half_w + 4.0 * (s - 0.25) * hull_width);
    } else if (s < 0.75) {
      p = Vec2(half_l - 4.0 * (s - 0.5) * hull_length, half_w);
    } else {
      p = Vec2(-half_l, half_w - 4.0 * (s - 0.75) * hull_width);
    }
    bool covered = false;
    for (const auto& c : disc_offsets) {
      if ((p - c).norm() <= r_disc + 1e-12) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      std::ostringstream msg;
      msg << "vessel model: discs do not cover hull boundary point (" << p.x() << ", " << p.y()
          << ")";
      throw std::invalid_argument(msg.str());
    }
  }
}

VesselModel VesselModel::from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  VesselModel m;
  m.M_diag = Vec3(j.at("m11").get<double>(), j.at("m22").get<double>(), j.at("m33").get<double>());
  m.D_diag = Vec3(j.at("d11").get<double>(), j.at("d22").get<double>(), j.at("d33").get<double>());
  const auto b = j.at("B");
  if (b.size() != 12) throw std::invalid_argument("vessel model: B must have 12 entries (3x4 row-major)");
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 4; ++col) m.B(row, col) = b.at(row * 4 + col).get<double>();
  m.hull_width = j.at("a").get<double>();
  m.hull_length = j.at("b").get<double>();
  const auto offs = j.at("disc_offsets");
  if (offs.size() != 3) throw std::invalid_argument("vessel model: exactly 3 disc_offsets required");
  for (int i = 0; i < 3; ++i)
    m.disc_offsets[i] = Vec2(offs.at(i).at(0).get<double>(), offs.at(i).at(1).get<double>());
  m.r_disc = j.at("r_disc").get<double>();
  m.f_max = j.at("f_max").get<double>();
  m.validate();
  return m;
}

VesselModel VesselModel::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("vessel model: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

Mat3 heading_rotation(double psi) {
  const double c = std::cos(psi), s = std::sin(psi);
  Mat3 r;
  r << c, -s, 0.0,
       s, c, 0.0,
       0.0, 0.0, 1.0;
  return r;
}

Mat3 coriolis(const Vec3& body_vel, const VesselModel& model) {
  const double m11 = model.M_diag(0), m22 = model.M_diag(1);
  const double u = body_vel(0), v = body_vel(1);
  Mat3 c;
  c << 0.0, 0.0, -m22 * v,
       0.0, 0.0, m11 * u,
       m22 * v, -m11 * u, 0.0;
  return c;
}

Vec6 continuous_rhs(const Vec6& z, const Vec4& thrust, const VesselModel& model) {
  const Vec3 nu(z(3), z(4), z(5));
  const Vec3 eta_dot = heading_rotation(z(2)) * nu;
  const Vec3 damped = coriolis(nu, model) * nu + model.D_diag.asDiagonal() * nu;
  const Vec3 nu_dot = (model.B * thrust - damped).cwiseQuotient(model.M_diag);
  Vec6 dz;
  dz << eta_dot, nu_dot;
  return dz;
}

namespace {

void check_finite(const VesselState& s, const char* where) {
  if (s.finite()) return;
  const char* field = !std::isfinite(s.x)   ? "x"
                      : !std::isfinite(s.y)   ? "y"
                      : !std::isfinite(s.psi) ? "psi"
                      : !std::isfinite(s.u)   ? "u"
                      : !std::isfinite(s.v)   ? "v"
                                              : "r";
  throw ModelDivergence(std::string(where) + ": non-finite field '" + field + "'");
}

}  // namespace

VesselState step_dynamics(const VesselState& state, const ThrustCommand& cmd,
                          const VesselModel& model, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("step_dynamics: tau must be positive");
  const Vec6 z = state.as_vector();
  const Vec6 z_next = z + tau * continuous_rhs(z, cmd.f, model);
  VesselState out = VesselState::from_vector(z_next);
  out.psi = wrap_angle(out.psi);
  check_finite(out, "step_dynamics");
  return out;
}

VesselState rk4_step(const VesselState& state, const ThrustCommand& cmd,
                     const VesselModel& model, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("rk4_step: dt must be positive");
  const Vec6 z = state.as_vector();
  const Vec6 k1 = continuous_rhs(z, cmd.f, model);
  const Vec6 k2 = continuous_rhs(z + 0.5 * dt * k1, cmd.f, model);
  const Vec6 k3 = continuous_rhs(z + 0.5 * dt * k2, cmd.f, model);
  const Vec6 k4 = continuous_rhs(z + dt * k3, cmd.f, model);
  VesselState out = VesselState::from_vector(z + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  out.psi = wrap_angle(out.psi);
  check_finite(out, "rk4_step");
  return out;
}

std::array<Vec2, 3> disc_centers(const VesselState& state, const VesselModel& model) {
  const Mat2 rot = rot2(state.psi);
  std::array<Vec2, 3> centers;
  for (int i = 0; i < 3; ++i) centers[i] = state.position() + rot * model.disc_offsets[i];
  return centers;
}

void linearize_dynamics(const VesselState& state, const ThrustCommand& cmd,
                        const VesselModel& model, double tau,
                        Eigen::Matrix<double, 6, 6>& A, Eigen::Matrix<double, 6, 4>& B) {
  if (!(tau > 0.0)) throw std::invalid_argument("linearize_dynamics: tau must be positive");
  (void)cmd;  // dynamics are affine in thrust
  const double c = std::cos(state.psi), s = std::sin(state.psi);
  const double u = state.u, v = state.v, r = state.r;
  const double m11 = model.M_diag(0), m22 = model.M_diag(1), m33 = model.M_diag(2);
  const double d11 = model.D_diag(0), d22 = model.D_diag(1), d33 = model.D_diag(2);

  A.setIdentity();
  // Position rows: d(eta+)/d(psi) and d(eta+)/d(nu).
  A(0, 2) = tau * (-s * u - c * v);
  A(1, 2) = tau * (c * u - s * v);
  A(0, 3) = tau * c;
  A(0, 4) = -tau * s;
  A(1, 3) = tau * s;
  A(1, 4) = tau * c;
  A(2, 5) = tau;
  // Velocity rows: accelerations from -M^-1 (C(nu) nu + D nu), where
  // C(nu) nu = [-m22 v r, m11 u r, (m22 - m11) u v].
  A(3, 3) = 1.0 - tau * d11 / m11;
  A(3, 4) = tau * m22 * r / m11;
  A(3, 5) = tau * m22 * v / m11;
  A(4, 3) = -tau * m11 * r / m22;
  A(4, 4) = 1.0 - tau * d22 / m22;
  A(4, 5) = -tau * m11 * u / m22;
  A(5, 3) = tau * (m11 - m22) * v / m33;
  A(5, 4) = tau * (m11 - m22) * u / m33;
  A(5, 5) = 1.0 - tau * d33 / m33;

  B.setZero();
  B.bottomRows<3>() = tau * model.M_diag.cwiseInverse().asDiagonal() * model.B;
}

}  // namespace canal
