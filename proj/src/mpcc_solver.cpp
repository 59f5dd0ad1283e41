#include "canal/mpcc_solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace canal {

namespace {

using Vec7 = Eigen::Matrix<double, 7, 1>;  // augmented stage coords (z, theta)

// Penalty buffers: constraints are penalized with a little slack so that a
// penalty-satisfying plan passes the strict feasibility re-check.
constexpr double kStaticMarginFraction = 0.1;  // of the safety margin delta
constexpr double kDynamicMargin = 0.05;        // on the ellipse value
constexpr double kSurgePenaltyWeight = 50.0;

struct GnTerm {
  Vec7 jz = Vec7::Zero();
  Vec4 ju = Vec4::Zero();
  double w = 0.0;
};

struct StagePieces {
  double objective = 0.0;
  double penalty = 0.0;
  Vec7 grad_zeta = Vec7::Zero();  // objective + penalty
  Vec4 grad_u = Vec4::Zero();
  double max_residual = -std::numeric_limits<double>::infinity();
  bool hard_feasible = true;
};

struct WeightedRows {
  // Q = sum_i w_i row_i row_i^T with w_i >= 0 (eigendecomposition).
  std::vector<std::pair<double, Eigen::VectorXd>> rows;
};

WeightedRows decompose_psd(const Eigen::MatrixXd& Q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  WeightedRows out;
  for (int i = 0; i < Q.rows(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > 1e-12) out.rows.emplace_back(lam, es.eigenvectors().col(i));
  }
  return out;
}

struct SolveCache {
  std::vector<std::vector<ObstacleAtStage>> obs_at_stage;   // N+1
  std::vector<std::pair<double, double>> inflated;          // alpha, beta per obstacle
  WeightedRows q_eps_rows;
  WeightedRows q_u_rows;
};

SolveCache build_cache(const PlanProblem& problem, const PlannerConfig& config) {
  SolveCache cache;
  cache.obs_at_stage.resize(config.N + 1);
  const double inflate = problem.model->r_disc + config.delta;
  for (const auto& obs : problem.obstacles) {
    cache.inflated.emplace_back(obs.a + inflate, obs.b + inflate);
  }
  for (int k = 0; k <= config.N; ++k) {
    auto& list = cache.obs_at_stage[k];
    list.reserve(problem.obstacles.size());
    for (const auto& obs : problem.obstacles) {
      const int stage = std::min<int>(k, static_cast<int>(obs.prediction.stages.size()) - 1);
      const ObstacleState& s = obs.prediction.stages[stage];
      list.push_back(ObstacleAtStage{s.position, s.heading, obs.a, obs.b, obs.priority});
    }
  }
  cache.q_eps_rows = decompose_psd(config.Q_eps);
  cache.q_u_rows = decompose_psd(config.Q_u);
  return cache;
}

// Cost, gradient and Gauss-Newton rows of one stage. Penalties are skipped
// for stage 0 (fixed by z0) and controlled by pen_weight elsewhere.
StagePieces eval_stage(const VesselState& z, const Vec4& u, double theta,
                       const PlanProblem& problem, const PlannerConfig& config,
                       const SolveCache& cache, int stage_k, bool terminal, bool with_penalty,
                       double pen_weight, std::vector<GnTerm>* gn) {
  StagePieces out;
  const PathSample ps = problem.path->sample(theta);
  const Vec2 pos(z.x, z.y);
  const Vec2 d = pos - ps.point;
  const double contour = cross2(ps.tangent, d);
  const double lag = ps.tangent.dot(d);
  const bool theta_clamped = theta < 0.0 || theta > problem.path->total_length();

  // Tracking: e^T Q_eps e on the linearized path at theta.
  Eigen::Vector2d e(contour, lag);
  Eigen::Matrix<double, 2, 7> Me = Eigen::Matrix<double, 2, 7>::Zero();
  Me(0, 0) = -ps.tangent.y();
  Me(0, 1) = ps.tangent.x();
  Me(1, 0) = ps.tangent.x();
  Me(1, 1) = ps.tangent.y();
  if (!theta_clamped) {
    Me(0, 6) = -ps.curvature * lag;
    Me(1, 6) = ps.curvature * contour - 1.0;
  }
  out.objective += e.dot(config.Q_eps * e);
  out.grad_zeta += 2.0 * Me.transpose() * (config.Q_eps * e);
  if (gn) {
    for (const auto& [lam, vec] : cache.q_eps_rows.rows) {
      GnTerm t;
      t.jz = Me.transpose() * vec;
      t.w = 2.0 * lam;
      gn->push_back(t);
    }
  }

  if (!terminal) {
    // Speed: Q_v (u_ref - surge)^2.
    const double du = z.u - config.u_ref;
    out.objective += config.Q_v * du * du;
    out.grad_zeta(3) += 2.0 * config.Q_v * du;
    if (gn && config.Q_v > 1e-12) {
      GnTerm t;
      t.jz(3) = 1.0;
      t.w = 2.0 * config.Q_v;
      gn->push_back(t);
    }
    // Input: u^T Q_u u.
    out.objective += u.dot(config.Q_u * u);
    out.grad_u += 2.0 * config.Q_u * u;
    if (gn) {
      for (const auto& [lam, vec] : cache.q_u_rows.rows) {
        GnTerm t;
        t.ju = vec;
        t.w = 2.0 * lam;
        gn->push_back(t);
      }
    }
  }

  // Regulation Gaussians at the vessel center.
  const bool centered = config.mode == PlannerMode::lmpcc;
  const auto terms =
      regulation_terms(pos, cache.obs_at_stage[stage_k], config.regulation,
                       problem.model->r_disc, centered);
  for (const auto& term : terms) {
    out.objective += term.value;
    out.grad_zeta(0) += term.gradient.x();
    out.grad_zeta(1) += term.gradient.y();
    if (gn && term.value > 1e-12) {
      GnTerm t;
      t.jz(0) = term.gradient.x() / std::sqrt(term.value);
      t.jz(1) = term.gradient.y() / std::sqrt(term.value);
      t.w = 1.0;
      gn->push_back(t);
    }
  }

  if (!with_penalty) return out;

  // Constraint penalties at the three footprint discs.
  const Mat2 rot = rot2(z.psi);
  Mat2 drot;
  drot << -std::sin(z.psi), -std::cos(z.psi), std::cos(z.psi), -std::sin(z.psi);
  const double static_margin = kStaticMarginFraction * config.delta;
  for (int j = 0; j < 3; ++j) {
    const Vec2 off = problem.model->disc_offsets[j];
    const Vec2 pj = pos + rot * off;
    const Vec2 dpj_dpsi = drot * off;
    for (const auto& c : problem.static_constraints[j]) {
      const double resid = static_constraint_residual(c, pj, problem.model->r_disc, config.delta);
      out.max_residual = std::max(out.max_residual, resid);
      if (resid > 0.0) out.hard_feasible = false;
      const double pen_r = resid + static_margin;
      if (pen_r > 0.0) {
        out.penalty += pen_weight * pen_r * pen_r;
        Vec7 row = Vec7::Zero();
        row(0) = c.A.x();
        row(1) = c.A.y();
        row(2) = c.A.dot(dpj_dpsi);
        out.grad_zeta += 2.0 * pen_weight * pen_r * row;
        if (gn) gn->push_back(GnTerm{row, Vec4::Zero(), 2.0 * pen_weight});
      }
    }
    for (size_t i = 0; i < cache.obs_at_stage[stage_k].size(); ++i) {
      const auto& obs = cache.obs_at_stage[stage_k][i];
      const auto [alpha, beta] = cache.inflated[i];
      const Vec2 delta_p = pj - obs.position;
      const Mat2 rneg = rot2(-obs.heading);
      const Vec2 local = rneg * delta_p;
      const double value =
          local.x() * local.x() / (alpha * alpha) + local.y() * local.y() / (beta * beta);
      out.max_residual = std::max(out.max_residual, 1.0 - value);
      if (value <= 1.0) out.hard_feasible = false;
      const double rr = 1.0 + kDynamicMargin - value;
      if (rr > 0.0) {
        out.penalty += pen_weight * rr * rr;
        const Vec2 dv_dlocal(2.0 * local.x() / (alpha * alpha), 2.0 * local.y() / (beta * beta));
        const Vec2 dv_dp = rneg.transpose() * dv_dlocal;
        Vec7 row = Vec7::Zero();
        row(0) = dv_dp.x();
        row(1) = dv_dp.y();
        row(2) = dv_dp.dot(dpj_dpsi);
        out.grad_zeta -= 2.0 * pen_weight * rr * row;
        if (gn) gn->push_back(GnTerm{row, Vec4::Zero(), 2.0 * pen_weight});
      }
    }
  }

  // Soft surge bound (the only populated state bound).
  const double over = std::abs(z.u) - config.u_max;
  if (over > 0.0) {
    const double sgn = z.u >= 0.0 ? 1.0 : -1.0;
    out.penalty += kSurgePenaltyWeight * over * over;
    out.grad_zeta(3) += 2.0 * kSurgePenaltyWeight * over * sgn;
    if (gn) {
      GnTerm t;
      t.jz(3) = sgn;
      t.w = 2.0 * kSurgePenaltyWeight;
      gn->push_back(t);
    }
  }
  return out;
}

struct Rollout {
  std::vector<VesselState> states;  // N+1
  std::vector<double> thetas;       // N+1
};

Rollout roll_out(const Eigen::VectorXd& U, const PlanProblem& problem,
                 const PlannerConfig& config) {
  Rollout r;
  r.states.resize(config.N + 1);
  r.thetas.resize(config.N + 1);
  r.states[0] = problem.z0;
  r.states[0].psi = wrap_angle(r.states[0].psi);
  r.thetas[0] = problem.theta0;
  for (int k = 0; k < config.N; ++k) {
    ThrustCommand cmd;
    cmd.f = U.segment<4>(4 * k);
    r.states[k + 1] = step_dynamics(r.states[k], cmd, *problem.model, config.tau);
    r.thetas[k + 1] = r.thetas[k] + config.tau * r.states[k].u;
  }
  return r;
}

struct Evaluation {
  Rollout rollout;
  double objective = 0.0;
  double penalty = 0.0;
  double merit = 0.0;
  bool hard_feasible = true;
  std::vector<double> stage_max_residual;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

Evaluation evaluate(const Eigen::VectorXd& U, const PlanProblem& problem,
                    const PlannerConfig& config, const SolveCache& cache, double pen_weight,
                    bool with_derivatives) {
  const int N = config.N;
  const int dim = 4 * N;
  Evaluation ev;
  ev.rollout = roll_out(U, problem, config);
  ev.stage_max_residual.assign(N + 1, -std::numeric_limits<double>::infinity());

  // Forward sensitivity of (z_k, theta_k) w.r.t. the stacked inputs.
  Eigen::MatrixXd S;
  if (with_derivatives) {
    S = Eigen::MatrixXd::Zero(7, dim);
    ev.grad = Eigen::VectorXd::Zero(dim);
    ev.hess = Eigen::MatrixXd::Zero(dim, dim);
  }
  std::vector<GnTerm> gn;
  for (int k = 0; k <= N; ++k) {
    const bool terminal = k == N;
    const Vec4 u = terminal ? Vec4::Zero() : Vec4(U.segment<4>(4 * k));
    gn.clear();
    const StagePieces pieces =
        eval_stage(ev.rollout.states[k], u, ev.rollout.thetas[k], problem, config, cache, k,
                   terminal, /*with_penalty=*/k > 0, pen_weight,
                   with_derivatives ? &gn : nullptr);
    ev.objective += pieces.objective;
    ev.penalty += pieces.penalty;
    ev.stage_max_residual[k] = pieces.max_residual;
    if (k > 0 && !pieces.hard_feasible) ev.hard_feasible = false;

    if (with_derivatives) {
      ev.grad.noalias() += S.transpose() * pieces.grad_zeta;
      if (!terminal) ev.grad.segment<4>(4 * k) += pieces.grad_u;
      for (const auto& t : gn) {
        Eigen::VectorXd row = S.transpose() * t.jz;
        if (!terminal && t.ju.squaredNorm() > 0.0) row.segment<4>(4 * k) += t.ju;
        ev.hess.noalias() += t.w * row * row.transpose();
      }
      if (!terminal) {
        // Advance the sensitivities through the stage map.
        Eigen::Matrix<double, 6, 6> A;
        Eigen::Matrix<double, 6, 4> B;
        ThrustCommand cmd;
        cmd.f = u;
        linearize_dynamics(ev.rollout.states[k], cmd, *problem.model, config.tau, A, B);
        Eigen::Matrix<double, 7, 7> Aaug = Eigen::Matrix<double, 7, 7>::Zero();
        Aaug.topLeftCorner<6, 6>() = A;
        Aaug(6, 3) = config.tau;  // theta_{k+1} = theta_k + tau * surge_k
        Aaug(6, 6) = 1.0;
        S = (Aaug * S).eval();
        S.block<6, 4>(0, 4 * k) += B;
      }
    }
  }
  ev.merit = ev.objective + ev.penalty;
  return ev;
}

// Box-constrained QP via projected Newton with active-set freeing.
Eigen::VectorXd qp_solve_box(const Eigen::MatrixXd& H, const Eigen::VectorXd& g,
                             const Eigen::VectorXd& lb, const Eigen::VectorXd& ub, int max_iters) {
  const int n = static_cast<int>(g.size());
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  auto qp_value = [&](const Eigen::VectorXd& x) { return 0.5 * x.dot(H * x) + g.dot(x); };
  double value = 0.0;
  for (int iter = 0; iter < max_iters; ++iter) {
    const Eigen::VectorXd grad = H * d + g;
    std::vector<int> free;
    free.reserve(n);
    for (int i = 0; i < n; ++i) {
      const bool at_lo = d(i) <= lb(i) + 1e-12 && grad(i) > 0.0;
      const bool at_hi = d(i) >= ub(i) - 1e-12 && grad(i) < 0.0;
      if (!at_lo && !at_hi) free.push_back(i);
    }
    if (free.empty()) break;
    Eigen::MatrixXd Hff(free.size(), free.size());
    Eigen::VectorXd gf(free.size());
    for (size_t a = 0; a < free.size(); ++a) {
      gf(a) = grad(free[a]);
      for (size_t b = 0; b < free.size(); ++b) Hff(a, b) = H(free[a], free[b]);
    }
    Hff.diagonal().array() += 1e-9;
    Eigen::VectorXd pf = Hff.ldlt().solve(-gf);
    if (!pf.allFinite()) pf = -gf;  // fall back to steepest descent
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    for (size_t a = 0; a < free.size(); ++a) p(free[a]) = pf(a);

    bool accepted = false;
    double t = 1.0;
    for (int ls = 0; ls < 12; ++ls) {
      Eigen::VectorXd trial = (d + t * p).cwiseMax(lb).cwiseMin(ub);
      if (qp_value(trial) < value - 1e-14) {
        const double moved = (trial - d).lpNorm<Eigen::Infinity>();
        d = trial;
        value = qp_value(d);
        accepted = true;
        if (moved < 1e-12) iter = max_iters;  // converged
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return d;
}

PlanResult make_result(const Evaluation& ev, const Eigen::VectorXd& U, SolveStatus status,
                       const PlannerConfig& config) {
  PlanResult out;
  out.states = ev.rollout.states;
  out.progress = ev.rollout.thetas;
  out.inputs.resize(config.N);
  for (int k = 0; k < config.N; ++k) out.inputs[k] = U.segment<4>(4 * k);
  out.status = status;
  out.objective = ev.objective;
  out.stage_max_residual = ev.stage_max_residual;
  return out;
}

}  // namespace

StageCostEval stage_cost(const VesselState& z, const Vec4& u, double theta,
                         const PlanProblem& problem, const PlannerConfig& config, int stage_k,
                         bool terminal) {
  const SolveCache cache = build_cache(problem, config);
  const StagePieces pieces = eval_stage(z, u, theta, problem, config, cache, stage_k, terminal,
                                        /*with_penalty=*/false, 0.0, nullptr);
  StageCostEval out;
  out.cost = pieces.objective;
  out.grad_z = pieces.grad_zeta.head<6>();
  out.grad_u = pieces.grad_u;
  out.grad_theta = pieces.grad_zeta(6);
  return out;
}

PlanResult solve(const PlanProblem& problem, const PlanResult* warm_start,
                 const PlannerConfig& config) {
  config.validate();
  if (problem.path == nullptr || problem.model == nullptr)
    throw std::invalid_argument("solve: problem must reference a path and a model");
  if (!problem.z0.finite()) throw std::invalid_argument("solve: non-finite initial state");

  const int N = config.N;
  const int dim = 4 * N;
  const double f_max = problem.model->f_max;
  const SolveCache cache = build_cache(problem, config);

  Eigen::VectorXd U = Eigen::VectorXd::Zero(dim);
  if (warm_start != nullptr && static_cast<int>(warm_start->inputs.size()) == N) {
    for (int k = 0; k < N; ++k) U.segment<4>(4 * k) = warm_start->inputs[k];
    U = U.cwiseMax(-f_max).cwiseMin(f_max);
  }

  double pen_weight = config.solver.constraint_penalty_weight;
  int escalations = 0;
  double radius = config.solver.trust_region;
  Evaluation ev = evaluate(U, problem, config, cache, pen_weight, true);

  for (int iter = 0; iter < config.solver.max_sqp_iters; ++iter) {
    const Eigen::VectorXd projected =
        (U - ev.grad).cwiseMax(-f_max).cwiseMin(f_max);
    const double stationarity = (projected - U).lpNorm<Eigen::Infinity>();
    if (stationarity < config.solver.convergence_tol) {
      if (ev.hard_feasible) return make_result(ev, U, SolveStatus::Converged, config);
      if (escalations < config.solver.penalty_escalations) {
        pen_weight *= 2.0;
        ++escalations;
        radius = config.solver.trust_region;
        ev = evaluate(U, problem, config, cache, pen_weight, true);
        continue;
      }
      return make_result(ev, U, SolveStatus::Infeasible, config);
    }

    Eigen::MatrixXd H = ev.hess;
    H.diagonal().array() += 1e-8;
    const Eigen::VectorXd lb = (-f_max - U.array()).max(-radius).matrix();
    const Eigen::VectorXd ub = (f_max - U.array()).min(radius).matrix();
    const Eigen::VectorXd d = qp_solve_box(H, ev.grad, lb, ub, config.solver.max_qp_iters);
    const double predicted = -(ev.grad.dot(d) + 0.5 * d.dot(H * d));

    bool stalled = false;
    if (predicted <= 1e-14 || d.lpNorm<Eigen::Infinity>() < 1e-12) {
      stalled = true;
    } else {
      Evaluation trial = evaluate(U + d, problem, config, cache, pen_weight, false);
      if (trial.merit < ev.merit - 1e-12) {
        const double rho = (ev.merit - trial.merit) / predicted;
        U += d;
        ev = evaluate(U, problem, config, cache, pen_weight, true);
        if (rho > 0.7 && d.lpNorm<Eigen::Infinity>() > 0.9 * radius)
          radius = std::min(radius * 2.0, 4.0 * config.solver.trust_region);
      } else {
        radius *= 0.25;
        if (radius < config.solver.trust_region_min) stalled = true;
      }
    }
    if (stalled) {
      if (ev.hard_feasible) return make_result(ev, U, SolveStatus::MaxIters, config);
      if (escalations < config.solver.penalty_escalations) {
        pen_weight *= 2.0;
        ++escalations;
        radius = config.solver.trust_region;
        ev = evaluate(U, problem, config, cache, pen_weight, true);
        continue;
      }
      return make_result(ev, U, SolveStatus::Infeasible, config);
    }
  }
  return make_result(ev, U,
                     ev.hard_feasible ? SolveStatus::MaxIters : SolveStatus::Infeasible, config);
}

ThrustCommand fallback_command() { return ThrustCommand::zero(); }

PlanResult shift_warm_start(const PlanResult& previous, const VesselModel& model, double tau) {
  const size_t n = previous.inputs.size();
  if (n < 2 || previous.states.size() != n + 1 || previous.progress.size() != n + 1)
    throw std::invalid_argument("shift_warm_start: need at least 2 stages");
  PlanResult out;
  out.status = previous.status;
  out.inputs.assign(previous.inputs.begin() + 1, previous.inputs.end());
  out.inputs.push_back(previous.inputs.back());
  out.states.assign(previous.states.begin() + 1, previous.states.end());
  ThrustCommand cmd;
  cmd.f = out.inputs.back();
  out.states.push_back(step_dynamics(out.states.back(), cmd, model, tau));
  out.progress.assign(previous.progress.begin() + 1, previous.progress.end());
  out.progress.push_back(out.progress.back() + tau * previous.states.back().u);
  out.objective = previous.objective;
  out.stage_max_residual.assign(out.states.size(), 0.0);
  return out;
}

PlannerMode planner_mode_from_string(const std::string& s) {
  if (s == "rampcc") return PlannerMode::rampcc;
  if (s == "lmpcc") return PlannerMode::lmpcc;
  throw std::invalid_argument("unknown planner mode: " + s);
}

std::string to_string(PlannerMode m) {
  return m == PlannerMode::rampcc ? "rampcc" : "lmpcc";
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "infeasible";
}

void PlannerConfig::validate() const {
  if (N < 1) throw std::invalid_argument("planner config: N must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("planner config: tau must be positive");
  if (u_ref < 0.0) throw std::invalid_argument("planner config: u_ref must be >= 0");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e_eps(Q_eps);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e_u(Q_u);
  if (e_eps.eigenvalues().minCoeff() < -1e-9 || e_u.eigenvalues().minCoeff() < -1e-9 ||
      Q_v < 0.0)
    throw std::invalid_argument("planner config: weights must be positive semi-definite");
}

namespace {

void apply_regulation_json(const nlohmann::json& j, RegulationParams& p) {
  if (j.contains("c")) p.c = j["c"].get<double>();
  if (j.contains("d")) p.d = j["d"].get<double>();
  if (j.contains("g")) p.g = j["g"].get<double>();
  if (j.contains("h")) p.h = j["h"].get<double>();
  if (j.contains("Q_HO")) p.Q_HO = j["Q_HO"].get<double>();
  if (j.contains("e")) p.e = j["e"].get<double>();
  if (j.contains("f")) p.f = j["f"].get<double>();
  if (j.contains("Q_RoW")) p.Q_RoW = j["Q_RoW"].get<double>();
  if (j.contains("d_sign")) p.d_sign = j["d_sign"].get<double>();
  if (j.contains("theta_ho_deg")) p.theta_ho = j["theta_ho_deg"].get<double>() * M_PI / 180.0;
  if (j.contains("theta_ot_deg")) p.theta_ot = j["theta_ot_deg"].get<double>() * M_PI / 180.0;
}

}  // namespace

void PlannerConfig::apply_json(const std::string& json_text) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  if (j.contains("N")) N = j["N"].get<int>();
  if (j.contains("tau")) tau = j["tau"].get<double>();
  if (j.contains("Q_eps")) {
    const auto& q = j["Q_eps"];
    if (q.size() == 2) {
      Q_eps.setZero();
      Q_eps(0, 0) = q.at(0).get<double>();
      Q_eps(1, 1) = q.at(1).get<double>();
    } else if (q.size() == 4) {
      for (int i = 0; i < 4; ++i) Q_eps(i / 2, i % 2) = q.at(i).get<double>();
    } else {
      throw std::invalid_argument("planner config: Q_eps must have 2 (diag) or 4 entries");
    }
  }
  if (j.contains("Q_v")) Q_v = j["Q_v"].get<double>();
  if (j.contains("u_ref")) u_ref = j["u_ref"].get<double>();
  if (j.contains("Q_u")) {
    const auto& q = j["Q_u"];
    if (q.size() == 4) {
      Q_u.setZero();
      for (int i = 0; i < 4; ++i) Q_u(i, i) = q.at(i).get<double>();
    } else if (q.size() == 16) {
      for (int i = 0; i < 16; ++i) Q_u(i / 4, i % 4) = q.at(i).get<double>();
    } else {
      throw std::invalid_argument("planner config: Q_u must have 4 (diag) or 16 entries");
    }
  }
  if (j.contains("delta")) delta = j["delta"].get<double>();
  if (j.contains("u_max")) u_max = j["u_max"].get<double>();
  if (j.contains("mode")) mode = planner_mode_from_string(j["mode"].get<std::string>());
  if (j.contains("regulation")) apply_regulation_json(j["regulation"], regulation);
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    if (s.contains("max_sqp_iters")) solver.max_sqp_iters = s["max_sqp_iters"].get<int>();
    if (s.contains("max_qp_iters")) solver.max_qp_iters = s["max_qp_iters"].get<int>();
    if (s.contains("constraint_penalty_weight"))
      solver.constraint_penalty_weight = s["constraint_penalty_weight"].get<double>();
    if (s.contains("convergence_tol")) solver.convergence_tol = s["convergence_tol"].get<double>();
    if (s.contains("trust_region")) solver.trust_region = s["trust_region"].get<double>();
    if (s.contains("penalty_escalations"))
      solver.penalty_escalations = s["penalty_escalations"].get<int>();
  }
  validate();
}

PlannerConfig PlannerConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("planner config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  PlannerConfig cfg;
  cfg.apply_json(ss.str());
  return cfg;
}

}  // namespace canal
