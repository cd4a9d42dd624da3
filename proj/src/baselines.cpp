#include "qnpe/baselines.hpp"

#include <chrono>
#include <cmath>

#include "qnpe/errors.hpp"

namespace qnpe {

Vector gd_step(const Vector& x, const Objective& obj) { return x - obj.grad(x) / obj.l1; }

BfgsState bfgs_init(const Vector& x0, const Objective& obj) {
  const auto n = x0.size();
  return {x0, obj.grad(x0), Matrix::Identity(n, n) / obj.l1};
}

bool bfgs_update(Matrix& h_inv, const Vector& s, const Vector& y) {
  const double sy = s.dot(y);
  if (!(sy > 1e-12 * s.norm() * y.norm())) return false;
  const double rho = 1.0 / sy;
  const Vector hy = h_inv * y;
  // (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded.
  h_inv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
           rho * (hy * s.transpose() + s * hy.transpose());
  h_inv = symmetrize(h_inv);
  return true;
}

BfgsStepInfo bfgs_step(BfgsState& state, const Objective& obj, const ArmijoParams& params) {
  if (!obj.has_value()) fail(ErrorKind::InvalidArgument, "BFGS needs function values");
  BfgsStepInfo info;
  const Vector dir = -(state.h_inv * state.g);
  const double slope = state.g.dot(dir);
  const double f0 = obj.value(state.x);
  ++info.value_evals;

  double t = 1.0;
  Vector x_new;
  for (int i = 1;; ++i) {
    x_new = state.x + t * dir;
    const double f = obj.value(x_new);
    ++info.value_evals;
    info.ls_steps = i;
    if (std::isfinite(f) && f <= f0 + params.c1 * t * slope) break;
    if (i >= params.max_steps)
      fail(ErrorKind::LineSearchFailure, "Armijo search failed to find sufficient decrease");
    t *= params.shrink;
  }
  Vector g_new = obj.grad(x_new);
  ++info.grad_evals;
  info.step = t;
  info.updated = bfgs_update(state.h_inv, x_new - state.x, g_new - state.g);
  state.x = std::move(x_new);
  state.g = std::move(g_new);
  return info;
}

namespace {

template <typename Step>
SolverReport run_baseline(const char* method, const Objective& obj, const SolverConfig& cfg,
                          const std::optional<Vector>& x0, Step&& step) {
  const auto started = std::chrono::steady_clock::now();
  if (obj.dim < 1) fail(ErrorKind::InvalidArgument, "objective dimension must be positive");
  SolverReport report;
  report.method = method;
  report.config = cfg;
  report.x0 = x0.value_or(Vector::Zero(obj.dim));
  if (report.x0.size() != obj.dim) fail(ErrorKind::InvalidArgument, "x0 has the wrong size");

  auto dist_sq = [&](const Vector& v) -> std::optional<double> {
    if (!obj.minimizer) return std::nullopt;
    return (v - *obj.minimizer).squaredNorm();
  };

  Vector x = report.x0;
  Vector g = obj.grad(x);
  for (int k = 0;; ++k) {
    const double g_norm = g.norm();
    const auto dk = dist_sq(x);
    if (!std::isfinite(g_norm)) fail(ErrorKind::NonFiniteIterate, "non-finite gradient");
    bool stop = true;
    if (g_norm <= cfg.grad_tol) {
      report.termination = Termination::GradTol;
    } else if (cfg.dist_tol && dk && *dk <= *cfg.dist_tol) {
      report.termination = Termination::DistTol;
    } else if (k >= cfg.max_iters) {
      report.termination = Termination::MaxIters;
    } else {
      stop = false;
    }
    if (stop) {
      report.final_x = x;
      report.final_grad_norm = g_norm;
      report.final_dist_sq = dk;
      break;
    }

    IterationRecord rec;
    rec.k = k;
    rec.grad_norm = g_norm;
    rec.dist_sq = dk;
    Vector next = step(x, g, rec);
    if (!next.allFinite()) fail(ErrorKind::NonFiniteIterate, "non-finite iterate");
    rec.step_sq = (next - x).squaredNorm();
    report.records.push_back(rec);
    const bool stalled = next == x;
    x = std::move(next);
    g = obj.grad(x);
    if (stalled) {
      report.termination = Termination::Stalled;
      report.final_x = x;
      report.final_grad_norm = g.norm();
      report.final_dist_sq = dist_sq(x);
      break;
    }
  }
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace

SolverReport run_gd(const Objective& obj, const SolverConfig& cfg, const std::optional<Vector>& x0) {
  return run_baseline("gd", obj, cfg, x0, [&obj](const Vector& x, const Vector& g, IterationRecord& rec) {
    rec.eta = 1.0 / obj.l1;
    rec.ls_steps = 1;
    rec.grad_evals = 1;
    return Vector(x - rec.eta * g);
  });
}

SolverReport run_bfgs(const Objective& obj, const SolverConfig& cfg,
                      const std::optional<Vector>& x0) {
  std::optional<BfgsState> state;
  return run_baseline("bfgs", obj, cfg, x0,
                      [&](const Vector& x, const Vector& g, IterationRecord& rec) {
                        if (!state) {
                          const auto n = x.size();
                          state = BfgsState{x, g, Matrix::Identity(n, n) / obj.l1};
                        }
                        const auto info = bfgs_step(*state, obj);
                        rec.eta = info.step;
                        rec.ls_steps = info.ls_steps;
                        rec.grad_evals = 1;
                        return state->x;
                      });
}

}  // namespace qnpe
