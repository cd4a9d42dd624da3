#include "qnpe/solver.hpp"

#include <chrono>
#include <cmath>

#include "qnpe/errors.hpp"
#include "qnpe/line_search.hpp"

namespace qnpe {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::GradTol:
      return "grad_tol";
    case Termination::DistTol:
      return "dist_tol";
    case Termination::MaxIters:
      return "max_iters";
    case Termination::Stalled:
      return "stalled";
  }
  return "unknown";
}

long SolverReport::total_grad_evals() const {
  long n = 0;
  for (const auto& r : records) n += r.grad_evals;
  return n;
}

long SolverReport::total_ls_steps() const {
  long n = 0;
  for (const auto& r : records) n += r.ls_steps;
  return n;
}

long SolverReport::total_mv_linsolve() const {
  long n = 0;
  for (const auto& r : records) n += r.mv_linsolve;
  return n;
}

long SolverReport::total_mv_extevec() const {
  long n = 0;
  for (const auto& r : records) n += r.mv_extevec;
  return n;
}

double SolverReport::sum_inv_eta_sq() const {
  double sum = 0.0;
  for (const auto& r : records) sum += 1.0 / (r.eta * r.eta);
  return sum;
}

std::vector<double> SolverReport::distances_sq() const {
  std::vector<double> out;
  if (!final_dist_sq) return out;
  for (const auto& r : records) {
    if (!r.dist_sq) return {};
    out.push_back(*r.dist_sq);
  }
  out.push_back(*final_dist_sq);
  return out;
}

Vector extragradient_step(const Vector& x, const Vector& x_hat, const Vector& g_hat, double eta,
                          double mu) {
  const double denom = 1.0 + 2.0 * eta * mu;
  return (x - eta * g_hat) / denom + (2.0 * eta * mu / denom) * x_hat;
}

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace

SolverReport solve(const Objective& obj, const SolverConfig& cfg, const std::optional<Vector>& x0,
                   const IterationObserver& observer) {
  const auto started = std::chrono::steady_clock::now();
  SolverReport report;
  report.config = validate_config(cfg, obj);
  const SolverConfig& c = report.config;
  report.b0 = resolve_b0(c, obj);
  report.x0 = x0.value_or(Vector::Zero(obj.dim));
  if (report.x0.size() != obj.dim) fail(ErrorKind::InvalidArgument, "x0 has the wrong size");

  HessianLearner learner(report.b0, obj.mu, obj.l1, c.rho, *c.delta, c.p, c.oracle_mode, c.seed);
  Vector x = report.x0;
  double sigma = *c.sigma0;

  auto dist_sq = [&](const Vector& v) -> std::optional<double> {
    if (!obj.minimizer) return std::nullopt;
    return (v - *obj.minimizer).squaredNorm();
  };

  for (int k = 0;; ++k) {
    const Vector g = obj.grad(x);
    const double g_norm = g.norm();
    const auto dk = dist_sq(x);
    if (!std::isfinite(g_norm)) fail(ErrorKind::NonFiniteIterate, "non-finite gradient");

    bool stop = true;
    if (g_norm <= c.grad_tol) {
      report.termination = Termination::GradTol;
    } else if (c.dist_tol && dk && *dk <= *c.dist_tol) {
      report.termination = Termination::DistTol;
    } else if (k >= c.max_iters) {
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

    const Matrix& b = learner.predict();
    if (observer) observer(k, b, learner);

    IterationRecord rec;
    rec.k = k;
    rec.grad_norm = g_norm;
    rec.dist_sq = dk;
    rec.mv_extevec = learner.last_predict_matvecs();

    auto ls = backtrack(x, g, b, sigma, c, obj);
    rec.eta = ls.eta;
    rec.ls_steps = ls.ls_steps;
    rec.grad_evals = 1 + ls.grad_evals;
    rec.mv_linsolve = ls.matvecs;
    rec.backtracked = ls.backtracked();
    rec.step_sq = ls.s_hat.squaredNorm();

    if (ls.backtracked()) {
      Vector s = *ls.s_tilde;
      Vector y = *ls.grad_x_tilde - g;
      rec.tilde_norm = s.norm();
      rec.tilde_err = (y - b * s).norm();
      const auto round = learner.update(s, y);
      rec.loss = round.loss;
      report.rounds.push_back({k, std::move(s), std::move(y)});
    }

    Vector next = extragradient_step(x, ls.x_hat, ls.grad_x_hat, ls.eta, obj.mu);
    if (!all_finite(next)) fail(ErrorKind::NonFiniteIterate, "non-finite iterate");
    report.records.push_back(std::move(rec));

    sigma = ls.eta / c.beta;
    if (!std::isfinite(sigma) || next == x) {
      x = std::move(next);
      const Vector g_last = obj.grad(x);
      report.termination = Termination::Stalled;
      report.final_x = x;
      report.final_grad_norm = g_last.norm();
      report.final_dist_sq = dist_sq(x);
      break;
    }
    x = std::move(next);
  }

  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace qnpe
