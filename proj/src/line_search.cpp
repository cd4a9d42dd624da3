#include "qnpe/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qnpe/errors.hpp"
#include "qnpe/format.hpp"
#include "qnpe/linear_solver.hpp"

namespace qnpe {

int backtrack_cap(double sigma, const SolverConfig& cfg, double l1) {
  const double ratio = sigma * l1 / (cfg.alpha2 * cfg.beta);
  const double needed = ratio > 1.0 ? std::ceil(std::log(ratio) / std::log(1.0 / cfg.beta)) : 0.0;
  return static_cast<int>(std::max(needed, 1.0)) + cfg.max_backtracks_slack;
}

namespace {

struct Step {
  Vector s;
  long matvecs = 0;
};

Step solve_prox_system(const Matrix& b, double eta, const Vector& g, const SolverConfig& cfg,
                       const Objective& obj) {
  const Vector rhs = -eta * g;
  if (cfg.alpha1 == 0.0) {
    const auto n = b.rows();
    Eigen::LLT<Matrix> llt(Matrix::Identity(n, n) + eta * b);
    if (llt.info() != Eigen::Success)
      fail(ErrorKind::NotPositiveDefinite, "I + eta*B is not positive definite");
    return {llt.solve(rhs), 0};
  }
  const auto op = LinearOperator::shifted(b, eta);
  const int cap = default_cr_max_iters(obj.dim, eta, obj.mu, obj.l1, cfg.alpha1);
  CrResult cr = conjugate_residual(op, rhs, cfg.alpha1, cap);
  return {std::move(cr.s), cr.matvecs};
}

}  // namespace

LineSearchOutcome backtrack(const Vector& x, const Vector& g, const Matrix& b, double sigma,
                            const SolverConfig& cfg, const Objective& obj) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    fail(ErrorKind::InvalidArgument, "trial step must be positive and finite");
  const int cap = backtrack_cap(sigma, cfg, obj.l1);

  LineSearchOutcome out;
  double eta = sigma;
  Vector rejected;
  Vector rejected_step;
  Vector rejected_grad;
  for (int attempt = 1;; ++attempt) {
    Step step = solve_prox_system(b, eta, g, cfg, obj);
    out.matvecs += step.matvecs;
    Vector x_hat = x + step.s;
    Vector grad_hat = obj.grad(x_hat);
    ++out.grad_evals;
    out.ls_steps = attempt;

    const double err = (grad_hat - g - b * step.s).norm();
    const double s_norm = step.s.norm();
    if (!std::isfinite(err) || !std::isfinite(s_norm))
      fail(ErrorKind::NonFiniteIterate, "non-finite candidate in line search");
    if (eta * err <= cfg.alpha2 * s_norm) {
      out.eta = eta;
      out.x_hat = std::move(x_hat);
      out.s_hat = std::move(step.s);
      out.grad_x_hat = std::move(grad_hat);
      if (attempt > 1) {
        out.x_tilde = std::move(rejected);
        out.s_tilde = std::move(rejected_step);
        out.grad_x_tilde = std::move(rejected_grad);
      }
      return out;
    }
    if (attempt >= cap) {
      fail(ErrorKind::BacktrackCapExceeded,
           "no admissible step after " + std::to_string(attempt) + " attempts (last eta " +
               format_double(eta) + "); check mu and l1");
    }
    rejected = std::move(x_hat);
    rejected_step = std::move(step.s);
    rejected_grad = std::move(grad_hat);
    eta *= cfg.beta;
  }
}

}  // namespace qnpe
