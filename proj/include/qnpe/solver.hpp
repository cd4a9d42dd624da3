#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qnpe/config.hpp"
#include "qnpe/hessian_learner.hpp"
#include "qnpe/objective.hpp"
#include "qnpe/types.hpp"

namespace qnpe {

enum class Termination { GradTol, DistTol, MaxIters, Stalled };

std::string to_string(Termination t);

/// One iteration of a solver run. Counters are per iteration, not cumulative.
struct IterationRecord {
  int k = 0;
  double eta = 0.0;
  bool backtracked = false;
  int ls_steps = 0;
  int grad_evals = 0;  // includes the gradient at x_k
  long mv_linsolve = 0;
  long mv_extevec = 0;
  std::optional<double> loss;     // learner loss, backtracked iterations only
  std::optional<double> dist_sq;  // ||x_k - x*||^2 when x* is known
  double grad_norm = 0.0;         // ||grad f(x_k)||

  // Line-search geometry, kept for the post-hoc certificates.
  double step_sq = 0.0;                 // ||x_hat - x_k||^2
  std::optional<double> tilde_norm;     // ||x_tilde - x_k||
  std::optional<double> tilde_err;      // ||grad(x_tilde) - g_k - B_k (x_tilde - x_k)||
};

// Displacement and gradient difference fed to one learner round.
struct RoundSample {
  int k = 0;
  Vector s;
  Vector y;
};

struct SolverReport {
  std::string method = "qnpe";
  std::vector<IterationRecord> records;
  std::vector<RoundSample> rounds;
  Vector x0;
  Vector final_x;
  Matrix b0;
  SolverConfig config;  // validated
  Termination termination = Termination::MaxIters;
  double final_grad_norm = 0.0;
  std::optional<double> final_dist_sq;
  // The gradient at the final iterate is evaluated for the stopping test but
  // belongs to no recorded iteration.
  int terminal_grad_evals = 1;
  double wall_time = 0.0;

  long total_grad_evals() const;
  long total_ls_steps() const;
  long total_mv_linsolve() const;
  long total_mv_extevec() const;
  double sum_inv_eta_sq() const;
  // ||x_k - x*||^2 for k = 0..N (the last entry is the final iterate).
  std::vector<double> distances_sq() const;
};

/// x_{k+1} from the extragradient correction at x_hat, strongly convex form.
Vector extragradient_step(const Vector& x, const Vector& x_hat, const Vector& g_hat, double eta,
                          double mu);

// Called once per iteration after the Hessian approximation is chosen.
using IterationObserver = std::function<void(int k, const Matrix& b, const HessianLearner& learner)>;

/// Runs the quasi-Newton proximal extragradient method from x0 (default 0).
SolverReport solve(const Objective& obj, const SolverConfig& cfg,
                   const std::optional<Vector>& x0 = std::nullopt,
                   const IterationObserver& observer = {});

}  // namespace qnpe
