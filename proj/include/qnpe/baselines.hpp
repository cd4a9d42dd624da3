#pragma once

#include <optional>

#include "qnpe/objective.hpp"
#include "qnpe/solver.hpp"
#include "qnpe/types.hpp"

namespace qnpe {

// x - grad f(x) / l1.
Vector gd_step(const Vector& x, const Objective& obj);

struct BfgsState {
  Vector x;
  Vector g;      // gradient at x
  Matrix h_inv;  // inverse Hessian approximation
};

struct ArmijoParams {
  double c1 = 1e-4;
  double shrink = 0.5;
  int max_steps = 60;
};

struct BfgsStepInfo {
  double step = 0.0;
  int ls_steps = 0;
  int grad_evals = 0;
  int value_evals = 0;
  bool updated = false;  // false when the curvature guard skipped the update
};

BfgsState bfgs_init(const Vector& x0, const Objective& obj);

/// One inverse-form BFGS iteration with Armijo backtracking from unit step.
/// Needs obj.value. Throws LineSearchFailure after params.max_steps halvings.
BfgsStepInfo bfgs_step(BfgsState& state, const Objective& obj, const ArmijoParams& params = {});

// Inverse BFGS update; returns false (leaving h_inv unchanged) when
// <y, s> <= 1e-12 ||s|| ||y||.
bool bfgs_update(Matrix& h_inv, const Vector& s, const Vector& y);

// Run loops sharing the QNPE report schema and termination rules
// (grad_tol, dist_tol, max_iters from the config).
SolverReport run_gd(const Objective& obj, const SolverConfig& cfg,
                    const std::optional<Vector>& x0 = std::nullopt);
SolverReport run_bfgs(const Objective& obj, const SolverConfig& cfg,
                      const std::optional<Vector>& x0 = std::nullopt);

}  // namespace qnpe
