#pragma once

#include <optional>

#include "qnpe/config.hpp"
#include "qnpe/objective.hpp"
#include "qnpe/types.hpp"

namespace qnpe {

struct LineSearchOutcome {
  double eta = 0.0;
  Vector x_hat;
  Vector s_hat;  // x_hat - x as produced by the linear solve
  Vector grad_x_hat;
  int ls_steps = 0;
  int grad_evals = 0;
  long matvecs = 0;
  // Set only when the first trial step was rejected.
  std::optional<Vector> x_tilde;
  std::optional<Vector> s_tilde;
  std::optional<Vector> grad_x_tilde;

  bool backtracked() const { return x_tilde.has_value(); }
};

// Attempts allowed from trial step sigma before the search is declared stuck.
int backtrack_cap(double sigma, const SolverConfig& cfg, double l1);

/// Tries eta = sigma, beta*sigma, ... and returns the first step whose
/// approximate proximal point passes the model-error test
///   eta * ||grad(x_hat) - g - B (x_hat - x)|| <= alpha2 * ||x_hat - x||.
///
/// `cfg` must be validated. With alpha1 == 0 the linear system is solved
/// exactly by Cholesky; otherwise by conjugate residual.
LineSearchOutcome backtrack(const Vector& x, const Vector& g, const Matrix& b, double sigma,
                            const SolverConfig& cfg, const Objective& obj);

}  // namespace qnpe
