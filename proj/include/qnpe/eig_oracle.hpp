#pragma once

#include "qnpe/types.hpp"

namespace qnpe {

/// Result of an approximate separation query on a symmetric W.
///
/// `sign == 0` means W was certified inside the unit operator-norm ball.
/// Otherwise S = sign * u u^T separates W from that ball.
struct SepOutcome {
  double gamma = 0.0;
  int sign = 0;
  Vector u;
  int matvecs = 0;

  bool inside() const { return sign == 0; }
  Matrix separator() const { return static_cast<double>(sign) * u * u.transpose(); }
};

struct LanczosBudget {
  int n_iters = 0;
  double epsilon = 0.0;
};

// Iterations needed for the extreme Ritz values to be within a factor
// (1 + delta) of the spectrum edge with probability 1 - q.
LanczosBudget lanczos_budget(int dim, double delta, double q);

/// Randomized Lanczos with full reorthogonalization, run for
/// lanczos_budget(d, delta, q).n_iters steps (fewer on breakdown).
SepOutcome ext_evec_lanczos(const Matrix& w, double delta, double q, Rng& rng);

// Same, with an explicit iteration count.
SepOutcome lanczos_extremes(const Matrix& w, int n_iters, Rng& rng);

/// Deterministic reference from a full eigendecomposition. Throws EigFailure.
SepOutcome ext_evec_exact(const Matrix& w);

}  // namespace qnpe
