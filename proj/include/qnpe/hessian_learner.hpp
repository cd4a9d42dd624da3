#pragma once

#include <optional>

#include "qnpe/config.hpp"
#include "qnpe/eig_oracle.hpp"
#include "qnpe/types.hpp"

namespace qnpe {

// Affine map sending the band [mu, l1] onto [-1, 1]. Throws DegenerateCurvature at l1 == mu.
Matrix to_hat(const Matrix& b, double mu, double l1);
Matrix from_hat(const Matrix& b_hat, double mu, double l1);

/// ||y - B s||^2 / (2 ||s||^2). Throws ZeroDisplacement when s == 0.
double secant_loss(const Matrix& b, const Vector& s, const Vector& y);

/// Gradient of secant_loss with respect to B (a symmetric matrix).
Matrix secant_loss_gradient(const Matrix& b, const Vector& s, const Vector& y);

// Scales w back onto the Frobenius ball of the given radius when outside it.
Matrix project_frobenius_ball(const Matrix& w, double radius);

// Failure probability allotted to oracle call t >= 1, summing to at most p.
double round_confidence(double p, int t);

/// What one learner round consumed and produced.
struct RoundRecord {
  int t = 0;
  double loss = 0.0;
  Matrix w;        // W_t before the step
  Matrix b_hat;    // played action in the transformed space
  Matrix g;        // scaled loss gradient
  Matrix g_tilde;  // surrogate gradient actually stepped along
};

/// Online gradient descent over the Frobenius ball, made feasible for the
/// spectral band through the separation oracle.
///
/// One round is predict() followed by update(). Calling predict() again
/// before update() returns the cached matrix without another oracle query.
class HessianLearner {
 public:
  HessianLearner(const Matrix& b0, double mu, double l1, double rho, double delta, double p,
                 OracleMode mode, std::uint64_t seed);

  const Matrix& predict();
  RoundRecord update(const Vector& s, const Vector& y);

  int rounds() const { return t_; }
  const Matrix& w() const { return w_; }
  double cumulative_loss() const { return cumulative_loss_; }
  long total_matvecs() const { return total_matvecs_; }
  // Products spent by the most recent predict() that actually queried the oracle.
  int last_predict_matvecs() const { return last_matvecs_; }
  // True when l1 == mu: the band is a single point and B never moves.
  bool frozen() const { return frozen_; }
  // Oracle outcome behind the pending prediction; empty at round 0 or before predict().
  const std::optional<SepOutcome>& pending_outcome() const { return outcome_; }

 private:
  Matrix b0_;
  double mu_, l1_, rho_, delta_, p_;
  OracleMode mode_;
  Rng rng_;
  bool frozen_;
  Matrix w_;
  int t_ = 0;
  double cumulative_loss_ = 0.0;
  long total_matvecs_ = 0;
  int last_matvecs_ = 0;

  bool has_prediction_ = false;
  Matrix b_;
  Matrix b_hat_;
  std::optional<SepOutcome> outcome_;
};

}  // namespace qnpe
