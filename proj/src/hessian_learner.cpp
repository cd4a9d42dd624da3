#include "qnpe/hessian_learner.hpp"

#include <algorithm>
#include <cmath>

#include "qnpe/errors.hpp"

namespace qnpe {

Matrix to_hat(const Matrix& b, double mu, double l1) {
  if (!(l1 > mu)) fail(ErrorKind::DegenerateCurvature, "spectral transform needs l1 > mu");
  const auto n = b.rows();
  return (2.0 / (l1 - mu)) * (b - 0.5 * (l1 + mu) * Matrix::Identity(n, n));
}

Matrix from_hat(const Matrix& b_hat, double mu, double l1) {
  if (!(l1 > mu)) fail(ErrorKind::DegenerateCurvature, "spectral transform needs l1 > mu");
  const auto n = b_hat.rows();
  return 0.5 * (l1 - mu) * b_hat + 0.5 * (l1 + mu) * Matrix::Identity(n, n);
}

namespace {

double checked_sq_norm(const Vector& s) {
  const double n2 = s.squaredNorm();
  if (!(n2 > 0.0)) fail(ErrorKind::ZeroDisplacement, "loss sample has s = 0");
  return n2;
}

}  // namespace

double secant_loss(const Matrix& b, const Vector& s, const Vector& y) {
  const double s2 = checked_sq_norm(s);
  return (y - b * s).squaredNorm() / (2.0 * s2);
}

Matrix secant_loss_gradient(const Matrix& b, const Vector& s, const Vector& y) {
  const double s2 = checked_sq_norm(s);
  const Vector r = y - b * s;
  return (-(s * r.transpose()) - r * s.transpose()) / (2.0 * s2);
}

Matrix project_frobenius_ball(const Matrix& w, double radius) {
  const double norm = w.norm();
  if (norm <= radius) return w;
  return w * (radius / norm);
}

double round_confidence(double p, int t) {
  const double lg = std::log(t + 1.0);
  return p / (2.5 * (t + 1.0) * lg * lg);
}

HessianLearner::HessianLearner(const Matrix& b0, double mu, double l1, double rho, double delta,
                               double p, OracleMode mode, std::uint64_t seed)
    : b0_(b0),
      mu_(mu),
      l1_(l1),
      rho_(rho),
      delta_(delta),
      p_(p),
      mode_(mode),
      rng_(seed),
      frozen_(!(l1 > mu)) {
  w_ = frozen_ ? Matrix::Zero(b0.rows(), b0.cols()) : to_hat(b0, mu, l1);
}

const Matrix& HessianLearner::predict() {
  if (has_prediction_) return b_;
  has_prediction_ = true;
  outcome_.reset();
  last_matvecs_ = 0;
  if (frozen_ || t_ == 0) {
    b_ = b0_;
    b_hat_ = w_;
    return b_;
  }
  SepOutcome sep = mode_ == OracleMode::Exact
                       ? ext_evec_exact(w_)
                       : ext_evec_lanczos(w_, delta_, round_confidence(p_, t_), rng_);
  last_matvecs_ = sep.matvecs;
  total_matvecs_ += sep.matvecs;
  b_hat_ = sep.inside() ? w_ : Matrix(w_ / sep.gamma);
  b_ = from_hat(b_hat_, mu_, l1_);
  outcome_ = std::move(sep);
  return b_;
}

RoundRecord HessianLearner::update(const Vector& s, const Vector& y) {
  if (!has_prediction_) fail(ErrorKind::StateMismatch, "update() without a matching predict()");
  RoundRecord rec;
  rec.t = t_;
  rec.loss = secant_loss(b_, s, y);
  rec.w = w_;
  rec.b_hat = b_hat_;
  if (frozen_) {
    rec.g = Matrix::Zero(w_.rows(), w_.cols());
    rec.g_tilde = rec.g;
  } else {
    rec.g = (2.0 / (l1_ - mu_)) * secant_loss_gradient(b_, s, y);
    rec.g_tilde = rec.g;
    if (outcome_ && !outcome_->inside()) {
      const double hinge = std::max(0.0, -frobenius_dot(rec.g, b_hat_));
      if (hinge > 0.0) rec.g_tilde += hinge * outcome_->separator();
    }
    w_ = project_frobenius_ball(w_ - rho_ * rec.g_tilde, std::sqrt(static_cast<double>(w_.rows())));
  }
  cumulative_loss_ += rec.loss;
  ++t_;
  has_prediction_ = false;
  outcome_.reset();
  return rec;
}

}  // namespace qnpe
