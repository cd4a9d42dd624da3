#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "qnpe/types.hpp"

namespace qnpe {

/// Matrix-free symmetric operator. Every call to apply() is one product.
class LinearOperator {
 public:
  using Apply = std::function<Vector(const Vector&)>;

  LinearOperator(int dim, Apply apply) : dim_(dim), apply_(std::move(apply)) {}

  static LinearOperator dense(const Matrix& a) {
    return LinearOperator(static_cast<int>(a.rows()), [&a](const Vector& v) -> Vector { return a * v; });
  }

  // I + eta * B, the system matrix of the proximal subproblem.
  static LinearOperator shifted(const Matrix& b, double eta) {
    return LinearOperator(static_cast<int>(b.rows()),
                          [&b, eta](const Vector& v) -> Vector { return v + eta * (b * v); });
  }

  int dim() const { return dim_; }
  Vector operator()(const Vector& v) const { return apply_(v); }

 private:
  int dim_;
  Apply apply_;
};

struct CrResult {
  Vector s;
  double residual_norm = 0.0;  // recurrence residual ||b - A s||
  int iterations = 0;
  int matvecs = 0;
};

// Per-iterate history, index k holds ||r_k|| and ||s_k||.
struct CrTrace {
  std::vector<double> residual_norms;
  std::vector<double> s_norms;
};

/// Conjugate residual iteration from s_0 = 0, returning the first iterate
/// with ||A s_k - b|| <= alpha ||s_k||.
///
/// A p_{k+1} is formed by recurrence, so the cost is one product per iteration
/// plus one to initialise. Throws IterationCapExceeded after `max_iters`.
CrResult conjugate_residual(const LinearOperator& a, const Vector& b, double alpha, int max_iters,
                            CrTrace* trace = nullptr);

/// Iteration cap for solving (I + eta B) s = b when spec(B) is within
/// [mu/2, l1 + mu/2]: the textbook bound plus 10 d, never more than 20 d.
int default_cr_max_iters(int dim, double eta, double mu, double l1, double alpha);

}  // namespace qnpe
