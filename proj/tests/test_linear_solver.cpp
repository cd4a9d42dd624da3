#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "qnpe/errors.hpp"
#include "qnpe/linear_solver.hpp"

using namespace qnpe;

TEST(ConjugateResidual, IdentityConvergesInOneIteration) {
  const Matrix a = Matrix::Identity(5, 5);
  const Vector b = Vector::LinSpaced(5, 1.0, 5.0);
  const auto r = conjugate_residual(LinearOperator::dense(a), b, 0.25, 10);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_EQ(r.matvecs, 2);
  EXPECT_LT((r.s - b).norm(), 1e-14);
}

TEST(ConjugateResidual, ZeroRightHandSideNeedsNoProducts) {
  const Matrix a = Matrix::Identity(3, 3);
  const auto r = conjugate_residual(LinearOperator::dense(a), Vector::Zero(3), 0.5, 10);
  EXPECT_EQ(r.iterations, 0);
  EXPECT_EQ(r.matvecs, 0);
  EXPECT_EQ(r.s.norm(), 0.0);
}

TEST(ConjugateResidual, DiagonalTwoByTwoMatchesDirectSolve) {
  Matrix a(2, 2);
  a << 2.0, 0.0, 0.0, 8.0;
  Vector b(2);
  b << 2.0, 8.0;
  // Two Krylov steps span R^2, so the exact solution (1, 1) is reached.
  const auto r = conjugate_residual(LinearOperator::dense(a), b, 1e-12, 10);
  EXPECT_LE(r.iterations, 2);
  EXPECT_LT((r.s - Vector::Ones(2)).norm(), 1e-12);
}

TEST(ConjugateResidual, ContractAndMonotonicityOnRandomSystems) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 40;
    const Vector eigs = Vector::LinSpaced(d, 0.0, 3.0).unaryExpr([](double t) { return std::pow(10.0, t); });
    const Matrix a = oracle::with_spectrum(eigs, gen);
    const Vector b = oracle::random_vector(d, gen);
    const double alpha = 0.1;
    CrTrace trace;
    const auto r = conjugate_residual(LinearOperator::dense(a), b, alpha, 1000, &trace);
    EXPECT_LE((a * r.s - b).norm(), alpha * r.s.norm() * (1.0 + 1e-8));
    for (std::size_t k = 1; k < trace.s_norms.size(); ++k) {
      EXPECT_GT(trace.s_norms[k], trace.s_norms[k - 1]);
      EXPECT_LE(trace.residual_norms[k], trace.residual_norms[k - 1] * (1.0 + 1e-12));
    }
    EXPECT_EQ(r.matvecs, r.iterations + 1);
  }
}

TEST(ConjugateResidual, CapExceededIsReported) {
  std::mt19937_64 gen(3);
  const Matrix a = oracle::with_spectrum(Vector::LinSpaced(30, 1.0, 1e4), gen);
  const Vector b = oracle::random_vector(30, gen);
  try {
    conjugate_residual(LinearOperator::dense(a), b, 1e-10, 2);
    FAIL() << "expected IterationCapExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IterationCapExceeded);
  }
}

TEST(ConjugateResidual, RejectsBadAlpha) {
  const Matrix a = Matrix::Identity(2, 2);
  EXPECT_THROW(conjugate_residual(LinearOperator::dense(a), Vector::Ones(2), 0.0, 5), Error);
  EXPECT_THROW(conjugate_residual(LinearOperator::dense(a), Vector::Ones(2), 1.0, 5), Error);
}

TEST(ConjugateResidual, ShiftedOperatorMatchesDense) {
  std::mt19937_64 gen(5);
  const Matrix b = oracle::with_spectrum(Vector::LinSpaced(10, 0.5, 20.0), gen);
  const Vector v = oracle::random_vector(10, gen);
  const auto op = LinearOperator::shifted(b, 0.3);
  EXPECT_LT((op(v) - (v + 0.3 * b * v)).norm(), 1e-12);
}

TEST(ConjugateResidual, DefaultCapBounded) {
  EXPECT_LE(default_cr_max_iters(10, 1e6, 1.0, 1e6, 1e-8), 200);
  EXPECT_GE(default_cr_max_iters(10, 0.01, 1.0, 10.0, 0.25), 100);
}
