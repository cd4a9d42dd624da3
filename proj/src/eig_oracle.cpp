#include "qnpe/eig_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qnpe/errors.hpp"

namespace qnpe {

LanczosBudget lanczos_budget(int dim, double delta, double q) {
  if (dim < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  if (!(delta > 0.0)) fail(ErrorKind::InvalidArgument, "delta must be positive");
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::InvalidArgument, "q must lie in (0, 1)");
  LanczosBudget out;
  out.epsilon = delta / (2.0 * (1.0 + delta));
  const double raw = 0.25 / std::sqrt(out.epsilon) * std::log(11.0 * dim / (q * q)) + 0.5;
  const double n = std::ceil(raw);
  out.n_iters = n >= dim ? dim : std::max(1, static_cast<int>(n));
  return out;
}

namespace {

SepOutcome classify(double top, const Vector& u_top, double bottom, const Vector& u_bottom,
                    int matvecs) {
  SepOutcome out;
  out.matvecs = matvecs;
  out.gamma = std::max(top, -bottom);
  if (out.gamma <= 1.0) return out;
  if (top >= -bottom) {
    out.sign = 1;
    out.u = u_top.normalized();
  } else {
    out.sign = -1;
    out.u = u_bottom.normalized();
  }
  return out;
}

}  // namespace

SepOutcome lanczos_extremes(const Matrix& w, int n_iters, Rng& rng) {
  const auto d = w.rows();
  if (w.cols() != d || d == 0) fail(ErrorKind::InvalidArgument, "W must be square and nonempty");
  n_iters = std::clamp(n_iters, 1, static_cast<int>(d));

  Matrix basis(d, n_iters);
  std::vector<double> diag;
  std::vector<double> offdiag;
  const double scale = w.norm();
  const double floor = 1e-13 * scale;
  int matvecs = 0;

  basis.col(0) = rng.normal_vector(d).normalized();
  for (int j = 0; j < n_iters; ++j) {
    Vector next = w * basis.col(j);
    ++matvecs;
    const double a = basis.col(j).dot(next);
    diag.push_back(a);
    if (j + 1 == n_iters) break;
    next -= a * basis.col(j);
    if (j > 0) next -= offdiag.back() * basis.col(j - 1);
    // Two passes of classical Gram-Schmidt keep the basis orthonormal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      const auto v = basis.leftCols(j + 1);
      next -= v * (v.transpose() * next);
    }
    const double b = next.norm();
    if (b <= floor) break;  // invariant Krylov space, T is exact on it
    offdiag.push_back(b);
    basis.col(j + 1) = next / b;
  }

  const auto m = static_cast<Eigen::Index>(diag.size());
  Vector t_diag = Eigen::Map<const Vector>(diag.data(), m);
  Vector t_sub = Eigen::Map<const Vector>(offdiag.data(), m - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  eig.computeFromTridiagonal(t_diag, t_sub, Eigen::ComputeEigenvectors);
  if (eig.info() != Eigen::Success) fail(ErrorKind::EigFailure, "tridiagonal eigensolver failed");

  const auto ritz = basis.leftCols(m);
  const Vector u_top = ritz * eig.eigenvectors().col(m - 1);
  const Vector u_bottom = ritz * eig.eigenvectors().col(0);
  return classify(eig.eigenvalues()(m - 1), u_top, eig.eigenvalues()(0), u_bottom, matvecs);
}

SepOutcome ext_evec_lanczos(const Matrix& w, double delta, double q, Rng& rng) {
  return lanczos_extremes(w, lanczos_budget(static_cast<int>(w.rows()), delta, q).n_iters, rng);
}

SepOutcome ext_evec_exact(const Matrix& w) {
  if (w.rows() != w.cols() || w.rows() == 0)
    fail(ErrorKind::InvalidArgument, "W must be square and nonempty");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(w);
  if (eig.info() != Eigen::Success) fail(ErrorKind::EigFailure, "eigendecomposition did not converge");
  const auto d = w.rows();
  return classify(eig.eigenvalues()(d - 1), eig.eigenvectors().col(d - 1), eig.eigenvalues()(0),
                  eig.eigenvectors().col(0), 0);
}

}  // namespace qnpe
