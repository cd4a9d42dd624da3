#include "qnpe/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qnpe/errors.hpp"

namespace qnpe {

CrResult conjugate_residual(const LinearOperator& a, const Vector& b, double alpha, int max_iters,
                            CrTrace* trace) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
  if (b.size() != a.dim()) fail(ErrorKind::InvalidArgument, "right-hand side has the wrong size");

  CrResult out;
  out.s = Vector::Zero(b.size());
  Vector r = b;
  double r_norm = r.norm();
  double s_norm = 0.0;
  if (trace) {
    trace->residual_norms.assign(1, r_norm);
    trace->s_norms.assign(1, 0.0);
  }
  out.residual_norm = r_norm;
  if (r_norm <= alpha * s_norm) return out;

  // p_k = 0 on a PD operator means r_k = 0; anything below this is treated as converged.
  const double eps = std::numeric_limits<double>::epsilon();
  const double breakdown_floor = (eps * r_norm) * (eps * r_norm);

  Vector ar = a(r);
  ++out.matvecs;
  Vector p = r;
  Vector ap = ar;
  double r_ar = r.dot(ar);

  for (int k = 0;; ++k) {
    if (r_norm <= alpha * s_norm) {
      out.iterations = k;
      out.residual_norm = r_norm;
      return out;
    }
    if (k >= max_iters) {
      fail(ErrorKind::IterationCapExceeded,
           "conjugate residual did not reach ||r|| <= alpha ||s|| within " +
               std::to_string(max_iters) + " iterations");
    }
    const double ap_ap = ap.squaredNorm();
    if (ap_ap <= breakdown_floor || r_ar == 0.0) {
      out.iterations = k;
      out.residual_norm = r_norm;
      return out;
    }
    const double step = r_ar / ap_ap;
    out.s += step * p;
    r -= step * ap;
    ar = a(r);
    ++out.matvecs;
    const double r_ar_next = r.dot(ar);
    const double conj = r_ar_next / r_ar;
    r_ar = r_ar_next;
    p = r + conj * p;
    ap = ar + conj * ap;

    r_norm = r.norm();
    s_norm = out.s.norm();
    if (trace) {
      trace->residual_norms.push_back(r_norm);
      trace->s_norms.push_back(s_norm);
    }
  }
}

int default_cr_max_iters(int dim, double eta, double mu, double l1, double alpha) {
  const double lam_max = 1.0 + eta * (l1 + 0.5 * mu);
  const double lam_min = 1.0 + eta * 0.5 * mu;
  const double kappa = lam_max / lam_min;
  const double bound = 2.0 * std::sqrt(kappa) * std::log(2.0 * lam_max / alpha);
  const double cap = 20.0 * dim;
  const double budget = std::ceil(std::max(bound, 0.0)) + 10.0 * dim;
  return static_cast<int>(std::min(budget, cap));
}

}  // namespace qnpe
