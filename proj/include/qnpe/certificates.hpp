#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnpe/objective.hpp"
#include "qnpe/solver.hpp"

namespace qnpe {

enum class CertStatus { Pass, Fail, NotApplicable };

std::string to_string(CertStatus s);

/// Outcome of one post-hoc check. `margin` is the worst value of
/// (bound - observed) over the trace, normalized where the check says so;
/// negative means violated.
struct Certificate {
  std::string name;
  CertStatus status = CertStatus::NotApplicable;
  double margin = 0.0;
  std::optional<int> offending_k;
  std::string detail;
};

struct CertificateReport {
  std::vector<Certificate> items;

  bool all_pass() const;  // NotApplicable counts as passing
  const Certificate* find(const std::string& name) const;
};

struct VerifyOptions {
  // Relative slack for the per-step contraction check.
  double contraction_slack = 1e-10;
  // Absolute slack on the per-step linear-rate ratio.
  double rate_slack = 1e-12;
  // Randomly drawn competitors (spectrum in [mu, l1]) for the regret check.
  int random_competitors = 10;
  std::uint64_t competitor_seed = 1;
  // Trend test on windowed contraction ratios; off by default because it is
  // only meaningful on runs long enough to leave the linear phase.
  bool superlinear_trend = false;
  double trend_ceiling = 0.2;
};

/// Re-checks the convergence guarantees on a finished run.
///
/// Certificates that need x* or the Hessian at x* throw MissingGroundTruth
/// when `obj` lacks them; runs of the baseline methods report the
/// QNPE-specific checks as NotApplicable.
CertificateReport verify_trace(const SolverReport& report, const Objective& obj,
                               const VerifyOptions& opts = {});

// Iteration after which the superlinear envelope beats the linear rate.
// Needs l2, the Hessian and x*.
std::optional<double> transition_iterations(const SolverReport& report, const Objective& obj);

/// Upper bound on the iterations needed for ||x - x*||^2 <= eps, from the
/// better of the linear and superlinear rates.
double iteration_bound(double mu, double l1, double n_tr, double dist0_sq, double eps);

// (1 + (sqrt(3)/8) mu sqrt(k / C))^{-k}, the certified bound on
// ||x_k - x*||^2 / ||x_0 - x*||^2.
double superlinear_envelope(int k, double mu, double l1, double b0_err_sq, double l2,
                            double dist0_sq);

// Geometric mean of ||x_{k+1} - x*|| / ||x_k - x*|| over the first and the
// last quarter of a distance sequence (squared distances in, unsquared ratios out).
struct TrendWindows {
  double first = 0.0;
  double last = 0.0;
};
std::optional<TrendWindows> contraction_trend(const std::vector<double>& dist_sq);

}  // namespace qnpe
