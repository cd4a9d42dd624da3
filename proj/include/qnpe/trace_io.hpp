#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qnpe/certificates.hpp"
#include "qnpe/objective.hpp"
#include "qnpe/solver.hpp"

namespace qnpe {

inline constexpr const char* kTraceHeader =
    "k,eta,backtracked,ls_steps,grad_evals,mv_linsolve,mv_extevec,loss,dist_sq,grad_norm";

/// One CSV row per iteration; `NA` marks missing optionals.
void write_trace_csv(std::ostream& out, const SolverReport& report);

/// Flat key=value run summary. Certificate keys are written only when
/// `certs` is given.
void write_summary(std::ostream& out, const SolverReport& report, const Objective& obj,
                   const CertificateReport* certs = nullptr);

/// Whitespace-separated table, one row per iteration index and one column
/// per run, with totals in `#` comment lines. Columns hold ||x_k - x*||^2
/// when the minimizer is known, else ||grad f(x_k)||.
void write_comparison(std::ostream& out, const Objective& obj,
                      const std::vector<std::pair<std::string, SolverReport>>& runs);

}  // namespace qnpe
