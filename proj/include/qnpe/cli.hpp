#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qnpe/config.hpp"
#include "qnpe/objective.hpp"
#include "qnpe/solver.hpp"

namespace qnpe {

/// Builds an objective from `name:key=value,...`:
///   quadratic:d=50,mu=1,l1=1000,seed=7
///   logistic:n=200,d=20,lambda=0.01,seed=3
///   mm:path/to/matrix.mtx
/// Generator specs must carry a seed. Throws ParseError.
Objective parse_problem_spec(const std::string& spec);

// Runs `method` (qnpe, gd or bfgs) on `obj`.
SolverReport run_method(const std::string& method, const Objective& obj, const SolverConfig& cfg);

/// Entry point of the benchmark tool; `args` excludes the program name.
/// Returns the process exit status. Library errors are reported on `err` as
/// `error: <Kind>: <message>` with status 2.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qnpe
