#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

#include "qnpe/objective.hpp"
#include "qnpe/types.hpp"

namespace qnpe {

enum class OracleMode { Lanczos, Exact };

std::string to_string(OracleMode mode);
OracleMode parse_oracle_mode(const std::string& text);

// Initial Hessian approximation policies.
struct B0Default {};  // l1 * I
struct B0Scaled {
  double factor = 0.0;  // factor * I, factor in [mu, l1]
};
using B0Policy = std::variant<B0Default, B0Scaled, Matrix>;

/// Tunables of the QNPE loop. Fields left empty are filled by
/// validate_config() from the objective's curvature constants.
struct SolverConfig {
  double alpha1 = 0.25;
  double alpha2 = 0.25;
  double beta = 0.5;
  std::optional<double> sigma0;  // default 1/(4 l1)
  double rho = 1.0 / 18.0;
  std::optional<double> delta;   // default min{mu/(l1-mu), 1}
  double p = 0.01;
  B0Policy b0 = B0Default{};
  OracleMode oracle_mode = OracleMode::Lanczos;
  std::uint64_t seed = 0;
  int max_iters = 10000;
  double grad_tol = 1e-10;
  std::optional<double> dist_tol;
  int max_backtracks_slack = 30;
};

bool operator==(const SolverConfig& a, const SolverConfig& b);

/// Fills defaults and checks every parameter constraint against `obj`.
/// Throws Error with ParameterConflict, StepSeedTooSmall, SpectrumViolation,
/// DegenerateCurvature or InvalidArgument.
SolverConfig validate_config(const SolverConfig& cfg, const Objective& obj);

/// The initial matrix B0 a validated config resolves to.
Matrix resolve_b0(const SolverConfig& cfg, const Objective& obj);

// Flat `key=value` text, one field per line, `#` comments. An explicit B0
// matrix has no flat encoding and is rejected by write_config.
void write_config(std::ostream& out, const SolverConfig& cfg);
SolverConfig read_config(std::istream& in);

// Applies a single `key`/`value` pair; used by the reader and the CLI.
void set_config_field(SolverConfig& cfg, const std::string& key, const std::string& value);

}  // namespace qnpe
