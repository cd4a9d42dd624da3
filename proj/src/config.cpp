#include "qnpe/config.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "qnpe/errors.hpp"
#include "qnpe/format.hpp"

namespace qnpe {

std::string to_string(OracleMode mode) {
  return mode == OracleMode::Exact ? "exact" : "lanczos";
}

OracleMode parse_oracle_mode(const std::string& text) {
  if (text == "exact") return OracleMode::Exact;
  if (text == "lanczos") return OracleMode::Lanczos;
  fail(ErrorKind::ParseError, "unknown oracle mode '" + text + "'");
}

namespace {

bool same_b0(const B0Policy& a, const B0Policy& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<B0Scaled>(a))
    return std::get<B0Scaled>(a).factor == std::get<B0Scaled>(b).factor;
  if (std::holds_alternative<Matrix>(a)) {
    const auto& ma = std::get<Matrix>(a);
    const auto& mb = std::get<Matrix>(b);
    return ma.rows() == mb.rows() && ma.cols() == mb.cols() && (ma.array() == mb.array()).all();
  }
  return true;
}

void require(bool ok, ErrorKind kind, const std::string& message) {
  if (!ok) fail(kind, message);
}

}  // namespace

bool operator==(const SolverConfig& a, const SolverConfig& b) {
  return a.alpha1 == b.alpha1 && a.alpha2 == b.alpha2 && a.beta == b.beta &&
         a.sigma0 == b.sigma0 && a.rho == b.rho && a.delta == b.delta && a.p == b.p &&
         same_b0(a.b0, b.b0) && a.oracle_mode == b.oracle_mode && a.seed == b.seed &&
         a.max_iters == b.max_iters && a.grad_tol == b.grad_tol && a.dist_tol == b.dist_tol &&
         a.max_backtracks_slack == b.max_backtracks_slack;
}

SolverConfig validate_config(const SolverConfig& cfg, const Objective& obj) {
  require(obj.dim >= 1, ErrorKind::InvalidArgument, "objective dimension must be positive");
  require(obj.mu > 0.0 && std::isfinite(obj.mu), ErrorKind::InvalidArgument,
          "mu must be positive and finite");
  require(std::isfinite(obj.l1), ErrorKind::InvalidArgument, "l1 must be finite");
  require(obj.l1 >= obj.mu, ErrorKind::DegenerateCurvature, "l1 must be at least mu");

  require(cfg.alpha1 >= 0.0 && cfg.alpha1 < 1.0, ErrorKind::InvalidArgument,
          "alpha1 must lie in [0, 1)");
  require(cfg.alpha2 > 0.0 && cfg.alpha2 < 1.0, ErrorKind::InvalidArgument,
          "alpha2 must lie in (0, 1)");
  require(cfg.beta > 0.0 && cfg.beta < 1.0, ErrorKind::InvalidArgument,
          "beta must lie in (0, 1)");
  require(cfg.alpha1 + cfg.alpha2 < 1.0, ErrorKind::ParameterConflict,
          "alpha1 + alpha2 must be below 1");

  SolverConfig out = cfg;

  const double step_floor = cfg.alpha2 * cfg.beta / obj.l1;
  // 1/(4 l1) covers the standard parameters; the max keeps the default valid
  // when alpha2 * beta > 1/4.
  out.sigma0 = cfg.sigma0.value_or(std::max(1.0 / (4.0 * obj.l1), step_floor));
  require(*out.sigma0 > 0.0 && std::isfinite(*out.sigma0), ErrorKind::InvalidArgument,
          "sigma0 must be positive and finite");
  require(*out.sigma0 >= step_floor, ErrorKind::StepSeedTooSmall,
          "sigma0 = " + format_double(*out.sigma0) + " is below alpha2*beta/l1 = " +
              format_double(step_floor));

  require(cfg.rho > 0.0, ErrorKind::InvalidArgument, "rho must be positive");
  if (!cfg.delta) {
    // The min{.,1} cap is also the value at l1 == mu, where the ratio is undefined.
    out.delta = obj.l1 > obj.mu ? std::min(obj.mu / (obj.l1 - obj.mu), 1.0) : 1.0;
  }
  require(*out.delta > 0.0 && *out.delta <= 1.0, ErrorKind::InvalidArgument,
          "delta must lie in (0, 1]");
  require(cfg.p > 0.0 && cfg.p < 1.0, ErrorKind::InvalidArgument, "p must lie in (0, 1)");
  require(cfg.max_iters >= 0, ErrorKind::InvalidArgument, "max_iters must be nonnegative");
  require(cfg.grad_tol >= 0.0, ErrorKind::InvalidArgument, "grad_tol must be nonnegative");
  require(!cfg.dist_tol || *cfg.dist_tol >= 0.0, ErrorKind::InvalidArgument,
          "dist_tol must be nonnegative");
  require(cfg.max_backtracks_slack >= 0, ErrorKind::InvalidArgument,
          "max_backtracks_slack must be nonnegative");

  if (std::holds_alternative<B0Default>(cfg.b0)) {
    out.b0 = B0Scaled{obj.l1};
  } else if (const auto* scaled = std::get_if<B0Scaled>(&cfg.b0)) {
    require(scaled->factor >= obj.mu && scaled->factor <= obj.l1, ErrorKind::SpectrumViolation,
            "B0 scale " + format_double(scaled->factor) + " outside [mu, l1]");
  } else {
    const auto& b0 = std::get<Matrix>(cfg.b0);
    require(b0.rows() == obj.dim && b0.cols() == obj.dim, ErrorKind::InvalidArgument,
            "B0 has the wrong shape");
    const double scale = std::max(1.0, b0.cwiseAbs().maxCoeff());
    require((b0 - b0.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
            ErrorKind::SpectrumViolation, "B0 is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(b0), Eigen::EigenvaluesOnly);
    require(eig.info() == Eigen::Success, ErrorKind::EigFailure, "B0 eigendecomposition failed");
    const double tol = 1e-12 * obj.l1;
    require(eig.eigenvalues().minCoeff() >= obj.mu - tol &&
                eig.eigenvalues().maxCoeff() <= obj.l1 + tol,
            ErrorKind::SpectrumViolation, "B0 spectrum outside [mu, l1]");
  }
  return out;
}

Matrix resolve_b0(const SolverConfig& cfg, const Objective& obj) {
  const auto n = static_cast<Eigen::Index>(obj.dim);
  if (std::holds_alternative<B0Default>(cfg.b0)) return obj.l1 * Matrix::Identity(n, n);
  if (const auto* scaled = std::get_if<B0Scaled>(&cfg.b0))
    return scaled->factor * Matrix::Identity(n, n);
  return symmetrize(std::get<Matrix>(cfg.b0));
}

void write_config(std::ostream& out, const SolverConfig& cfg) {
  out << "alpha1=" << format_double(cfg.alpha1) << '\n';
  out << "alpha2=" << format_double(cfg.alpha2) << '\n';
  out << "beta=" << format_double(cfg.beta) << '\n';
  if (cfg.sigma0) out << "sigma0=" << format_double(*cfg.sigma0) << '\n';
  out << "rho=" << format_double(cfg.rho) << '\n';
  if (cfg.delta) out << "delta=" << format_double(*cfg.delta) << '\n';
  out << "p=" << format_double(cfg.p) << '\n';
  if (std::holds_alternative<B0Default>(cfg.b0)) {
    out << "b0=default\n";
  } else if (const auto* scaled = std::get_if<B0Scaled>(&cfg.b0)) {
    out << "b0=scaled:" << format_double(scaled->factor) << '\n';
  } else {
    fail(ErrorKind::InvalidArgument, "an explicit B0 matrix cannot be written as a flat config");
  }
  out << "oracle_mode=" << to_string(cfg.oracle_mode) << '\n';
  out << "seed=" << cfg.seed << '\n';
  out << "max_iters=" << cfg.max_iters << '\n';
  out << "grad_tol=" << format_double(cfg.grad_tol) << '\n';
  if (cfg.dist_tol) out << "dist_tol=" << format_double(*cfg.dist_tol) << '\n';
  out << "max_backtracks_slack=" << cfg.max_backtracks_slack << '\n';
}

void set_config_field(SolverConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "alpha1") {
    cfg.alpha1 = parse_double(value, key);
  } else if (key == "alpha2") {
    cfg.alpha2 = parse_double(value, key);
  } else if (key == "beta") {
    cfg.beta = parse_double(value, key);
  } else if (key == "sigma0") {
    cfg.sigma0 = parse_double(value, key);
  } else if (key == "rho") {
    cfg.rho = parse_double(value, key);
  } else if (key == "delta") {
    cfg.delta = parse_double(value, key);
  } else if (key == "p") {
    cfg.p = parse_double(value, key);
  } else if (key == "b0") {
    if (value == "default") {
      cfg.b0 = B0Default{};
    } else if (value.rfind("scaled:", 0) == 0) {
      cfg.b0 = B0Scaled{parse_double(std::string_view(value).substr(7), key)};
    } else {
      fail(ErrorKind::ParseError, "b0 must be 'default' or 'scaled:<factor>'");
    }
  } else if (key == "oracle_mode") {
    cfg.oracle_mode = parse_oracle_mode(value);
  } else if (key == "seed") {
    cfg.seed = parse_u64(value, key);
  } else if (key == "max_iters") {
    cfg.max_iters = static_cast<int>(parse_int(value, key));
  } else if (key == "grad_tol") {
    cfg.grad_tol = parse_double(value, key);
  } else if (key == "dist_tol") {
    cfg.dist_tol = parse_double(value, key);
  } else if (key == "max_backtracks_slack") {
    cfg.max_backtracks_slack = static_cast<int>(parse_int(value, key));
  } else {
    fail(ErrorKind::ParseError, "unknown config key '" + key + "'");
  }
}

SolverConfig read_config(std::istream& in) {
  SolverConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected key=value");
    }
    set_config_field(cfg, std::string(trim(view.substr(0, eq))),
                     std::string(trim(view.substr(eq + 1))));
  }
  return cfg;
}

}  // namespace qnpe
