#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qnpe/objective.hpp"
#include "qnpe/types.hpp"

namespace qnpe {

/// f(x) = 1/2 x^T A x - b^T x with the supplied curvature bounds.
/// The minimizer is computed by a Cholesky solve plus one refinement step.
Objective quadratic_objective(const Matrix& a, const Vector& b, double mu, double l1,
                              std::string label = {});

/// Random quadratic with spectrum log-uniformly spaced on [mu, l1]
/// (both endpoints attained) and a Gaussian linear term.
/// Throws InvalidSpectrum unless 0 < mu <= l1.
Objective make_quadratic(int dim, double mu, double l1, std::uint64_t seed);

/// L2-regularized logistic regression on seeded synthetic data.
/// mu = lambda and l1 = lambda + lambda_max(A^T A)/(4n).
Objective make_logistic(int n, int dim, double lambda, std::uint64_t seed);

// Logistic objective on caller-supplied data; rows of `features` are samples,
// labels are +-1.
Objective logistic_objective(const Matrix& features, const Vector& labels, double lambda,
                             std::string label = {});

/// Reads a real symmetric matrix in Matrix Market format (coordinate or
/// array; real or integer; symmetric or general storage).
/// Throws ParseError or NotSymmetric.
Matrix read_matrix_market(std::istream& in);

/// Quadratic objective from a Matrix Market file, b defaulting to all ones.
/// Throws IoError, ParseError, NotSymmetric, NotPositiveDefinite.
Objective load_matrix_market(const std::string& path, const std::optional<Vector>& b = std::nullopt);

}  // namespace qnpe
