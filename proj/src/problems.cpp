#include "qnpe/problems.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <sstream>
#include <vector>

#include "qnpe/config.hpp"
#include "qnpe/errors.hpp"
#include "qnpe/format.hpp"
#include "qnpe/solver.hpp"

namespace qnpe {

namespace {

std::string lowercase(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return text;
}

// log(1 + exp(t)) without overflow.
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

Objective quadratic_objective(const Matrix& a, const Vector& b, double mu, double l1,
                              std::string label) {
  if (a.rows() != a.cols() || a.rows() != b.size() || a.rows() == 0)
    fail(ErrorKind::InvalidArgument, "quadratic data has inconsistent shapes");
  auto mat = std::make_shared<const Matrix>(a);
  auto rhs = std::make_shared<const Vector>(b);

  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success)
    fail(ErrorKind::NotPositiveDefinite, "quadratic matrix is not positive definite");
  Vector x = llt.solve(b);
  x += llt.solve(b - a * x);

  Objective obj;
  obj.dim = static_cast<int>(a.rows());
  obj.grad = [mat, rhs](const Vector& v) -> Vector { return *mat * v - *rhs; };
  obj.value = [mat, rhs](const Vector& v) { return 0.5 * v.dot(*mat * v) - rhs->dot(v); };
  obj.hessian = [mat](const Vector&) -> Matrix { return *mat; };
  obj.mu = mu;
  obj.l1 = l1;
  obj.l2 = 0.0;
  obj.minimizer = std::move(x);
  obj.label = std::move(label);
  return obj;
}

Objective make_quadratic(int dim, double mu, double l1, std::uint64_t seed) {
  if (dim < 1) fail(ErrorKind::InvalidArgument, "dimension must be positive");
  if (!(mu > 0.0) || !(l1 >= mu) || !std::isfinite(l1))
    fail(ErrorKind::InvalidSpectrum, "need 0 < mu <= l1");

  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::HouseholderQR<Matrix> qr(rng.normal_matrix(n, n));
  const Matrix q = qr.householderQ();

  Vector lambda(n);
  if (dim == 1) {
    lambda(0) = mu;
  } else {
    const double lo = std::log(mu);
    const double hi = std::log(l1);
    for (Eigen::Index i = 0; i < n; ++i)
      lambda(i) = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    lambda(0) = mu;
    lambda(n - 1) = l1;
  }
  const Matrix a = symmetrize(q * lambda.asDiagonal() * q.transpose());
  const Vector b = rng.normal_vector(n);

  const std::string label = "quadratic:d=" + std::to_string(dim) + ",mu=" + format_double(mu) +
                            ",l1=" + format_double(l1) + ",seed=" + std::to_string(seed);
  return quadratic_objective(a, b, mu, l1, label);
}

Objective logistic_objective(const Matrix& features, const Vector& labels, double lambda,
                             std::string label) {
  const auto n = features.rows();
  if (n < 1 || features.cols() < 1) fail(ErrorKind::InvalidArgument, "empty logistic data");
  if (labels.size() != n) fail(ErrorKind::InvalidArgument, "one label per sample required");
  if (!(lambda > 0.0)) fail(ErrorKind::InvalidArgument, "lambda must be positive");

  // Fold the labels into the rows: the loss only sees y_i a_i.
  auto data = std::make_shared<const Matrix>(labels.asDiagonal() * features);
  const double inv_n = 1.0 / static_cast<double>(n);

  Objective obj;
  obj.dim = static_cast<int>(features.cols());
  obj.value = [data, inv_n, lambda](const Vector& x) {
    const Vector margin = *data * x;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < margin.size(); ++i) sum += softplus(-margin(i));
    return inv_n * sum + 0.5 * lambda * x.squaredNorm();
  };
  obj.grad = [data, inv_n, lambda](const Vector& x) -> Vector {
    const Vector margin = *data * x;
    Vector weight(margin.size());
    for (Eigen::Index i = 0; i < margin.size(); ++i) weight(i) = -sigmoid(-margin(i));
    return inv_n * (data->transpose() * weight) + lambda * x;
  };
  obj.hessian = [data, inv_n, lambda](const Vector& x) -> Matrix {
    const Vector margin = *data * x;
    Vector curv(margin.size());
    for (Eigen::Index i = 0; i < margin.size(); ++i) {
      const double s = sigmoid(margin(i));
      curv(i) = s * (1.0 - s);
    }
    const auto d = data->cols();
    Matrix h = inv_n * (data->transpose() * curv.asDiagonal() * *data);
    h += lambda * Matrix::Identity(d, d);
    return symmetrize(h);
  };

  Eigen::SelfAdjointEigenSolver<Matrix> eig(features.transpose() * features,
                                            Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) fail(ErrorKind::EigFailure, "Gram matrix eigensolve failed");
  obj.mu = lambda;
  obj.l1 = lambda + std::max(eig.eigenvalues().maxCoeff(), 0.0) * inv_n / 4.0;
  double cubes = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) cubes += std::pow(features.row(i).norm(), 3);
  obj.l2 = cubes * inv_n / 6.0;
  obj.label = std::move(label);

  // Reference minimizer: run the method itself with the exact oracle, then
  // polish with Newton steps while they still reduce the gradient.
  SolverConfig cfg;
  cfg.oracle_mode = OracleMode::Exact;
  cfg.grad_tol = 1e-12;
  cfg.max_iters = 10000;
  Vector x = solve(obj, cfg).final_x;
  double g_norm = obj.grad(x).norm();
  for (int it = 0; it < 5 && g_norm > 0.0; ++it) {
    const Vector g = obj.grad(x);
    Vector cand = x - obj.hessian(x).llt().solve(g);
    const double cand_norm = obj.grad(cand).norm();
    if (!(cand_norm < g_norm)) break;
    x = std::move(cand);
    g_norm = cand_norm;
  }
  obj.minimizer = std::move(x);
  return obj;
}

Objective make_logistic(int n, int dim, double lambda, std::uint64_t seed) {
  if (n < 1 || dim < 1) fail(ErrorKind::InvalidArgument, "n and d must be positive");
  if (!(lambda > 0.0)) fail(ErrorKind::InvalidArgument, "lambda must be positive");
  Rng rng(seed);
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(dim);
  const Matrix features = rng.normal_matrix(rows, cols) / std::sqrt(static_cast<double>(dim));
  const Vector planted = rng.normal_vector(cols);
  Vector labels(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double score = features.row(i).dot(planted) + 0.5 * rng.normal();
    labels(i) = score >= 0.0 ? 1.0 : -1.0;
  }
  const std::string label = "logistic:n=" + std::to_string(n) + ",d=" + std::to_string(dim) +
                            ",lambda=" + format_double(lambda) + ",seed=" + std::to_string(seed);
  return logistic_objective(features, labels, lambda, label);
}

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::ParseError, "empty Matrix Market input");
  std::istringstream header(lowercase(line));
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix")
    fail(ErrorKind::ParseError, "missing %%MatrixMarket matrix banner");
  if (format != "coordinate" && format != "array")
    fail(ErrorKind::ParseError, "unsupported format '" + format + "'");
  if (field != "real" && field != "integer" && field != "double")
    fail(ErrorKind::ParseError, "unsupported field '" + field + "'");
  if (symmetry != "symmetric" && symmetry != "general")
    fail(ErrorKind::ParseError, "unsupported symmetry '" + symmetry + "'");
  const bool symmetric = symmetry == "symmetric";

  auto next_data_line = [&in, &line]() {
    while (std::getline(in, line)) {
      const auto view = trim(line);
      if (!view.empty() && view.front() != '%') return true;
    }
    return false;
  };

  if (!next_data_line()) fail(ErrorKind::ParseError, "missing size line");
  std::istringstream size_line(line);
  long rows = 0, cols = 0, entries = 0;
  size_line >> rows >> cols;
  if (format == "coordinate") size_line >> entries;
  if (!size_line || rows < 1 || cols < 1 || entries < 0)
    fail(ErrorKind::ParseError, "malformed size line");
  if (rows != cols) fail(ErrorKind::NotSymmetric, "matrix is not square");

  Matrix a = Matrix::Zero(rows, cols);
  auto read_value = [&](std::istringstream& ls) {
    std::string token;
    if (!(ls >> token)) fail(ErrorKind::ParseError, "missing value");
    return parse_double(token, "matrix entry");
  };

  if (format == "coordinate") {
    for (long e = 0; e < entries; ++e) {
      if (!next_data_line()) fail(ErrorKind::ParseError, "fewer entries than declared");
      std::istringstream ls(line);
      long i = 0, j = 0;
      if (!(ls >> i >> j)) fail(ErrorKind::ParseError, "malformed entry line");
      if (i < 1 || i > rows || j < 1 || j > cols)
        fail(ErrorKind::ParseError, "entry index out of range");
      const double v = read_value(ls);
      a(i - 1, j - 1) = v;
      if (symmetric) a(j - 1, i - 1) = v;
    }
  } else {
    for (long j = 0; j < cols; ++j) {
      for (long i = symmetric ? j : 0; i < rows; ++i) {
        if (!next_data_line()) fail(ErrorKind::ParseError, "fewer entries than declared");
        std::istringstream ls(line);
        const double v = read_value(ls);
        a(i, j) = v;
        if (symmetric) a(j, i) = v;
      }
    }
  }
  if (next_data_line()) fail(ErrorKind::ParseError, "more entries than declared");

  if (!symmetric) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      fail(ErrorKind::NotSymmetric, "general-storage matrix is not symmetric");
  }
  return a;
}

Objective load_matrix_market(const std::string& path, const std::optional<Vector>& b) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "'");
  const Matrix a = symmetrize(read_matrix_market(in));
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) fail(ErrorKind::EigFailure, "eigendecomposition failed");
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) fail(ErrorKind::NotPositiveDefinite, "smallest eigenvalue " + format_double(lo));
  const Vector rhs = b.value_or(Vector::Ones(a.rows()));
  if (rhs.size() != a.rows()) fail(ErrorKind::InvalidArgument, "b has the wrong size");
  // Rounding can leave the computed extremes a hair outside each other at mu == l1.
  return quadratic_objective(a, rhs, lo, std::max(hi, lo), "mm:" + path);
}

}  // namespace qnpe
