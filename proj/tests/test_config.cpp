#include <gtest/gtest.h>

#include <sstream>

#include "qnpe/config.hpp"
#include "qnpe/errors.hpp"
#include "qnpe/format.hpp"
#include "qnpe/problems.hpp"

using namespace qnpe;

namespace {

Objective band(double mu, double l1, int d = 3) {
  return quadratic_objective(Matrix::Identity(d, d) * mu, Vector::Ones(d), mu, l1);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::IoError;
}

}  // namespace

TEST(Config, DefaultsFilledFromCurvature) {
  const auto cfg = validate_config(SolverConfig{}, band(1.0, 100.0));
  EXPECT_DOUBLE_EQ(cfg.alpha1, 0.25);
  EXPECT_DOUBLE_EQ(cfg.alpha2, 0.25);
  EXPECT_DOUBLE_EQ(cfg.beta, 0.5);
  EXPECT_DOUBLE_EQ(*cfg.sigma0, 1.0 / 400.0);
  EXPECT_DOUBLE_EQ(cfg.rho, 1.0 / 18.0);
  EXPECT_DOUBLE_EQ(*cfg.delta, 1.0 / 99.0);
}

TEST(Config, DeltaCappedAtOne) {
  EXPECT_DOUBLE_EQ(*validate_config(SolverConfig{}, band(1.0, 1.5)).delta, 1.0);
  EXPECT_DOUBLE_EQ(*validate_config(SolverConfig{}, band(2.0, 2.0)).delta, 1.0);
}

TEST(Config, DefaultB0IsL1Identity) {
  const auto obj = band(1.0, 10.0);
  const auto cfg = validate_config(SolverConfig{}, obj);
  EXPECT_TRUE((resolve_b0(cfg, obj).array() == (10.0 * Matrix::Identity(3, 3)).array()).all());
}

TEST(Config, DefaultSigmaStaysAboveStepFloorForLargeAlpha2) {
  SolverConfig cfg;
  cfg.alpha1 = 0.0;
  cfg.alpha2 = 0.9;
  cfg.beta = 0.9;
  const auto out = validate_config(cfg, band(1.0, 10.0));
  EXPECT_GE(*out.sigma0, 0.9 * 0.9 / 10.0);
}

TEST(Config, Rejections) {
  const auto obj = band(1.0, 10.0);
  SolverConfig c1;
  c1.alpha1 = 0.5;
  c1.alpha2 = 0.5;
  EXPECT_EQ(kind_of([&] { validate_config(c1, obj); }), ErrorKind::ParameterConflict);

  SolverConfig c2;
  c2.sigma0 = 0.001;  // floor is 0.25*0.5/10 = 0.0125
  EXPECT_EQ(kind_of([&] { validate_config(c2, obj); }), ErrorKind::StepSeedTooSmall);

  SolverConfig c3;
  c3.b0 = B0Scaled{20.0};
  EXPECT_EQ(kind_of([&] { validate_config(c3, obj); }), ErrorKind::SpectrumViolation);

  SolverConfig c4;
  c4.b0 = Matrix(Vector::LinSpaced(3, 0.5, 5.0).asDiagonal());
  EXPECT_EQ(kind_of([&] { validate_config(c4, obj); }), ErrorKind::SpectrumViolation);

  Objective bad = obj;
  bad.l1 = 0.5;
  EXPECT_EQ(kind_of([&] { validate_config(SolverConfig{}, bad); }), ErrorKind::DegenerateCurvature);

  SolverConfig c5;
  c5.beta = 1.0;
  EXPECT_EQ(kind_of([&] { validate_config(c5, obj); }), ErrorKind::InvalidArgument);
}

TEST(Config, SigmaAtFloorAccepted) {
  SolverConfig cfg;
  cfg.sigma0 = 0.25 * 0.5 / 10.0;
  EXPECT_NO_THROW(validate_config(cfg, band(1.0, 10.0)));
}

TEST(Config, RoundTripThroughText) {
  SolverConfig cfg;
  cfg.alpha1 = 0.1;
  cfg.sigma0 = 0.3;
  cfg.delta = 0.2;
  cfg.b0 = B0Scaled{4.5};
  cfg.oracle_mode = OracleMode::Exact;
  cfg.seed = 1234567890123ULL;
  cfg.dist_tol = 1e-16;
  cfg.grad_tol = 0.1 + 0.2;  // not exactly representable as a short decimal
  std::stringstream text;
  write_config(text, cfg);
  EXPECT_TRUE(read_config(text) == cfg);
}

TEST(Config, ReaderSkipsCommentsAndRejectsUnknownKeys) {
  std::istringstream ok("# comment\n\n  rho = 0.5 \nmax_iters=7\n");
  const auto cfg = read_config(ok);
  EXPECT_DOUBLE_EQ(cfg.rho, 0.5);
  EXPECT_EQ(cfg.max_iters, 7);
  std::istringstream bad("gamma=1\n");
  EXPECT_EQ(kind_of([&] { read_config(bad); }), ErrorKind::ParseError);
  std::istringstream garbage("rho\n");
  EXPECT_EQ(kind_of([&] { read_config(garbage); }), ErrorKind::ParseError);
}

TEST(Config, ExplicitMatrixHasNoFlatEncoding) {
  SolverConfig cfg;
  cfg.b0 = Matrix::Identity(2, 2);
  std::ostringstream out;
  EXPECT_EQ(kind_of([&] { write_config(out, cfg); }), ErrorKind::InvalidArgument);
}

TEST(Format, ShortestRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0}) {
    EXPECT_EQ(parse_double(format_double(v), "v"), v);
  }
  EXPECT_THROW(parse_double("1.0x", "v"), Error);
  EXPECT_THROW(parse_int("", "v"), Error);
}
