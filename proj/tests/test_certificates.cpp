#include <gtest/gtest.h>

#include <cmath>

#include "qnpe/baselines.hpp"
#include "qnpe/certificates.hpp"
#include "qnpe/errors.hpp"
#include "qnpe/problems.hpp"
#include "qnpe/solver.hpp"

using namespace qnpe;

namespace {

SolverReport short_run(const Objective& obj, int iters = 80) {
  SolverConfig cfg;
  cfg.oracle_mode = OracleMode::Exact;
  cfg.max_iters = iters;
  return solve(obj, cfg);
}

CertStatus status(const CertificateReport& r, const std::string& name) {
  const auto* c = r.find(name);
  EXPECT_NE(c, nullptr) << name;
  return c ? c->status : CertStatus::Fail;
}

}  // namespace

TEST(Certificates, HonestRunPassesAll) {
  const auto obj = make_quadratic(15, 1.0, 100.0, 2);
  const auto rep = short_run(obj);
  const auto certs = verify_trace(rep, obj);
  for (const auto& c : certs.items)
    EXPECT_NE(c.status, CertStatus::Fail) << c.name << " " << c.detail;
  EXPECT_EQ(status(certs, "superlinear_trend"), CertStatus::NotApplicable);
}

TEST(Certificates, InjectedStepFloorViolationNamesIteration) {
  const auto obj = make_quadratic(10, 1.0, 50.0, 3);
  auto rep = short_run(obj, 20);
  rep.records[7].eta = 0.5 * rep.config.alpha2 * rep.config.beta / obj.l1;
  const auto certs = verify_trace(rep, obj);
  const auto* c = certs.find("step_floor");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->status, CertStatus::Fail);
  ASSERT_TRUE(c->offending_k.has_value());
  EXPECT_EQ(*c->offending_k, 7);
  EXPECT_FALSE(certs.all_pass());
}

TEST(Certificates, InjectedDistanceJumpBreaksContraction) {
  const auto obj = make_quadratic(10, 1.0, 50.0, 4);
  auto rep = short_run(obj, 20);
  *rep.records[5].dist_sq = 10.0 * *rep.records[4].dist_sq;
  const auto certs = verify_trace(rep, obj);
  EXPECT_EQ(status(certs, "contraction"), CertStatus::Fail);
  EXPECT_EQ(*certs.find("contraction")->offending_k, 4);
}

TEST(Certificates, BudgetViolationDetected) {
  const auto obj = make_quadratic(10, 1.0, 50.0, 5);
  auto rep = short_run(obj, 20);
  rep.records[3].grad_evals += 100;
  rep.records[3].ls_steps += 100;
  const auto certs = verify_trace(rep, obj);
  EXPECT_EQ(status(certs, "gradient_budget"), CertStatus::Fail);
  EXPECT_EQ(status(certs, "line_search_budget"), CertStatus::Fail);
}

TEST(Certificates, BaselinesAreNotApplicable) {
  const auto obj = make_quadratic(6, 1.0, 10.0, 6);
  SolverConfig cfg;
  cfg.max_iters = 10;
  const auto certs = verify_trace(run_gd(obj, cfg), obj);
  for (const auto& c : certs.items) EXPECT_EQ(c.status, CertStatus::NotApplicable);
}

TEST(Certificates, MissingMinimizerIsReported) {
  auto obj = make_quadratic(6, 1.0, 10.0, 7);
  const auto rep = short_run(obj, 5);
  obj.minimizer.reset();
  try {
    verify_trace(rep, obj);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingGroundTruth);
  }
}

TEST(Certificates, EnvelopeFormula) {
  EXPECT_DOUBLE_EQ(superlinear_envelope(0, 1.0, 10.0, 5.0, 0.0, 1.0), 1.0);
  // C = l1^2 = 100 for a quadratic with B0 = H: (1 + sqrt(3)/8 * sqrt(4/100))^{-4}
  const double expected = std::pow(1.0 + std::sqrt(3.0) / 8.0 * 0.2, -4.0);
  EXPECT_NEAR(superlinear_envelope(4, 1.0, 10.0, 0.0, 0.0, 1.0), expected, 1e-15);
}

TEST(Certificates, TrendWindows) {
  std::vector<double> d;
  double v = 1.0;
  for (int k = 0; k < 9; ++k) {
    d.push_back(v);
    v *= k < 4 ? 0.25 : 0.01;  // unsquared ratios 0.5 then 0.1
  }
  const auto t = contraction_trend(d);
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(t->first, 0.5, 1e-12);
  EXPECT_NEAR(t->last, 0.1, 1e-12);
  EXPECT_FALSE(contraction_trend({1.0, 0.5, 0.25}).has_value());
}

TEST(Certificates, IterationBoundShrinksWithAccuracy) {
  const double loose = iteration_bound(1.0, 100.0, 50.0, 1.0, 1e-4);
  const double tight = iteration_bound(1.0, 100.0, 50.0, 1.0, 1e-12);
  EXPECT_GT(tight, loose);
  EXPECT_EQ(iteration_bound(1.0, 100.0, 50.0, 1e-6, 1e-4), 0.0);
}
