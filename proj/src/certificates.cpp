#include "qnpe/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qnpe/errors.hpp"
#include "qnpe/format.hpp"
#include "qnpe/hessian_learner.hpp"

namespace qnpe {

std::string to_string(CertStatus s) {
  switch (s) {
    case CertStatus::Pass:
      return "pass";
    case CertStatus::Fail:
      return "fail";
    case CertStatus::NotApplicable:
      return "na";
  }
  return "unknown";
}

bool CertificateReport::all_pass() const {
  return std::none_of(items.begin(), items.end(),
                      [](const Certificate& c) { return c.status == CertStatus::Fail; });
}

const Certificate* CertificateReport::find(const std::string& name) const {
  for (const auto& c : items)
    if (c.name == name) return &c;
  return nullptr;
}

double superlinear_envelope(int k, double mu, double l1, double b0_err_sq, double l2,
                            double dist0_sq) {
  if (k == 0) return 1.0;
  const double c = l1 * l1 + 36.0 * b0_err_sq + (27.0 + 16.0 * l1 / mu) * l2 * l2 * dist0_sq;
  const double base = 1.0 + std::sqrt(3.0) / 8.0 * mu * std::sqrt(k / c);
  return std::pow(base, -static_cast<double>(k));
}

double iteration_bound(double mu, double l1, double n_tr, double dist0_sq, double eps) {
  if (!(eps > 0.0)) fail(ErrorKind::InvalidArgument, "accuracy must be positive");
  if (dist0_sq <= eps) return 0.0;
  double factor = 1.0 / std::log1p(mu / (4.0 * l1));
  const double log_inv_eps = std::log(1.0 / eps);
  if (log_inv_eps > 0.0) {
    const double inner = std::cbrt(mu * mu / (16.0 * l1 * l1 * n_tr) * log_inv_eps);
    factor = std::min(factor, 1.0 / std::log1p(inner));
  }
  return factor * std::log(dist0_sq / eps);
}

std::optional<TrendWindows> contraction_trend(const std::vector<double>& dist_sq) {
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < dist_sq.size(); ++i) {
    if (!(dist_sq[i] > 0.0)) break;
    ratios.push_back(std::sqrt(dist_sq[i + 1] / dist_sq[i]));
  }
  if (ratios.size() < 4) return std::nullopt;
  const std::size_t q = ratios.size() / 4;
  auto geo_mean = [&](std::size_t from) {
    double log_sum = 0.0;
    for (std::size_t i = from; i < from + q; ++i) log_sum += std::log(ratios[i]);
    return std::exp(log_sum / static_cast<double>(q));
  };
  return TrendWindows{geo_mean(0), geo_mean(ratios.size() - q)};
}

namespace {

// Relative allowance for bounds that are sums of many rounded terms.
constexpr double kSumRounding = 1e-12;

class Tracker {
 public:
  explicit Tracker(std::string name) { cert_.name = std::move(name); }

  // Records one check; `margin` < 0 means violated.
  void check(double margin, int k) {
    if (!seen_ || margin < cert_.margin) cert_.margin = margin;
    seen_ = true;
    if (margin < 0.0 && !cert_.offending_k) cert_.offending_k = k;
  }

  Certificate finish(std::string detail = {}) {
    cert_.status = cert_.offending_k ? CertStatus::Fail : CertStatus::Pass;
    if (!seen_) cert_.margin = 0.0;
    cert_.detail = std::move(detail);
    if (cert_.offending_k && cert_.detail.empty())
      cert_.detail = "first violation at k=" + std::to_string(*cert_.offending_k);
    return cert_;
  }

 private:
  Certificate cert_;
  bool seen_ = false;
};

Certificate not_applicable(const std::string& name, const std::string& why) {
  Certificate c;
  c.name = name;
  c.status = CertStatus::NotApplicable;
  c.detail = why;
  return c;
}

double log_base(double x, double base) { return std::log(x) / std::log(base); }

Matrix random_competitor(int dim, double mu, double l1, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::HouseholderQR<Matrix> qr(rng.normal_matrix(n, n));
  const Matrix q = qr.householderQ();
  Vector spec(n);
  for (Eigen::Index i = 0; i < n; ++i) spec(i) = mu + (l1 - mu) * rng.uniform();
  return symmetrize(q * spec.asDiagonal() * q.transpose());
}

}  // namespace

std::optional<double> transition_iterations(const SolverReport& report, const Objective& obj) {
  if (!obj.l2 || !obj.has_hessian() || !obj.minimizer) return std::nullopt;
  const Matrix h = obj.hessian(*obj.minimizer);
  const double b0_err = (report.b0 - h).squaredNorm();
  const double dist0 = (report.x0 - *obj.minimizer).squaredNorm();
  const double l1 = obj.l1, mu = obj.mu, l2 = *obj.l2;
  return 4.0 / 3.0 + 48.0 / (l1 * l1) * b0_err +
         (36.0 / (l1 * l1) + 64.0 / (3.0 * mu * l1)) * l2 * l2 * dist0;
}

CertificateReport verify_trace(const SolverReport& report, const Objective& obj,
                               const VerifyOptions& opts) {
  static const char* const kNames[] = {
      "contraction",   "linear_rate",        "step_floor",       "step_size_sum",
      "regret",        "displacement_sum",   "backtrack_bound",  "displacement_ratio",
      "superlinear_envelope", "gradient_budget", "gradient_budget_4s0l1", "line_search_budget",
      "superlinear_trend"};

  CertificateReport out;
  if (report.method != "qnpe") {
    for (const char* name : kNames)
      out.items.push_back(not_applicable(name, "not defined for method " + report.method));
    return out;
  }
  if (!obj.minimizer) fail(ErrorKind::MissingGroundTruth, "verification needs the minimizer");

  const SolverConfig& cfg = report.config;
  const auto& recs = report.records;
  const double mu = obj.mu, l1 = obj.l1;
  const double alpha1 = cfg.alpha1, alpha2 = cfg.alpha2, beta = cfg.beta;
  const double sigma0 = cfg.sigma0.value_or(1.0 / (4.0 * l1));
  const auto dist = report.distances_sq();
  if (dist.size() != recs.size() + 1)
    fail(ErrorKind::MissingGroundTruth, "trace lacks distances to the minimizer");
  const double dist0 = dist.front();
  const int n = static_cast<int>(recs.size());

  {
    Tracker t("contraction");
    for (int k = 0; k < n; ++k) {
      const double bound = dist[k] / (1.0 + 2.0 * recs[k].eta * mu);
      const double margin = dist[k] > 0.0 ? (bound - dist[k + 1]) / dist[k] + opts.contraction_slack
                                          : (dist[k + 1] == 0.0 ? 0.0 : -1.0);
      t.check(margin, k);
    }
    out.items.push_back(t.finish());
  }
  {
    Tracker t("linear_rate");
    const double rate = 1.0 / (1.0 + 2.0 * mu * alpha2 * beta / l1);
    for (int k = 0; k < n; ++k) {
      if (dist[k] == 0.0) {
        t.check(dist[k + 1] == 0.0 ? 0.0 : -1.0, k);
        continue;
      }
      t.check(rate + opts.rate_slack - dist[k + 1] / dist[k], k);
    }
    out.items.push_back(t.finish());
  }
  {
    Tracker t("step_floor");
    const double floor = alpha2 * beta / l1;
    for (int k = 0; k < n; ++k) t.check(recs[k].eta >= floor ? recs[k].eta / floor - 1.0 : -1.0, k);
    out.items.push_back(t.finish());
  }
  {
    Tracker t("step_size_sum");
    const double one_minus = 1.0 - beta * beta;
    double lhs = 0.0;
    double rhs = 1.0 / (one_minus * sigma0 * sigma0);
    const double per_loss = 2.0 / (one_minus * alpha2 * alpha2 * beta * beta);
    for (int k = 0; k < n; ++k) {
      lhs += 1.0 / (recs[k].eta * recs[k].eta);
      if (recs[k].backtracked && recs[k].loss) rhs += per_loss * *recs[k].loss;
      t.check((rhs * (1.0 + kSumRounding) - lhs) / rhs, k);
    }
    out.items.push_back(t.finish());
  }
  {
    if (!obj.has_hessian()) fail(ErrorKind::MissingGroundTruth, "regret check needs the Hessian");
    Tracker t("regret");
    double learner_loss = 0.0;
    for (const auto& r : recs)
      if (r.loss) learner_loss += *r.loss;
    std::vector<Matrix> competitors{obj.hessian(*obj.minimizer)};
    Rng rng(opts.competitor_seed);
    for (int i = 0; i < opts.random_competitors; ++i)
      competitors.push_back(random_competitor(obj.dim, mu, l1, rng));
    for (std::size_t i = 0; i < competitors.size(); ++i) {
      const Matrix& h = competitors[i];
      double competitor_loss = 0.0;
      for (const auto& round : report.rounds) competitor_loss += secant_loss(h, round.s, round.y);
      const double bound = 18.0 * (report.b0 - h).squaredNorm() + 2.0 * competitor_loss;
      const double scale = std::max(bound, std::numeric_limits<double>::min());
      t.check((bound - learner_loss) / scale, static_cast<int>(i));
    }
    auto c = t.finish();
    if (c.offending_k) c.detail = "violated for competitor " + std::to_string(*c.offending_k);
    c.offending_k.reset();
    c.status = c.margin < 0.0 ? CertStatus::Fail : CertStatus::Pass;
    out.items.push_back(c);
  }
  {
    Tracker t("displacement_sum");
    const double bound = dist0 / (1.0 - alpha1 - alpha2);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += recs[k].step_sq;
      t.check(bound > 0.0 ? (bound * (1.0 + kSumRounding) - sum) / bound : -sum, k);
    }
    out.items.push_back(t.finish());
  }
  {
    Tracker t("backtrack_bound");
    for (int k = 0; k < n; ++k) {
      const auto& r = recs[k];
      if (!r.backtracked || !r.tilde_norm || !r.tilde_err) continue;
      const double rhs = alpha2 * beta * *r.tilde_norm;
      const double lhs = r.eta * *r.tilde_err;
      t.check(lhs > rhs ? (rhs > 0.0 ? lhs / rhs - 1.0 : 1.0) : -1.0, k);
    }
    out.items.push_back(t.finish());
  }
  {
    Tracker t("displacement_ratio");
    const double factor = (1.0 + alpha1) / (beta * (1.0 - alpha1));
    for (int k = 0; k < n; ++k) {
      const auto& r = recs[k];
      if (!r.backtracked || !r.tilde_norm) continue;
      const double bound = factor * std::sqrt(r.step_sq);
      t.check(bound > 0.0 ? (bound * (1.0 + kSumRounding) - *r.tilde_norm) / bound
                          : (*r.tilde_norm == 0.0 ? 0.0 : -1.0),
              k);
    }
    out.items.push_back(t.finish());
  }
  if (obj.l2 && obj.has_hessian()) {
    Tracker t("superlinear_envelope");
    const double b0_err = (report.b0 - obj.hessian(*obj.minimizer)).squaredNorm();
    for (int k = 0; k <= n; ++k) {
      const double env = superlinear_envelope(k, mu, l1, b0_err, *obj.l2, dist0);
      t.check(dist0 > 0.0 ? env * (1.0 + kSumRounding) - dist[k] / dist0 : 0.0, k);
    }
    out.items.push_back(t.finish());
  } else {
    out.items.push_back(not_applicable("superlinear_envelope", "needs l2 and the Hessian"));
  }

  const double inv_beta = 1.0 / beta;
  const double log_slack = 1e-9;
  {
    Tracker t("gradient_budget");
    if (n > 0) {
      const double bound = 3.0 * n + log_base(sigma0 * l1 / alpha2, inv_beta) + log_slack;
      t.check(bound - static_cast<double>(report.total_grad_evals()), n);
    }
    out.items.push_back(t.finish());
  }
  if (alpha2 == 0.25) {
    Tracker t("gradient_budget_4s0l1");
    if (n > 0) {
      const double bound = 3.0 * n + log_base(4.0 * sigma0 * l1, inv_beta) + log_slack;
      t.check(bound - static_cast<double>(report.total_grad_evals()), n);
    }
    out.items.push_back(t.finish());
  } else {
    out.items.push_back(not_applicable("gradient_budget_4s0l1", "stated for alpha2 = 1/4 only"));
  }
  {
    Tracker t("line_search_budget");
    if (n > 0) {
      const double bound = 2.0 * n + log_base(sigma0 * l1 / alpha2, inv_beta) + log_slack;
      t.check(bound - static_cast<double>(report.total_ls_steps()), n);
    }
    out.items.push_back(t.finish());
  }
  if (opts.superlinear_trend) {
    const auto trend = contraction_trend(dist);
    if (!trend) {
      out.items.push_back(not_applicable("superlinear_trend", "fewer than 4 transitions"));
    } else {
      Certificate c;
      c.name = "superlinear_trend";
      c.margin = std::min(opts.trend_ceiling - trend->last, 0.5 * trend->first - trend->last);
      c.status = c.margin > 0.0 ? CertStatus::Pass : CertStatus::Fail;
      c.detail = "first_quarter=" + format_double(trend->first) +
                 " last_quarter=" + format_double(trend->last);
      out.items.push_back(c);
    }
  } else {
    out.items.push_back(not_applicable("superlinear_trend", "not requested"));
  }
  return out;
}

}  // namespace qnpe
