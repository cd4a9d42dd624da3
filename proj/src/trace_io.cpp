#include "qnpe/trace_io.hpp"

#include <algorithm>
#include <ostream>

#include "qnpe/format.hpp"

namespace qnpe {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

}  // namespace

void write_trace_csv(std::ostream& out, const SolverReport& report) {
  out << kTraceHeader << '\n';
  for (const auto& r : report.records) {
    out << r.k << ',' << format_double(r.eta) << ',' << (r.backtracked ? 1 : 0) << ','
        << r.ls_steps << ',' << r.grad_evals << ',' << r.mv_linsolve << ',' << r.mv_extevec << ','
        << opt(r.loss) << ',' << opt(r.dist_sq) << ',' << format_double(r.grad_norm) << '\n';
  }
}

void write_summary(std::ostream& out, const SolverReport& report, const Objective& obj,
                   const CertificateReport* certs) {
  long backtracked = 0;
  for (const auto& r : report.records) backtracked += r.backtracked ? 1 : 0;

  out << "method=" << report.method << '\n';
  out << "problem=" << obj.label << '\n';
  out << "termination=" << to_string(report.termination) << '\n';
  out << "iterations=" << report.records.size() << '\n';
  out << "backtracked_iterations=" << backtracked << '\n';
  out << "total_grad_evals=" << report.total_grad_evals() << '\n';
  out << "terminal_grad_evals=" << report.terminal_grad_evals << '\n';
  out << "total_ls_steps=" << report.total_ls_steps() << '\n';
  out << "total_mv_linsolve=" << report.total_mv_linsolve() << '\n';
  out << "total_mv_extevec=" << report.total_mv_extevec() << '\n';
  out << "final_grad_norm=" << format_double(report.final_grad_norm) << '\n';
  out << "final_dist_sq=" << opt(report.final_dist_sq) << '\n';
  out << "sum_inv_eta_sq=" << format_double(report.sum_inv_eta_sq()) << '\n';

  std::optional<double> n_tr;
  std::optional<double> n_eps;
  if (report.method == "qnpe") n_tr = transition_iterations(report, obj);
  if (n_tr && report.final_dist_sq && *report.final_dist_sq > 0.0) {
    const double dist0 = (report.x0 - *obj.minimizer).squaredNorm();
    n_eps = iteration_bound(obj.mu, obj.l1, *n_tr, dist0, *report.final_dist_sq);
  }
  out << "n_tr=" << opt(n_tr) << '\n';
  out << "n_eps_bound=" << opt(n_eps) << '\n';

  if (certs) {
    for (const auto& c : certs->items) out << "cert_" << c.name << '=' << to_string(c.status) << '\n';
    out << "certificates_all_pass=" << (certs->all_pass() ? "true" : "false") << '\n';
  }
  out << "wall_time=" << format_double(report.wall_time) << '\n';
}

void write_comparison(std::ostream& out, const Objective& obj,
                      const std::vector<std::pair<std::string, SolverReport>>& runs) {
  const bool use_dist = obj.minimizer.has_value();
  out << "# problem=" << obj.label << '\n';
  out << "# metric=" << (use_dist ? "dist_sq" : "grad_norm") << '\n';
  for (const auto& [name, rep] : runs) {
    out << "# " << name << " iterations=" << rep.records.size()
        << " termination=" << to_string(rep.termination)
        << " grad_evals=" << rep.total_grad_evals() << " ls_steps=" << rep.total_ls_steps()
        << " mv_linsolve=" << rep.total_mv_linsolve() << " mv_extevec=" << rep.total_mv_extevec()
        << '\n';
  }

  std::vector<std::vector<double>> columns;
  std::size_t rows = 0;
  for (const auto& run : runs) {
    const SolverReport& rep = run.second;
    std::vector<double> col;
    if (use_dist) {
      col = rep.distances_sq();
    } else {
      for (const auto& r : rep.records) col.push_back(r.grad_norm);
      col.push_back(rep.final_grad_norm);
    }
    rows = std::max(rows, col.size());
    columns.push_back(std::move(col));
  }

  out << "k";
  for (const auto& run : runs) out << ' ' << run.first;
  out << '\n';
  for (std::size_t k = 0; k < rows; ++k) {
    out << k;
    for (const auto& col : columns) out << ' ' << (k < col.size() ? format_double(col[k]) : "NA");
    out << '\n';
  }
}

}  // namespace qnpe
