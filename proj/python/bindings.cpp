#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qnpe/certificates.hpp"
#include "qnpe/cli.hpp"
#include "qnpe/eig_oracle.hpp"
#include "qnpe/errors.hpp"
#include "qnpe/hessian_learner.hpp"
#include "qnpe/linear_solver.hpp"
#include "qnpe/problems.hpp"
#include "qnpe/solver.hpp"
#include "qnpe/trace_io.hpp"

namespace py = pybind11;
using namespace qnpe;

namespace {

SolverConfig config_from_kwargs(const py::kwargs& kwargs) {
  SolverConfig cfg;
  for (const auto& item : kwargs) {
    const auto key = py::str(item.first).cast<std::string>();
    const auto value = py::str(item.second).cast<std::string>();
    set_config_field(cfg, key, value);
  }
  return cfg;
}

py::dict report_to_dict(const SolverReport& report) {
  py::dict d;
  d["method"] = report.method;
  d["termination"] = to_string(report.termination);
  d["final_x"] = report.final_x;
  d["final_grad_norm"] = report.final_grad_norm;
  d["final_dist_sq"] = report.final_dist_sq;
  d["total_grad_evals"] = report.total_grad_evals();
  d["total_ls_steps"] = report.total_ls_steps();
  d["total_mv_linsolve"] = report.total_mv_linsolve();
  d["total_mv_extevec"] = report.total_mv_extevec();
  py::list records;
  for (const auto& r : report.records) {
    py::dict row;
    row["k"] = r.k;
    row["eta"] = r.eta;
    row["backtracked"] = r.backtracked;
    row["ls_steps"] = r.ls_steps;
    row["grad_evals"] = r.grad_evals;
    row["mv_linsolve"] = r.mv_linsolve;
    row["mv_extevec"] = r.mv_extevec;
    row["loss"] = r.loss;
    row["dist_sq"] = r.dist_sq;
    row["grad_norm"] = r.grad_norm;
    records.append(row);
  }
  d["records"] = records;
  std::ostringstream csv;
  write_trace_csv(csv, report);
  d["trace_csv"] = csv.str();
  return d;
}

}  // namespace

PYBIND11_MODULE(_qnpe, m) {
  m.doc() = "Quasi-Newton proximal extragradient solver";

  static py::exception<Error> error_type(m, "QnpeError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string msg = std::string(to_string(e.kind())) + ": " + e.what();
      PyErr_SetString(error_type.ptr(), msg.c_str());
    }
  });

  py::class_<Objective>(m, "Objective")
      .def_readonly("dim", &Objective::dim)
      .def_readonly("mu", &Objective::mu)
      .def_readonly("l1", &Objective::l1)
      .def_readonly("l2", &Objective::l2)
      .def_readonly("minimizer", &Objective::minimizer)
      .def_readonly("label", &Objective::label)
      .def("grad", [](const Objective& o, const Vector& x) { return o.grad(x); })
      .def("value", [](const Objective& o, const Vector& x) { return o.value(x); })
      .def("hessian", [](const Objective& o, const Vector& x) { return o.hessian(x); });

  m.def("make_quadratic", &make_quadratic, py::arg("d"), py::arg("mu"), py::arg("l1"),
        py::arg("seed"));
  m.def("make_logistic", &make_logistic, py::arg("n"), py::arg("d"), py::arg("lam"),
        py::arg("seed"));
  m.def("quadratic", &quadratic_objective, py::arg("a"), py::arg("b"), py::arg("mu"),
        py::arg("l1"), py::arg("label") = "");
  m.def("problem", &parse_problem_spec, py::arg("spec"), "Objective from a problem spec string");

  m.def(
      "solve",
      [](const Objective& obj, const std::string& method, const py::kwargs& kwargs) {
        return report_to_dict(run_method(method, obj, config_from_kwargs(kwargs)));
      },
      py::arg("objective"), py::arg("method") = "qnpe",
      "Run a method; keyword arguments are config fields (alpha1=..., oracle_mode='exact', ...)");

  m.def(
      "verify",
      [](const Objective& obj, const std::string& method, const py::kwargs& kwargs) {
        const SolverReport report = run_method(method, obj, config_from_kwargs(kwargs));
        const CertificateReport certs = verify_trace(report, obj);
        py::dict out;
        for (const auto& c : certs.items) out[py::str(c.name)] = to_string(c.status);
        return out;
      },
      py::arg("objective"), py::arg("method") = "qnpe");

  m.def(
      "conjugate_residual",
      [](const Matrix& a, const Vector& b, double alpha, int max_iters) {
        const CrResult r = conjugate_residual(LinearOperator::dense(a), b, alpha, max_iters);
        return py::make_tuple(r.s, r.iterations, r.matvecs);
      },
      py::arg("a"), py::arg("b"), py::arg("alpha"), py::arg("max_iters") = 1000);

  m.def(
      "ext_evec",
      [](const Matrix& w, const std::string& mode, double delta, double q, std::uint64_t seed) {
        SepOutcome out;
        if (mode == "exact") {
          out = ext_evec_exact(w);
        } else {
          Rng rng(seed);
          out = ext_evec_lanczos(w, delta, q, rng);
        }
        return py::make_tuple(out.gamma, out.sign, out.sign == 0 ? py::object(py::none())
                                                                 : py::cast(out.u));
      },
      py::arg("w"), py::arg("mode") = "exact", py::arg("delta") = 1.0, py::arg("q") = 0.1,
      py::arg("seed") = 0);

  m.def("lanczos_iterations",
        [](int d, double delta, double q) { return lanczos_budget(d, delta, q).n_iters; });
  m.def("secant_loss", &secant_loss);
  m.def("secant_loss_gradient", &secant_loss_gradient);
}
