#include "qnpe/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "qnpe/baselines.hpp"
#include "qnpe/certificates.hpp"
#include "qnpe/errors.hpp"
#include "qnpe/format.hpp"
#include "qnpe/problems.hpp"
#include "qnpe/trace_io.hpp"

namespace qnpe {

namespace {

std::map<std::string, std::string> parse_params(std::string_view text, const std::string& name) {
  std::map<std::string, std::string> params;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorKind::ParseError, name + ": expected key=value, got '" + std::string(item) + "'");
    params[std::string(trim(item.substr(0, eq)))] = std::string(trim(item.substr(eq + 1)));
  }
  return params;
}

std::string take(std::map<std::string, std::string>& params, const std::string& key,
                 const std::string& name) {
  auto it = params.find(key);
  if (it == params.end()) fail(ErrorKind::ParseError, name + " spec needs '" + key + "'");
  std::string value = it->second;
  params.erase(it);
  return value;
}

void reject_leftovers(const std::map<std::string, std::string>& params, const std::string& name) {
  if (!params.empty())
    fail(ErrorKind::ParseError, name + " spec has unknown key '" + params.begin()->first + "'");
}

}  // namespace

Objective parse_problem_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    fail(ErrorKind::ParseError, "problem spec '" + spec + "' lacks a 'name:' prefix");
  const std::string name = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);

  if (name == "mm") {
    if (rest.empty()) fail(ErrorKind::ParseError, "mm spec needs a file path");
    return load_matrix_market(rest);
  }
  auto params = parse_params(rest, name);
  if (name == "quadratic") {
    const auto d = parse_int(take(params, "d", name), "d");
    const double mu = parse_double(take(params, "mu", name), "mu");
    const double l1 = parse_double(take(params, "l1", name), "l1");
    const auto seed = parse_u64(take(params, "seed", name), "seed");
    reject_leftovers(params, name);
    return make_quadratic(static_cast<int>(d), mu, l1, seed);
  }
  if (name == "logistic") {
    const auto n = parse_int(take(params, "n", name), "n");
    const auto d = parse_int(take(params, "d", name), "d");
    const double lambda = parse_double(take(params, "lambda", name), "lambda");
    const auto seed = parse_u64(take(params, "seed", name), "seed");
    reject_leftovers(params, name);
    return make_logistic(static_cast<int>(n), static_cast<int>(d), lambda, seed);
  }
  fail(ErrorKind::ParseError, "unknown problem generator '" + name + "'");
}

SolverReport run_method(const std::string& method, const Objective& obj, const SolverConfig& cfg) {
  if (method == "qnpe") return solve(obj, cfg);
  if (method == "gd") return run_gd(obj, cfg);
  if (method == "bfgs") return run_bfgs(obj, cfg);
  fail(ErrorKind::InvalidArgument, "unknown method '" + method + "'");
}

namespace {

const char* const kConfigKeys[] = {
    "alpha1", "alpha2", "beta",      "sigma0",   "rho",      "delta",    "p",
    "b0",     "oracle_mode", "seed", "max_iters", "grad_tol", "dist_tol", "max_backtracks_slack"};

// Config-related flags shared by every subcommand.
struct ConfigFlags {
  std::string config_file;
  std::map<std::string, std::string> values;

  void attach(CLI::App& app) {
    app.add_option("--config", config_file, "Key=value config file applied before flags");
    for (const char* key : kConfigKeys) {
      std::string names = std::string("--") + key;
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != key) names += ",--" + dashed;
      app.add_option(names, values[key], std::string("Solver config field ") + key);
    }
  }

  SolverConfig resolve(const CLI::App& app) const {
    SolverConfig cfg;
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      if (!in) fail(ErrorKind::IoError, "cannot open config '" + config_file + "'");
      cfg = read_config(in);
    }
    for (const char* key : kConfigKeys) {
      if (app.count(std::string("--") + key) > 0) set_config_field(cfg, key, values.at(key));
    }
    return cfg;
  }
};

std::filesystem::path output_dir(const std::string& flag) {
  std::filesystem::path dir = ".";
  if (!flag.empty()) {
    dir = flag;
  } else if (const char* env = std::getenv("QNPE_OUT_DIR"); env && *env) {
    dir = env;
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::IoError, "cannot create output directory '" + dir.string() + "'");
  return dir;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  return out;
}

void print_certificates(std::ostream& out, const CertificateReport& certs) {
  for (const auto& c : certs.items) {
    out << "  " << c.name << ' ' << to_string(c.status);
    if (c.status != CertStatus::NotApplicable) out << " margin=" << format_double(c.margin);
    if (!c.detail.empty()) out << " (" << c.detail << ')';
    out << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benchmark and verification tool for the QNPE solver", "qnpe_bench"};
  app.require_subcommand(1);

  std::string out_dir_flag;

  // run
  auto* run_cmd = app.add_subcommand("run", "Solve one problem and write trace and summary");
  std::string run_problem, run_method_name = "qnpe", trace_path, summary_path;
  ConfigFlags run_flags;
  run_cmd->add_option("--problem", run_problem, "Problem spec")->required();
  run_cmd->add_option("--method", run_method_name, "qnpe, gd or bfgs");
  run_cmd->add_option("--trace", trace_path, "Trace CSV path");
  run_cmd->add_option("--summary", summary_path, "Summary path");
  run_flags.attach(*run_cmd);
  run_cmd->add_option("--out-dir", out_dir_flag, "Output directory (default $QNPE_OUT_DIR or .)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Solve and check the convergence certificates");
  std::string verify_problem, verify_method = "qnpe";
  int runs = 1;
  double min_pass_rate = 1.0;
  bool trend = false;
  ConfigFlags verify_flags;
  verify_cmd->add_option("--problem", verify_problem, "Problem spec")->required();
  verify_cmd->add_option("--method", verify_method, "qnpe, gd or bfgs");
  verify_cmd->add_option("--runs", runs, "Number of solver seeds, starting at --seed")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--min-pass-rate", min_pass_rate, "Fraction of runs that must pass")
      ->check(CLI::Range(0.0, 1.0));
  verify_cmd->add_flag("--trend", trend, "Also require the superlinear trend test");
  verify_flags.attach(*verify_cmd);

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "Tabulate several methods on one problem");
  std::vector<std::string> compare_specs;
  std::string compare_output;
  ConfigFlags compare_flags;
  compare_cmd->add_option("runs", compare_specs, "METHOD@PROBLEM entries");
  compare_cmd->add_option("--output", compare_output, "Table path");
  compare_flags.attach(*compare_cmd);
  compare_cmd->add_option("--out-dir", out_dir_flag, "Output directory (default $QNPE_OUT_DIR or .)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) {
      const Objective obj = parse_problem_spec(run_problem);
      const SolverReport report = run_method(run_method_name, obj, run_flags.resolve(*run_cmd));
      const auto dir = output_dir(out_dir_flag);
      const auto trace_file = trace_path.empty() ? dir / "trace.csv" : std::filesystem::path(trace_path);
      const auto summary_file =
          summary_path.empty() ? dir / "summary.txt" : std::filesystem::path(summary_path);
      {
        auto f = open_output(trace_file);
        write_trace_csv(f, report);
      }
      // Certificates need the ground truth; generators and mm inputs supply it.
      std::optional<CertificateReport> certs;
      if (obj.minimizer && obj.has_hessian()) certs = verify_trace(report, obj);
      const CertificateReport* cert_ptr = certs ? &*certs : nullptr;
      {
        auto f = open_output(summary_file);
        write_summary(f, report, obj, cert_ptr);
      }
      write_summary(out, report, obj, cert_ptr);
      return 0;
    }

    if (*verify_cmd) {
      const Objective obj = parse_problem_spec(verify_problem);
      const SolverConfig base = verify_flags.resolve(*verify_cmd);
      VerifyOptions opts;
      opts.superlinear_trend = trend;
      int passed = 0;
      for (int i = 0; i < runs; ++i) {
        SolverConfig cfg = base;
        cfg.seed = base.seed + static_cast<std::uint64_t>(i);
        const SolverReport report = run_method(verify_method, obj, cfg);
        const CertificateReport certs = verify_trace(report, obj, opts);
        const bool ok = certs.all_pass();
        passed += ok ? 1 : 0;
        out << "seed=" << cfg.seed << " iterations=" << report.records.size()
            << " termination=" << to_string(report.termination)
            << " all_pass=" << (ok ? "true" : "false") << '\n';
        print_certificates(out, certs);
      }
      const double rate = static_cast<double>(passed) / runs;
      out << "pass_rate=" << passed << '/' << runs << '\n';
      return rate >= min_pass_rate ? 0 : 1;
    }

    if (*compare_cmd) {
      if (compare_specs.size() < 2)
        fail(ErrorKind::ProblemMismatch, "compare needs at least two METHOD@PROBLEM entries");
      const SolverConfig cfg = compare_flags.resolve(*compare_cmd);
      std::vector<std::pair<std::string, SolverReport>> results;
      std::optional<Objective> obj;
      std::string first_spec;
      for (const auto& entry : compare_specs) {
        const auto at = entry.find('@');
        if (at == std::string::npos)
          fail(ErrorKind::ParseError, "expected METHOD@PROBLEM, got '" + entry + "'");
        const std::string method = entry.substr(0, at);
        const std::string spec = entry.substr(at + 1);
        if (!obj) {
          obj = parse_problem_spec(spec);
          first_spec = spec;
        } else if (spec != first_spec && parse_problem_spec(spec).label != obj->label) {
          fail(ErrorKind::ProblemMismatch, "'" + spec + "' differs from '" + first_spec + "'");
        }
        std::string name = method;
        int dup = 1;
        while (std::any_of(results.begin(), results.end(),
                           [&](const auto& r) { return r.first == name; }))
          name = method + "#" + std::to_string(++dup);
        results.emplace_back(name, run_method(method, *obj, cfg));
      }
      std::ostringstream table;
      write_comparison(table, *obj, results);
      const auto file = compare_output.empty() ? output_dir(out_dir_flag) / "compare.dat"
                                               : std::filesystem::path(compare_output);
      auto f = open_output(file);
      f << table.str();
      out << table.str();
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace qnpe
