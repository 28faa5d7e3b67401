#include "biharm/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "biharm/errors.hpp"

namespace biharm::cli {

namespace {

using nlohmann::json;

std::string num(double v) {
  if (!std::isfinite(v)) throw ValidationError("report contains a non-finite value");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quoted(const std::string& s) { return json(s).dump(); }

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file '" + path + "'");
  f << text;
}

int env_jobs() {
  const char* v = std::getenv("BIHARM_JOBS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) throw ValidationError("BIHARM_JOBS must be a positive integer");
  return static_cast<int>(n);
}

}  // namespace

BcScheme parse_scheme(const std::string& name) {
  if (name == "centered") return BcScheme::CenteredMirror;
  if (name == "one-sided") return BcScheme::OneSidedZero;
  throw ValidationError("unknown scheme '" + name + "' (expected centered or one-sided)");
}

TraceVariant parse_variant(const std::string& name) {
  if (name == "centered") return TraceVariant::Centered;
  if (name == "one-sided") return TraceVariant::OneSided;
  throw ValidationError("unknown variant '" + name + "' (expected centered or one-sided)");
}

ReportFormat parse_format(const std::string& name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ValidationError("unknown format '" + name + "' (expected csv or json)");
}

void validate(const RunConfig& c) {
  if (c.dim < 1 || c.dim > kMaxDim) throw SizingError("dim must be in [1, 7]");
  if (c.m_list.empty()) throw ValidationError("m list is empty");
  for (std::size_t k = 0; k < c.m_list.size(); ++k) {
    if (c.m_list[k] < 4) throw SizingError("every m must be >= 4, got " + std::to_string(c.m_list[k]));
    if (k > 0 && c.m_list[k] <= c.m_list[k - 1]) throw ValidationError("m list must be strictly increasing");
  }
  parse_scheme(c.scheme);
  parse_variant(c.variant);
  const auto names = manufactured_names();
  if (std::find(names.begin(), names.end(), c.case_name) == names.end())
    throw ValidationError("unknown case '" + c.case_name + "'");
  if (!(c.tol > 0.0 && c.tol < 1.0)) throw ValidationError("tol must be in (0, 1)");
  if (c.maxit < 0) throw ValidationError("maxit must be >= 1 (0 selects the default)");
  if (c.jobs < 1) throw ValidationError("jobs must be >= 1");
}

RunConfig load_config(const std::string& path, RunConfig c) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "dim") c.dim = value.get<int>();
      else if (key == "m") c.m_list = value.get<std::vector<int>>();
      else if (key == "scheme") c.scheme = value.get<std::string>();
      else if (key == "case") c.case_name = value.get<std::string>();
      else if (key == "tol") c.tol = value.get<double>();
      else if (key == "maxit") c.maxit = value.get<int>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "format") c.format = parse_format(value.get<std::string>());
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "jobs") c.jobs = value.get<int>();
      else if (key == "jacobi") c.jacobi = value.get<bool>();
      else if (key == "variant") c.variant = value.get<std::string>();
      else throw ValidationError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config value has the wrong type: ") + e.what());
  }
  return c;
}

std::string emit_report(const ConvergenceReport& r, ReportFormat format) {
  if (r.entries.empty()) throw ValidationError("report has an empty ladder");
  std::ostringstream os;
  if (format == ReportFormat::Csv) {
    os << "m,h,error_h2h,pairwise_rate,cg_iters\n";
    for (std::size_t k = 0; k < r.entries.size(); ++k) {
      const LadderEntry& e = r.entries[k];
      os << e.m << ',' << num(e.h) << ',' << num(e.error_h2h) << ',';
      if (k > 0) os << num(r.pairwise_rates.at(k - 1));
      os << ',' << e.cg_iters << '\n';
    }
    os << "# fitted_rate=" << num(r.fitted_rate) << '\n';
    return os.str();
  }
  os << "{\n";
  os << "  \"case\": " << quoted(r.case_name) << ",\n";
  os << "  \"scheme\": " << quoted(r.scheme) << ",\n";
  os << "  \"dim\": " << r.dim << ",\n";
  os << "  \"tol\": " << num(r.tol) << ",\n";
  os << "  \"complete\": " << (r.complete ? "true" : "false") << ",\n";
  os << "  \"failure\": " << quoted(r.failure) << ",\n";
  os << "  \"entries\": [\n";
  for (std::size_t k = 0; k < r.entries.size(); ++k) {
    const LadderEntry& e = r.entries[k];
    os << "    {\"m\": " << e.m << ", \"h\": " << num(e.h) << ", \"error_h2h\": " << num(e.error_h2h)
       << ", \"cg_iters\": " << e.cg_iters << ", \"cg_residual\": " << num(e.cg_residual) << "}"
       << (k + 1 < r.entries.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"pairwise_rates\": [";
  for (std::size_t k = 0; k < r.pairwise_rates.size(); ++k)
    os << (k ? ", " : "") << num(r.pairwise_rates[k]);
  os << "],\n";
  os << "  \"fitted_rate\": " << num(r.fitted_rate) << "\n";
  os << "}\n";
  return os.str();
}

ConvergenceReport parse_report_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    ConvergenceReport r;
    r.case_name = j.at("case").get<std::string>();
    r.scheme = j.at("scheme").get<std::string>();
    r.dim = j.at("dim").get<int>();
    r.tol = j.at("tol").get<double>();
    r.complete = j.at("complete").get<bool>();
    r.failure = j.at("failure").get<std::string>();
    for (const json& e : j.at("entries"))
      r.entries.push_back(LadderEntry{e.at("m").get<int>(), e.at("h").get<double>(),
                                      e.at("error_h2h").get<double>(), e.at("cg_iters").get<int>(),
                                      e.at("cg_residual").get<double>()});
    r.pairwise_rates = j.at("pairwise_rates").get<std::vector<double>>();
    r.fitted_rate = j.at("fitted_rate").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string emit_boundary_report(const BoundaryScalingReport& r, ReportFormat format) {
  if (r.rows.empty()) throw ValidationError("report has an empty ladder");
  const char* variant = r.variant == TraceVariant::Centered ? "centered" : "one-sided";
  std::ostringstream os;
  if (format == ReportFormat::Csv) {
    os << "m,h,norm,seminorm,l2,pairwise_rate\n";
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
      const BoundaryScalingRow& row = r.rows[k];
      os << row.m << ',' << num(row.h) << ',' << num(row.norm) << ',' << num(row.seminorm) << ','
         << num(row.l2) << ',';
      if (k > 0) os << num(r.pairwise_rates.at(k - 1));
      os << '\n';
    }
    os << "# fitted_rate=" << num(r.fitted_rate) << '\n';
    return os.str();
  }
  os << "{\n  \"variant\": \"" << variant << "\",\n  \"axis\": " << r.axis << ",\n  \"rows\": [\n";
  for (std::size_t k = 0; k < r.rows.size(); ++k) {
    const BoundaryScalingRow& row = r.rows[k];
    os << "    {\"m\": " << row.m << ", \"h\": " << num(row.h) << ", \"norm\": " << num(row.norm)
       << ", \"seminorm\": " << num(row.seminorm) << ", \"l2\": " << num(row.l2) << "}"
       << (k + 1 < r.rows.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"pairwise_rates\": [";
  for (std::size_t k = 0; k < r.pairwise_rates.size(); ++k)
    os << (k ? ", " : "") << num(r.pairwise_rates[k]);
  os << "],\n  \"fitted_rate\": " << num(r.fitted_rate) << "\n}\n";
  return os.str();
}

namespace {

struct Flags {
  std::string config;
  int dim = 2;
  std::vector<int> m;
  std::string scheme, case_name, out, format, variant;
  double tol = 1e-10;
  int maxit = 0;
  std::uint64_t seed = 7;
  int jobs = 1;
  bool jacobi = false;
  int pairs = 20;
  std::vector<std::pair<std::string, CLI::Option*>> options;
};

void add_common(CLI::App* app, Flags& f) {
  f.options.emplace_back("config", app->add_option("--config", f.config, "JSON file with RunConfig fields"));
  f.options.emplace_back("dim", app->add_option("--dim", f.dim, "Spatial dimension n"));
  f.options.emplace_back("m", app->add_option("--m", f.m, "Grid sizes m = 1/h, comma separated")->delimiter(','));
  f.options.emplace_back("case", app->add_option("--case", f.case_name, "Manufactured case"));
  f.options.emplace_back("tol", app->add_option("--tol", f.tol, "CG relative residual tolerance"));
  f.options.emplace_back("maxit", app->add_option("--maxit", f.maxit, "CG iteration cap (0: default)"));
  f.options.emplace_back("out", app->add_option("--out", f.out, "Output path (default: stdout)"));
  f.options.emplace_back("format", app->add_option("--format", f.format, "csv or json (default from --out)"));
  f.options.emplace_back("seed", app->add_option("--seed", f.seed, "Seed for random probes"));
  f.options.emplace_back("jobs", app->add_option("--jobs", f.jobs, "Concurrent ladder entries"));
  f.options.emplace_back("jacobi", app->add_flag("--jacobi", f.jacobi, "Diagonal preconditioner"));
}

RunConfig resolve(const Flags& f) {
  RunConfig c;
  const int env = env_jobs();
  if (env > 0) c.jobs = env;
  auto given = [&](const std::string& name) {
    for (const auto& [key, opt] : f.options)
      if (key == name) return opt->count() > 0;
    return false;
  };
  if (given("config")) c = load_config(f.config, c);
  bool format_given = false;
  if (given("dim")) c.dim = f.dim;
  if (given("m")) c.m_list = f.m;
  if (given("scheme")) c.scheme = f.scheme;
  if (given("case")) c.case_name = f.case_name;
  if (given("tol")) c.tol = f.tol;
  if (given("maxit")) c.maxit = f.maxit;
  if (given("out")) c.out = f.out;
  if (given("format")) {
    c.format = parse_format(f.format);
    format_given = true;
  }
  if (given("seed")) c.seed = f.seed;
  if (given("jobs")) c.jobs = f.jobs;
  if (given("jacobi")) c.jacobi = f.jacobi;
  if (given("variant")) c.variant = f.variant;
  if (!format_given && ends_with(c.out, ".json")) c.format = ReportFormat::Json;
  validate(c);
  return c;
}

SolveOptions solver_options(const RunConfig& c) {
  SolveOptions o;
  o.tol = c.tol;
  o.maxit = c.maxit;
  o.jacobi = c.jacobi;
  return o;
}

int cmd_solve(const RunConfig& c, std::ostream& out) {
  if (c.m_list.size() != 1) throw ValidationError("solve takes a single --m value");
  const ManufacturedCase mc = manufactured_pair(c.case_name, c.dim);
  const GridSpec grid = build_grid(c.dim, c.m_list.front());
  const BcScheme scheme = parse_scheme(c.scheme);
  const SolveResult s = solve(mc.f, grid, scheme, solver_options(c));
  LatticeField e = LatticeField::sample(grid, mc.u_exact);
  for (std::size_t k = 0; k < e.size(); ++k) e[k] -= s.solution[k];
  const double err = h2h_norm(e);
  const double l2 = l2h_norm(s.solution, PointSet::Interior);

  std::ostringstream os;
  if (c.format == ReportFormat::Csv) {
    os << "case,scheme,dim,m,h,cg_iters,cg_residual,error_h2h,solution_l2h\n"
       << mc.name << ',' << to_string(scheme) << ',' << c.dim << ',' << grid.m() << ',' << num(grid.h())
       << ',' << s.iterations << ',' << num(s.residual) << ',' << num(err) << ',' << num(l2) << '\n';
  } else {
    os << "{\n  \"case\": " << quoted(mc.name) << ",\n  \"scheme\": " << quoted(to_string(scheme))
       << ",\n  \"dim\": " << c.dim << ",\n  \"m\": " << grid.m() << ",\n  \"h\": " << num(grid.h())
       << ",\n  \"cg_iters\": " << s.iterations << ",\n  \"cg_residual\": " << num(s.residual)
       << ",\n  \"error_h2h\": " << num(err) << ",\n  \"solution_l2h\": " << num(l2) << "\n}\n";
  }
  write_output(os.str(), c.out, out);
  return 0;
}

int cmd_study(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ManufacturedCase mc = manufactured_pair(c.case_name, c.dim);
  StudyOptions o;
  o.solver = solver_options(c);
  o.jobs = c.jobs;
  const ConvergenceReport r = convergence_study(mc, parse_scheme(c.scheme), c.m_list, o);
  if (!r.entries.empty()) write_output(emit_report(r, c.format), c.out, out);
  if (!r.complete) {
    err << "study aborted: " << r.failure << '\n';
    return 2;
  }
  return 0;
}

int cmd_verify(const RunConfig& c, int pairs, std::ostream& out) {
  if (c.m_list.size() != 1) throw ValidationError("verify takes a single --m value");
  if (pairs < 1) throw ValidationError("pairs must be >= 1");
  const auto results = verify_suite(c.dim, c.m_list.front(), c.seed, pairs);
  std::ostringstream os;
  int failed = 0;
  for (const ProbeResult& p : results) {
    os << (p.passed ? "PASS " : "FAIL ") << p.name << " value=" << num(p.value) << " tol=";
    os << (std::isfinite(p.tolerance) ? num(p.tolerance) : std::string("finite")) << '\n';
    failed += p.passed ? 0 : 1;
  }
  os << (failed == 0 ? "verify: all " + std::to_string(results.size()) + " probes passed"
                     : "verify: " + std::to_string(failed) + " of " + std::to_string(results.size()) +
                           " probes failed")
     << '\n';
  write_output(os.str(), c.out, out);
  return failed == 0 ? 0 : 2;
}

int cmd_boundary(const RunConfig& c, std::ostream& out) {
  if (c.dim < 2) throw SizingError("boundary-scaling needs dim >= 2");
  const ManufacturedCase mc = manufactured_pair(c.case_name, c.dim);
  const TensorProduct local = ends_with(mc.name, "-local") ? mc.u : localize(mc.u);
  const TensorProduct ut = extend_even(local);
  const BoundaryScalingReport r =
      boundary_scaling_study(ut.as_source(), c.dim, c.m_list, parse_variant(c.variant), c.dim - 1);
  write_output(emit_boundary_report(r, c.format), c.out, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-difference biharmonic solver and verification harness", "biharm"};
  app.require_subcommand(1);
  Flags solve_f, study_f, verify_f, boundary_f;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve once on a single grid and summarize");
  add_common(solve_cmd, solve_f);
  solve_f.options.emplace_back("scheme", solve_cmd->add_option("--scheme", solve_f.scheme, "centered or one-sided"));

  CLI::App* study_cmd = app.add_subcommand("study", "Convergence study over a ladder of grids");
  add_common(study_cmd, study_f);
  study_f.options.emplace_back("scheme", study_cmd->add_option("--scheme", study_f.scheme, "centered or one-sided"));

  CLI::App* verify_cmd = app.add_subcommand("verify", "Identity, Poincare, commutation and trace probes");
  add_common(verify_cmd, verify_f);
  verify_cmd->add_option("--pairs", verify_f.pairs, "Random field pairs per probe");

  CLI::App* boundary_cmd = app.add_subcommand("boundary-scaling", "H^1/2 norms of face data across a ladder");
  add_common(boundary_cmd, boundary_f);
  boundary_f.options.emplace_back(
      "variant", boundary_cmd->add_option("--variant", boundary_f.variant, "centered or one-sided"));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (solve_cmd->parsed()) {
      RunConfig c = resolve(solve_f);
      if (!solve_cmd->get_option("--m")->count() && solve_f.config.empty()) c.m_list = {16};
      return cmd_solve(c, out);
    }
    if (study_cmd->parsed()) return cmd_study(resolve(study_f), out, err);
    if (verify_cmd->parsed()) {
      RunConfig c = resolve(verify_f);
      if (!verify_cmd->get_option("--m")->count() && verify_f.config.empty()) c.m_list = {8};
      return cmd_verify(c, verify_f.pairs, out);
    }
    if (boundary_cmd->parsed()) return cmd_boundary(resolve(boundary_f), out);
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const QuadratureError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const ConstructionError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace biharm::cli
