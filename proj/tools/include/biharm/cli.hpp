#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "biharm/analysis.hpp"

namespace biharm::cli {

enum class ReportFormat { Csv, Json };

struct RunConfig {
  int dim = 2;
  std::vector<int> m_list{8, 16, 32, 64};
  std::string scheme = "centered";
  std::string case_name = "sine4";
  double tol = 1e-10;
  int maxit = 0;  ///< 0: default_maxit per grid
  std::string out;  ///< empty: standard output
  ReportFormat format = ReportFormat::Csv;
  std::uint64_t seed = 7;
  int jobs = 1;
  bool jacobi = false;
  std::string variant = "centered";  ///< boundary-scaling data: centered | one-sided
};

/// Throws ValidationError / SizingError for values outside module preconditions.
void validate(const RunConfig& config);

BcScheme parse_scheme(const std::string& name);
TraceVariant parse_variant(const std::string& name);
ReportFormat parse_format(const std::string& name);

/// Reads the JSON form of RunConfig; unknown keys are rejected.
RunConfig load_config(const std::string& path, RunConfig base = {});

/// CSV: header "m,h,error_h2h,pairwise_rate,cg_iters", one row per ladder
/// entry (the first rate is empty) and "# fitted_rate=<value>". JSON keys
/// mirror ConvergenceReport. Floats are written with 17 significant digits.
/// ValidationError for an empty ladder or a non-finite value.
std::string emit_report(const ConvergenceReport& report, ReportFormat format);
ConvergenceReport parse_report_json(const std::string& text);

std::string emit_boundary_report(const BoundaryScalingReport& report, ReportFormat format);

/// Entry point; args excludes the program name. Returns 0 on success, 1 on
/// validation errors (including malformed flags), 2 on numerical failures.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biharm::cli
