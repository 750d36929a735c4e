#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "perron/rate.hpp"
#include "perron/solver.hpp"

namespace perron {

using Json = nlohmann::ordered_json;

/// Per-problem solver settings carried in the problem file; command-line
/// flags override them.
struct SolverOverrides {
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<std::uint64_t> seed;
  std::optional<int> starts;
  std::optional<double> damping;
};

/// Parsed problem file (format 1): either a tensor with norm weights or a
/// polynomial map with exponents delta, norm order p and scale a.  Indices
/// in files are 0-based.
struct ProblemFile {
  int format = 1;
  std::string kind;  // "tensor" | "polymap"

  // tensor problems
  std::vector<int> dims;
  std::vector<TensorEntry> entries;
  std::vector<double> p;

  // polymap problems
  int n = 0;
  std::vector<std::vector<Monomial>> components;
  std::vector<double> deltas;
  double pnorm = 2.0;
  double a = 1.0;

  std::vector<double> psi;  // empty -> all-ones
  SolverOverrides solver;

  bool is_tensor() const { return kind == "tensor"; }

  NonnegTensor to_tensor() const;
  NormWeights to_weights() const;
  PolynomialMap to_poly() const;
  MonotoneMap to_map() const;
  SolverConfig to_config() const;
};

ProblemFile parse_problem(const std::string& path);
ProblemFile parse_problem_text(const std::string& text,
                               const std::string& origin);

/// Canonical serialized form (entries sorted, defaults materialized);
/// serialize(parse(f)) is a fixed point.
std::string serialize_problem(const ProblemFile& pf);

/// Flag values collected by the CLI; every field overrides the problem
/// file's setting when present.
struct CommandFlags {
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<std::uint64_t> seed;
  std::optional<int> starts;
  std::optional<double> damping;
  std::vector<double> p_override;
  std::vector<double> psi_override;
  bool allow_nonprimitive = false;
  std::optional<std::string> candidate_path;  // verify
  std::optional<double> lambda;               // verify
  double verify_tol = 1e-8;                   // verify
};

/// Exit codes used by the CLI; every error class gets its own code.
enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kParseError = 2,
  kValidationError = 3,
  kNotPrimitive = 4,
  kNonMonotone = 5,
  kNotConverged = 6,
  kVerifyFailed = 7,
};

/// Dispatch cmd in {check, solve, search, rate, verify} onto the library
/// and build the machine-readable report.  Throws the library error types;
/// non-convergence and failed verification are reported via the returned
/// exit code with a complete report.
std::pair<Json, int> run_command(const std::string& cmd, const ProblemFile& pf,
                                 const CommandFlags& flags);

/// Round to 12 significant digits (report number format).
double round12(double v);

std::string render_report(const Json& report);

}  // namespace perron
