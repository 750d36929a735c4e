#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include <nlohmann/json.hpp>

#include "perron/io.hpp"

namespace {

// Writes the report to --output (or stdout) and a one-line human summary
// to stderr.  Part and coordinate labels in the summary are 1-based; file
// and report indices are 0-based.
void emit(const perron::Json& report, const std::optional<std::string>& out) {
  std::string text = perron::render_report(report);
  if (out) {
    std::ofstream f(*out);
    if (!f) throw perron::ParseError(*out + ": cannot open for writing");
    f << text;
  } else {
    std::cout << text;
  }
}

void summarize(const perron::Json& report) {
  std::ostringstream os;
  os << report.value("command", "?") << ": " << report.value("status", "?");
  if (report.contains("solutions"))
    os << ", " << report["solutions"].size() << " solution(s)";
  if (report.contains("structure")) {
    const auto& s = report["structure"];
    os << ", weakly_irreducible=" << s["weakly_irreducible"]
       << " irreducible=" << s["irreducible"]
       << " weakly_primitive=" << s["weakly_primitive"];
  }
  if (report.contains("rate"))
    os << ", rate=" << report["rate"]["rate"]
       << " empirical=" << report["rate"]["empirical_rate"];
  std::cerr << os.str() << "\n";
}

int dispatch(const std::string& cmd, const std::string& problem_path,
             const perron::CommandFlags& flags,
             const std::optional<std::string>& output) {
  perron::ProblemFile pf = perron::parse_problem(problem_path);
  auto [report, code] = perron::run_command(cmd, pf, flags);
  emit(report, output);
  summarize(report);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Perron-Frobenius eigenproblems for nonnegative multilinear forms and "
      "polynomial maps: structure checks, the psi-normalized power "
      "algorithm with Collatz-Wielandt certificates, multi-start search and "
      "spectral-gap convergence rates.\n"
      "Problem files are JSON (format 1) with 0-based indices; summaries "
      "printed to stderr use 1-based labels."};
  app.require_subcommand(1);

  std::string problem_path;
  std::optional<std::string> output;
  perron::CommandFlags flags;
  std::vector<double> p_override, psi_override;
  double tol = 0, damping = 0;
  int max_iter = 0, starts = 0;
  long long seed = 0;
  std::string candidate;
  double lambda = 0;
  double verify_tol = 1e-8;

  auto add_common = [&](CLI::App* sub, bool solver_flags) {
    sub->add_option("problem", problem_path, "problem file (JSON)")
        ->required();
    sub->add_option("--output", output, "write the report to this file");
    sub->add_option("--p", p_override,
                    "override the norm exponents (list for tensors, one "
                    "value for polynomial maps)")
        ->delimiter(',');
    if (solver_flags) {
      sub->add_option("--psi", psi_override,
                      "normalization functional (strictly positive)")
          ->delimiter(',');
      sub->add_option("--tol", tol, "convergence tolerance");
      sub->add_option("--max-iter", max_iter, "iteration cap");
      sub->add_option("--seed", seed, "random seed");
      sub->add_option("--damping", damping, "damping theta in (0,1]");
      sub->add_flag("--allow-nonprimitive", flags.allow_nonprimitive,
                    "proceed on strongly connected but imprimitive systems");
    }
  };

  CLI::App* check = app.add_subcommand(
      "check", "structure verdicts: weak irreducibility, irreducibility, "
               "weak primitivity");
  add_common(check, false);

  CLI::App* solve = app.add_subcommand(
      "solve", "power algorithm with Collatz-Wielandt certificates");
  add_common(solve, true);

  CLI::App* search = app.add_subcommand(
      "search", "multi-start damped search for the non-unique regime");
  add_common(search, true);
  search->add_option("--starts", starts, "number of random starts");

  CLI::App* rate = app.add_subcommand(
      "rate", "spectral-gap convergence rate at the computed eigenvector");
  add_common(rate, true);

  CLI::App* verify = app.add_subcommand(
      "verify", "check a candidate solution against the raw eigen-system");
  add_common(verify, false);
  verify->add_option("--candidate", candidate,
                     "candidate file with \"x\" or \"blocks\" (JSON)")
      ->required();
  verify->add_option("--lambda", lambda,
                     "eigenvalue (least-squares fitted when omitted)");
  verify->add_option("--tol", verify_tol, "verification tolerance");

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  auto given = [&](const char* name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  flags.p_override = p_override;
  flags.psi_override = psi_override;
  if (given("--tol") && sub != verify) flags.tol = tol;
  if (given("--max-iter")) flags.max_iter = max_iter;
  if (given("--seed")) flags.seed = static_cast<std::uint64_t>(seed);
  if (given("--starts")) flags.starts = starts;
  if (given("--damping")) flags.damping = damping;
  if (sub == verify) {
    flags.candidate_path = candidate;
    if (sub->count("--lambda")) flags.lambda = lambda;
    flags.verify_tol = verify_tol;
  }

  try {
    return dispatch(sub->get_name(), problem_path, flags, output);
  } catch (const perron::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return perron::kParseError;
  } catch (const perron::NotPrimitiveError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return perron::kNotPrimitive;
  } catch (const perron::NonMonotoneError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return perron::kNonMonotone;
  } catch (const perron::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return perron::kValidationError;
  } catch (const perron::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return perron::kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return perron::kInternalError;
  }
}
