#include "perron/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace perron {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ParseError(origin + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& origin) {
  if (!j.contains(key)) fail(origin, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number_at(const Json& j, const std::string& where,
                 const std::string& origin) {
  if (!j.is_number()) fail(origin, where + ": expected a number");
  return j.get<double>();
}

int integer_at(const Json& j, const std::string& where,
               const std::string& origin) {
  if (!j.is_number_integer()) fail(origin, where + ": expected an integer");
  return j.get<int>();
}

std::vector<double> number_list(const Json& j, const std::string& where,
                                const std::string& origin) {
  if (!j.is_array()) fail(origin, where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(number_at(j[k], where + "[" + std::to_string(k) + "]", origin));
  return out;
}

std::vector<int> integer_list(const Json& j, const std::string& where,
                              const std::string& origin) {
  if (!j.is_array()) fail(origin, where + ": expected an array of integers");
  std::vector<int> out;
  for (std::size_t k = 0; k < j.size(); ++k)
    out.push_back(integer_at(j[k], where + "[" + std::to_string(k) + "]", origin));
  return out;
}

Json dump_number(double v) { return round12(v); }

Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(dump_number(v[i]));
  return arr;
}

Json blocks_json(const std::vector<Vector>& blocks) {
  Json arr = Json::array();
  for (const auto& b : blocks) arr.push_back(vector_json(b));
  return arr;
}

std::string verdict_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    default: return "skipped";
  }
}

}  // namespace

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", v);
  return std::strtod(buf, nullptr);
}

ProblemFile parse_problem_text(const std::string& text,
                               const std::string& origin) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(origin, std::string("invalid JSON at byte ") +
                     std::to_string(e.byte) + ": " + e.what());
  }
  if (!j.is_object()) fail(origin, "problem file must be a JSON object");

  ProblemFile pf;
  pf.format = integer_at(field(j, "format", origin), "format", origin);
  if (pf.format != 1)
    fail(origin, "unsupported format " + std::to_string(pf.format));
  const Json& kind = field(j, "kind", origin);
  if (!kind.is_string()) fail(origin, "kind: expected a string");
  pf.kind = kind.get<std::string>();

  if (pf.kind == "tensor") {
    pf.dims = integer_list(field(j, "dims", origin), "dims", origin);
    const Json& entries = field(j, "entries", origin);
    if (!entries.is_array()) fail(origin, "entries: expected an array");
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const std::string where = "entries[" + std::to_string(k) + "]";
      const Json& e = entries[k];
      if (!e.is_array() || e.size() != 2)
        fail(origin, where + ": expected [index, value]");
      TensorEntry te;
      te.index = integer_list(e[0], where + ".index", origin);
      te.value = number_at(e[1], where + ".value", origin);
      if (te.value < 0.0)
        fail(origin, where + ": negative coefficient " +
                         std::to_string(te.value));
      pf.entries.push_back(std::move(te));
    }
    pf.p = number_list(field(j, "p", origin), "p", origin);
  } else if (pf.kind == "polymap") {
    pf.n = integer_at(field(j, "n", origin), "n", origin);
    const Json& comps = field(j, "components", origin);
    if (!comps.is_array()) fail(origin, "components: expected an array");
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string cwhere = "components[" + std::to_string(i) + "]";
      if (!comps[i].is_array()) fail(origin, cwhere + ": expected an array");
      std::vector<Monomial> comp;
      for (std::size_t k = 0; k < comps[i].size(); ++k) {
        const std::string where = cwhere + "[" + std::to_string(k) + "]";
        const Json& m = comps[i][k];
        if (!m.is_array() || m.size() != 2)
          fail(origin, where + ": expected [exponents, coefficient]");
        Monomial mono;
        mono.exponents = integer_list(m[0], where + ".exponents", origin);
        mono.coefficient = number_at(m[1], where + ".coefficient", origin);
        if (mono.coefficient < 0.0)
          fail(origin, where + ": negative coefficient " +
                           std::to_string(mono.coefficient));
        comp.push_back(std::move(mono));
      }
      pf.components.push_back(std::move(comp));
    }
    pf.deltas = number_list(field(j, "deltas", origin), "deltas", origin);
    pf.pnorm = number_at(field(j, "p", origin), "p", origin);
    if (j.contains("a")) pf.a = number_at(j.at("a"), "a", origin);
  } else {
    fail(origin, "kind must be \"tensor\" or \"polymap\", got \"" + pf.kind +
                     "\"");
  }

  if (j.contains("psi")) pf.psi = number_list(j.at("psi"), "psi", origin);
  if (j.contains("solver")) {
    const Json& s = j.at("solver");
    if (!s.is_object()) fail(origin, "solver: expected an object");
    if (s.contains("tol"))
      pf.solver.tol = number_at(s.at("tol"), "solver.tol", origin);
    if (s.contains("max_iter"))
      pf.solver.max_iter =
          integer_at(s.at("max_iter"), "solver.max_iter", origin);
    if (s.contains("seed"))
      pf.solver.seed = static_cast<std::uint64_t>(
          integer_at(s.at("seed"), "solver.seed", origin));
    if (s.contains("starts"))
      pf.solver.starts = integer_at(s.at("starts"), "solver.starts", origin);
    if (s.contains("damping"))
      pf.solver.damping = number_at(s.at("damping"), "solver.damping", origin);
  }

  // materialize the core types once so invalid data is rejected here with
  // the file name attached
  try {
    if (pf.is_tensor()) {
      pf.to_tensor();
      pf.to_weights();
    } else {
      PolynomialMap P = pf.to_poly();
      if (static_cast<int>(pf.deltas.size()) != P.dimension())
        throw ValidationError("deltas length does not match n");
      for (int i = 0; i < P.dimension(); ++i)
        if (!(pf.deltas[i] >= P.degrees()[i]))
          throw ValidationError(
              "deltas[" + std::to_string(i) + "] = " +
              std::to_string(pf.deltas[i]) + " is below the component degree " +
              std::to_string(P.degrees()[i]));
      if (!(pf.pnorm > 0.0)) throw ValidationError("p must be positive");
      if (!(pf.a > 0.0)) throw ValidationError("a must be positive");
    }
  } catch (const Error& e) {
    fail(origin, e.what());
  }
  return pf;
}

ProblemFile parse_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str(), path);
}

NonnegTensor ProblemFile::to_tensor() const {
  return NonnegTensor(dims, entries);
}

NormWeights ProblemFile::to_weights() const { return NormWeights(p); }

PolynomialMap ProblemFile::to_poly() const {
  return PolynomialMap(n, components);
}

MonotoneMap ProblemFile::to_map() const {
  if (is_tensor()) return build_tensor_map(to_tensor(), to_weights());
  return build_poly_map(to_poly(), deltas, pnorm, a);
}

SolverConfig ProblemFile::to_config() const {
  SolverConfig cfg;
  if (!psi.empty())
    cfg.psi = Eigen::Map<const Vector>(psi.data(), psi.size());
  if (solver.tol) cfg.tol = *solver.tol;
  if (solver.max_iter) cfg.max_iter = *solver.max_iter;
  if (solver.seed) cfg.seed = *solver.seed;
  if (solver.starts) cfg.starts = *solver.starts;
  if (solver.damping) cfg.damping = *solver.damping;
  return cfg;
}

std::string serialize_problem(const ProblemFile& pf) {
  Json j;
  j["format"] = 1;
  j["kind"] = pf.kind;
  if (pf.is_tensor()) {
    NonnegTensor T = pf.to_tensor();  // sorted, validated, zeros dropped
    j["dims"] = T.dims();
    Json entries = Json::array();
    for (const auto& e : T.entries())
      entries.push_back(Json::array({e.index, e.value}));
    j["entries"] = std::move(entries);
    j["p"] = pf.p;
  } else {
    PolynomialMap P = pf.to_poly();
    j["n"] = P.dimension();
    Json comps = Json::array();
    for (const auto& comp : P.components()) {
      Json c = Json::array();
      for (const auto& m : comp)
        c.push_back(Json::array({m.exponents, m.coefficient}));
      comps.push_back(std::move(c));
    }
    j["components"] = std::move(comps);
    j["deltas"] = pf.deltas;
    j["p"] = pf.pnorm;
    j["a"] = pf.a;
  }
  if (!pf.psi.empty()) j["psi"] = pf.psi;
  Json s = Json::object();
  if (pf.solver.tol) s["tol"] = *pf.solver.tol;
  if (pf.solver.max_iter) s["max_iter"] = *pf.solver.max_iter;
  if (pf.solver.seed) s["seed"] = static_cast<long long>(*pf.solver.seed);
  if (pf.solver.starts) s["starts"] = *pf.solver.starts;
  if (pf.solver.damping) s["damping"] = *pf.solver.damping;
  if (!s.empty()) j["solver"] = std::move(s);
  return j.dump(2) + "\n";
}

namespace {

SolverConfig merge_config(const ProblemFile& pf, const CommandFlags& flags) {
  SolverConfig cfg = pf.to_config();
  if (flags.tol) cfg.tol = *flags.tol;
  if (flags.max_iter) cfg.max_iter = *flags.max_iter;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.starts) cfg.starts = *flags.starts;
  if (flags.damping) cfg.damping = *flags.damping;
  if (!flags.psi_override.empty())
    cfg.psi = Eigen::Map<const Vector>(flags.psi_override.data(),
                                       flags.psi_override.size());
  return cfg;
}

ProblemFile apply_p_override(ProblemFile pf, const CommandFlags& flags) {
  if (flags.p_override.empty()) return pf;
  if (pf.is_tensor()) {
    if (flags.p_override.size() == 1)
      pf.p.assign(pf.dims.size(), flags.p_override.front());
    else
      pf.p = flags.p_override;
  } else {
    pf.pnorm = flags.p_override.front();
  }
  return pf;
}

Json witness_json(const std::vector<int>& witness) {
  Json arr = Json::array();
  for (int v : witness) arr.push_back(v);
  return arr;
}

Json structure_json(const StructureReport& rep) {
  Json s;
  s["weakly_irreducible"] = rep.weakly_irreducible.connected;
  if (!rep.weakly_irreducible.connected)
    s["weakly_irreducible_witness"] =
        witness_json(rep.weakly_irreducible.witness);
  s["irreducible"] = verdict_string(rep.irreducible.verdict);
  if (rep.irreducible.verdict == Verdict::False)
    s["irreducible_witness"] = witness_json(rep.irreducible.witness);
  s["weakly_primitive"] = rep.weakly_primitive.weakly_primitive;
  s["strongly_connected"] = rep.weakly_primitive.strongly_connected;
  s["cyclicity"] = static_cast<long long>(rep.weakly_primitive.cyclicity);
  if (!rep.weakly_primitive.strongly_connected)
    s["scc_witness"] = witness_json(rep.weakly_primitive.scc_witness);
  return s;
}

Json verify_json(const VerifyReport& v) {
  Json j;
  j["lambda"] = dump_number(v.lambda);
  j["lambda_fitted"] = v.lambda_fitted;
  j["equation_residual"] = dump_number(v.equation_residual);
  Json norms = Json::array();
  for (double d : v.norm_residuals) norms.push_back(dump_number(d));
  j["norm_residuals"] = std::move(norms);
  j["tol"] = dump_number(v.tol);
  j["pass"] = v.pass;
  return j;
}

VerifyReport verify_for(const ProblemFile& pf, const Vector& u,
                        std::optional<double> lambda, double tol) {
  if (pf.is_tensor()) {
    NonnegTensor T = pf.to_tensor();
    return verify_solution(T, pf.to_weights(), BlockVector::split(T, u),
                           lambda, tol);
  }
  return verify_solution(pf.to_poly(), pf.deltas, pf.pnorm, pf.a, u, lambda,
                         tol);
}

Json solution_json(const ProblemFile& pf, const EigenSolution& sol) {
  Json j;
  j["mu"] = dump_number(sol.mu);
  j["lambda"] = dump_number(sol.lambda);
  j["u"] = vector_json(sol.u);
  j["blocks"] = blocks_json(sol.blocks);
  j["iterations"] = sol.iterations;
  j["residual"] = dump_number(sol.residual);
  if (!sol.cw_trace.empty()) {
    Json cw;
    cw["iterations"] = static_cast<long long>(sol.cw_trace.size());
    cw["first"] = Json::array({dump_number(sol.cw_trace.front().first),
                               dump_number(sol.cw_trace.front().second)});
    cw["final"] = Json::array({dump_number(sol.cw_trace.back().first),
                               dump_number(sol.cw_trace.back().second)});
    double rel = (sol.cw_trace.back().second - sol.cw_trace.back().first) /
                 sol.cw_trace.back().second;
    cw["final_relative_gap"] = dump_number(rel);
    j["collatz_wielandt"] = std::move(cw);
  }
  if (sol.nonprimitive_override) j["nonprimitive_override"] = true;

  // re-verify the block-normalized representative exactly as reported
  Vector rep_vec;
  if (pf.is_tensor()) {
    int n = 0;
    for (const auto& b : sol.blocks) n += static_cast<int>(b.size());
    rep_vec.resize(n);
    int at = 0;
    for (const auto& b : sol.blocks) {
      rep_vec.segment(at, b.size()) = b;
      at += static_cast<int>(b.size());
    }
  } else {
    rep_vec = sol.blocks.front();
  }
  for (int i = 0; i < rep_vec.size(); ++i) rep_vec[i] = round12(rep_vec[i]);
  VerifyReport vr = verify_for(pf, rep_vec, std::nullopt, 0.0);
  // the stated residual covers the rounded vector as printed
  double worst = vr.equation_residual;
  for (double d : vr.norm_residuals) worst = std::max(worst, d);
  double printed = round12(worst * (1.0 + 1e-11));
  vr.tol = printed;
  vr.pass = vr.equation_residual <= printed &&
            std::all_of(vr.norm_residuals.begin(), vr.norm_residuals.end(),
                        [printed](double d) { return d <= printed; });
  j["verify"] = verify_json(vr);
  return j;
}

}  // namespace

std::pair<Json, int> run_command(const std::string& cmd, const ProblemFile& pf0,
                                 const CommandFlags& flags) {
  ProblemFile pf = apply_p_override(pf0, flags);
  Json rep;
  rep["format"] = 1;
  rep["command"] = cmd;
  rep["kind"] = pf.kind;
  int exit_code = kOk;

  if (cmd == "check") {
    StructureReport sr =
        pf.is_tensor() ? analyze_tensor(pf.to_tensor()) : analyze_poly(pf.to_poly());
    rep["structure"] = structure_json(sr);
    if (pf.is_tensor()) {
      NormWeights w = pf.to_weights();
      int d = pf.to_tensor().order();
      bool monotone = true;
      for (double pj : w.p) monotone = monotone && pj >= d;
      rep["monotone"] = monotone;
    }
    rep["status"] = "ok";
  } else if (cmd == "solve") {
    MonotoneMap F = pf.to_map();
    SolverConfig cfg = merge_config(pf, flags);
    EigenSolution sol =
        power_solve(F, cfg, std::nullopt, flags.allow_nonprimitive);
    rep["solutions"] = Json::array({solution_json(pf, sol)});
    if (sol.converged()) {
      rep["status"] = "ok";
    } else {
      rep["status"] = "max_iter_exceeded";
      exit_code = kNotConverged;
    }
  } else if (cmd == "search") {
    MonotoneMap F = pf.to_map();
    SolverConfig cfg = merge_config(pf, flags);
    MultiStartResult res = multi_start_solve(F, cfg);
    Json sols = Json::array();
    for (const auto& sol : res.solutions) sols.push_back(solution_json(pf, sol));
    rep["solutions"] = std::move(sols);
    Json summary;
    summary["starts"] = cfg.starts;
    summary["converged"] = res.converged_starts;
    summary["nonconverged"] = res.nonconverged_starts;
    summary["distinct"] = static_cast<long long>(res.solutions.size());
    rep["search_summary"] = std::move(summary);
    if (res.converged_starts == 0) {
      rep["status"] = "no_start_converged";
      exit_code = kNotConverged;
    } else {
      rep["status"] = "ok";
    }
  } else if (cmd == "rate") {
    MonotoneMap F = pf.to_map();
    SolverConfig cfg = merge_config(pf, flags);
    EigenSolution sol =
        power_solve(F, cfg, std::nullopt, flags.allow_nonprimitive);
    if (!sol.converged()) {
      rep["status"] = "max_iter_exceeded";
      return {rep, kNotConverged};
    }
    Vector psi = cfg.psi.size() ? cfg.psi : Vector::Ones(F.dimension());
    RateReport rr = convergence_rate(F, sol, psi, cfg.seed + 1021);
    Json r;
    r["lambda_M"] = dump_number(rr.lambda_M);
    r["second_modulus"] = dump_number(rr.r);
    r["rate"] = dump_number(rr.rate);
    r["empirical_rate"] = dump_number(rr.empirical_rate);
    r["empirical_within_bound"] = rr.empirical_within_bound;
    rep["rate"] = std::move(r);
    rep["solutions"] = Json::array({solution_json(pf, sol)});
    rep["status"] = "ok";
  } else if (cmd == "verify") {
    if (!flags.candidate_path)
      throw ParseError("verify requires --candidate <file>");
    std::ifstream in(*flags.candidate_path);
    if (!in) throw ParseError(*flags.candidate_path + ": cannot open file");
    Json cj;
    try {
      cj = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      fail(*flags.candidate_path, std::string("invalid JSON at byte ") +
                                      std::to_string(e.byte) + ": " + e.what());
    }
    std::vector<double> xs;
    if (cj.contains("x")) {
      xs = number_list(cj.at("x"), "x", *flags.candidate_path);
    } else if (cj.contains("blocks")) {
      const Json& bs = cj.at("blocks");
      if (!bs.is_array()) fail(*flags.candidate_path, "blocks: expected array");
      for (std::size_t k = 0; k < bs.size(); ++k) {
        auto b = number_list(bs[k], "blocks[" + std::to_string(k) + "]",
                             *flags.candidate_path);
        xs.insert(xs.end(), b.begin(), b.end());
      }
    } else {
      fail(*flags.candidate_path, "candidate must contain \"x\" or \"blocks\"");
    }
    std::optional<double> lambda = flags.lambda;
    if (!lambda && cj.contains("lambda"))
      lambda = number_at(cj.at("lambda"), "lambda", *flags.candidate_path);
    Vector x = Eigen::Map<const Vector>(xs.data(), xs.size());
    VerifyReport vr = verify_for(pf, x, lambda, flags.verify_tol);
    rep["verify"] = verify_json(vr);
    rep["status"] = vr.pass ? "ok" : "verify_failed";
    if (!vr.pass) exit_code = kVerifyFailed;
  } else {
    throw ParseError("unknown command \"" + cmd + "\"");
  }
  return {rep, exit_code};
}

std::string render_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace perron
