#include "perron/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "perron/rng.hpp"

namespace perron {

namespace {

// b^e for b >= 0, e > 0 (boundary verification path).
double pow_nonneg(double b, double e) {
  if (b == 0.0) return 0.0;
  return std::exp(e * std::log(b));
}

// ||v||_q for entrywise nonnegative v, q > 0.
double pnorm_nonneg(const Vector& v, double q) {
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += pow_nonneg(v[i], q);
  return pow_nonneg(s, 1.0 / q);
}

Vector resolve_psi(const SolverConfig& cfg, int n) {
  if (cfg.psi.size() == 0) return Vector::Ones(n);
  if (cfg.psi.size() != n)
    throw DimensionError("psi of length " + std::to_string(cfg.psi.size()) +
                         " does not match map dimension " + std::to_string(n));
  for (int i = 0; i < n; ++i)
    if (!(cfg.psi[i] > 0.0))
      throw ValidationError("the power algorithm requires strictly positive psi");
  return cfg.psi;
}

double resolve_damping(const SolverConfig& cfg, bool monotone) {
  double theta = cfg.damping.value_or(monotone ? 1.0 : 0.45);
  if (!(theta > 0.0) || theta > 1.0)
    throw ValidationError("damping must lie in (0, 1], got " +
                          std::to_string(theta));
  return theta;
}

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw ValidationError("tol must be positive");
  if (cfg.max_iter < 1) throw ValidationError("max_iter must be at least 1");
  if (cfg.starts < 1) throw ValidationError("starts must be at least 1");
}

std::vector<Vector> normalized_blocks(const MonotoneMap& F, const Vector& u) {
  std::vector<Vector> blocks;
  if (F.is_tensor()) {
    const NonnegTensor& T = F.tensor();
    const NormWeights& w = F.weights();
    BlockVector b = BlockVector::split(T, u);
    for (int j = 0; j < T.order(); ++j) {
      double s = pnorm_nonneg(b.block(j), w.p[j]);
      if (!(s > 0.0))
        throw ValidationError("cannot normalize a zero block");
      blocks.push_back(b.block(j) / s);
    }
  } else {
    double s = pnorm_nonneg(u, F.norm_order());
    if (!(s > 0.0)) throw ValidationError("cannot normalize a zero vector");
    blocks.push_back(u * (F.norm_scale() / s));
  }
  return blocks;
}

EigenSolution finalize_solution(const MonotoneMap& F, const Vector& psi,
                                const Vector& u, int iterations,
                                std::vector<std::pair<double, double>> trace,
                                SolveStatus status, bool override_flag) {
  EigenSolution sol;
  sol.u = u;
  Vector Fu = F.apply(u);
  sol.mu = psi.dot(Fu);
  sol.lambda = std::exp(F.eigen_exponent() * std::log(sol.mu));
  sol.residual =
      (Fu - sol.mu * u).cwiseAbs().maxCoeff() / (sol.mu * u.maxCoeff());
  sol.blocks = normalized_blocks(F, u);
  sol.iterations = iterations;
  sol.cw_trace = std::move(trace);
  sol.status = status;
  sol.nonprimitive_override = override_flag;
  return sol;
}

struct IterationOutcome {
  Vector x;
  bool converged = false;
  int iterations = 0;
  std::vector<std::pair<double, double>> trace;
};

// The damped normalized iteration x <- (1-theta) x + theta G(x), stopped
// when both the Hilbert distance between successive iterates and the
// relative Collatz-Wielandt gap fall below tol.
IterationOutcome iterate_from(const MonotoneMap& F, const Vector& psi,
                              Vector x, double theta, double tol,
                              int max_iter) {
  IterationOutcome out;
  out.trace.reserve(std::min(max_iter, 4096));
  for (int k = 0; k < max_iter; ++k) {
    Vector Fx = F.apply(x);
    double lower = std::numeric_limits<double>::infinity();
    double upper = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      double r = Fx[i] / x[i];
      lower = std::min(lower, r);
      upper = std::max(upper, r);
    }
    out.trace.emplace_back(lower, upper);
    Vector g = Fx / psi.dot(Fx);
    Vector xn = (theta == 1.0) ? std::move(g)
                               : Vector((1.0 - theta) * x + theta * g);
    double step = hilbert_distance(x, xn);
    double gap = (upper - lower) / upper;
    x = std::move(xn);
    if (step <= tol && gap <= tol) {
      out.converged = true;
      out.iterations = k + 1;
      break;
    }
  }
  if (!out.converged) out.iterations = max_iter;
  out.x = std::move(x);
  return out;
}

}  // namespace

std::pair<double, double> collatz_wielandt_bounds(const MonotoneMap& F,
                                                  const Vector& x) {
  Vector Fx = F.apply(x);
  double lower = std::numeric_limits<double>::infinity();
  double upper = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    double r = Fx[i] / x[i];
    lower = std::min(lower, r);
    upper = std::max(upper, r);
  }
  return {lower, upper};
}

EigenSolution power_solve(const MonotoneMap& F, const SolverConfig& cfg,
                          std::optional<Vector> start,
                          bool allow_nonprimitive) {
  validate_config(cfg);
  if (!F.monotone())
    throw NonMonotoneError(
        "power_solve requires a monotone map (all p_j >= d); use "
        "multi_start_solve for the non-monotone regime");

  PrimitivityResult prim = is_weakly_primitive(F.system_poly());
  bool override_flag = false;
  if (!prim.weakly_primitive) {
    if (prim.strongly_connected && allow_nonprimitive) {
      override_flag = true;  // existence holds, convergence is not guaranteed
    } else {
      std::ostringstream msg;
      if (prim.strongly_connected)
        msg << "system di-graph is strongly connected but imprimitive "
               "(cyclicity "
            << prim.cyclicity << "); pass allow_nonprimitive to proceed";
      else
        msg << "system di-graph is not strongly connected";
      throw NotPrimitiveError(msg.str(), prim.strongly_connected,
                              prim.cyclicity, prim.scc_witness);
    }
  }

  const int n = F.dimension();
  Vector psi = resolve_psi(cfg, n);
  double theta = resolve_damping(cfg, true);

  Vector x = start.value_or(Vector::Ones(n));
  if (x.size() != n) throw DimensionError("start vector has wrong length");
  for (int i = 0; i < n; ++i)
    if (!(x[i] > 0.0))
      throw ValidationError("start vector must be strictly positive");
  x /= psi.dot(x);

  IterationOutcome out =
      iterate_from(F, psi, std::move(x), theta, cfg.tol, cfg.max_iter);
  return finalize_solution(F, psi, out.x, out.iterations, std::move(out.trace),
                           out.converged ? SolveStatus::Converged
                                         : SolveStatus::MaxIterExceeded,
                           override_flag);
}

EigenSolution block_normalize(EigenSolution sol, const NonnegTensor& T,
                              const NormWeights& w) {
  if (sol.u.size() != T.total_dim())
    throw DimensionError("solution does not match tensor dimensions");
  BlockVector b = BlockVector::split(T, sol.u);
  std::vector<Vector> blocks;
  for (int j = 0; j < T.order(); ++j) {
    double s = pnorm_nonneg(b.block(j), w.p[j]);
    if (!(s > 0.0)) throw ValidationError("cannot normalize a zero block");
    blocks.push_back(b.block(j) / s);
  }
  sol.blocks = std::move(blocks);
  sol.lambda = std::exp((w.pmax - 1.0) * std::log(sol.mu));
  return sol;
}

MultiStartResult multi_start_solve(const MonotoneMap& F,
                                   const SolverConfig& cfg) {
  validate_config(cfg);
  const int n = F.dimension();
  Vector psi = resolve_psi(cfg, n);
  double theta = resolve_damping(cfg, F.monotone());

  MultiStartResult result;
  std::vector<Vector> representatives;
  for (int s = 0; s < cfg.starts; ++s) {
    detail::Rng rng(cfg.seed, static_cast<std::uint64_t>(s));
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.exponential();
    x /= psi.dot(x);

    IterationOutcome out =
        iterate_from(F, psi, std::move(x), theta, cfg.tol, cfg.max_iter);
    if (!out.converged) {
      ++result.nonconverged_starts;
      continue;
    }
    ++result.converged_starts;

    bool duplicate = false;
    for (const Vector& rep : representatives)
      if (hilbert_distance(out.x, rep) < 1e-6) {
        duplicate = true;
        break;
      }
    if (duplicate) continue;
    representatives.push_back(out.x);
    result.solutions.push_back(finalize_solution(
        F, psi, out.x, out.iterations, std::move(out.trace),
        SolveStatus::Converged, false));
  }

  std::sort(result.solutions.begin(), result.solutions.end(),
            [](const EigenSolution& a, const EigenSolution& b) {
              for (std::size_t j = 0; j < a.blocks.size(); ++j) {
                for (int i = 0; i < a.blocks[j].size(); ++i) {
                  if (a.blocks[j][i] != b.blocks[j][i])
                    return a.blocks[j][i] < b.blocks[j][i];
                }
              }
              return false;
            });
  return result;
}

VerifyReport verify_solution(const NonnegTensor& T, const NormWeights& w,
                             const BlockVector& x,
                             std::optional<double> lambda, double tol) {
  if (!x.compatible_with(T))
    throw DimensionError("candidate does not match tensor dimensions");
  if (static_cast<int>(w.p.size()) != T.order())
    throw DimensionError("norm weights do not match tensor order");
  for (int j = 0; j < T.order(); ++j)
    for (int i = 0; i < x.block(j).size(); ++i)
      if (!(x.block(j)[i] >= 0.0))
        throw ValidationError("candidate must be entrywise nonnegative");

  std::vector<double> lhs, rhs;
  for (int j = 0; j < T.order(); ++j) {
    Vector S = evaluate_slot(T, j, x);
    for (int i = 0; i < S.size(); ++i) {
      lhs.push_back(S[i]);
      rhs.push_back(pow_nonneg(x.block(j)[i], w.p[j] - 1.0));
    }
  }

  VerifyReport rep;
  rep.tol = tol;
  if (lambda) {
    rep.lambda = *lambda;
  } else {
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < lhs.size(); ++k) {
      num += lhs[k] * rhs[k];
      den += rhs[k] * rhs[k];
    }
    rep.lambda = den > 0.0 ? num / den : 0.0;
    rep.lambda_fitted = true;
  }
  rep.equation_residual = 0.0;
  for (std::size_t k = 0; k < lhs.size(); ++k)
    rep.equation_residual =
        std::max(rep.equation_residual, std::abs(lhs[k] - rep.lambda * rhs[k]));
  for (int j = 0; j < T.order(); ++j)
    rep.norm_residuals.push_back(
        std::abs(pnorm_nonneg(x.block(j), w.p[j]) - 1.0));
  rep.pass = rep.equation_residual <= tol &&
             std::all_of(rep.norm_residuals.begin(), rep.norm_residuals.end(),
                         [tol](double d) { return d <= tol; });
  return rep;
}

VerifyReport verify_solution(const PolynomialMap& P,
                             const std::vector<double>& deltas, double p,
                             double a, const Vector& x,
                             std::optional<double> lambda, double tol) {
  if (x.size() != P.dimension())
    throw DimensionError("candidate does not match map dimension");
  if (static_cast<int>(deltas.size()) != P.dimension())
    throw DimensionError("delta list does not match map dimension");
  for (int i = 0; i < x.size(); ++i)
    if (!(x[i] >= 0.0))
      throw ValidationError("candidate must be entrywise nonnegative");

  Vector lhs = evaluate_poly(P, x);
  Vector rhs(x.size());
  for (int i = 0; i < x.size(); ++i) rhs[i] = pow_nonneg(x[i], deltas[i]);

  VerifyReport rep;
  rep.tol = tol;
  if (lambda) {
    rep.lambda = *lambda;
  } else {
    double den = rhs.squaredNorm();
    rep.lambda = den > 0.0 ? lhs.dot(rhs) / den : 0.0;
    rep.lambda_fitted = true;
  }
  rep.equation_residual = (lhs - rep.lambda * rhs).cwiseAbs().maxCoeff();
  rep.norm_residuals.push_back(std::abs(pnorm_nonneg(x, p) - a));
  rep.pass =
      rep.equation_residual <= tol && rep.norm_residuals.front() <= tol;
  return rep;
}

ComplexVerifyReport verify_complex_eigenpair(const PolynomialMap& P,
                                             const ComplexVector& v,
                                             std::complex<double> nu,
                                             double lambda, double tol) {
  if (!P.homogeneous())
    throw ValidationError(
        "complex eigenpair verification requires a homogeneous map of a "
        "common degree");
  if (v.size() != P.dimension())
    throw DimensionError("candidate does not match map dimension");
  if (v.norm() == 0.0)
    throw ValidationError("candidate vector must be nonzero");

  const int d = P.max_degree();
  ComplexVector Pv = evaluate_poly(P, v);
  ComplexVerifyReport rep;
  rep.lambda = lambda;
  for (int i = 0; i < v.size(); ++i) {
    std::complex<double> pw = 1.0;
    for (int e = 0; e < d; ++e) pw *= v[i];
    rep.residual = std::max(rep.residual, std::abs(Pv[i] - nu * pw));
  }
  rep.nu_modulus = std::abs(nu);
  rep.bound_ok = rep.nu_modulus <= lambda + tol;
  rep.pass = rep.residual <= tol && rep.bound_ok;
  return rep;
}

}  // namespace perron
