#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "perron/dynamics.hpp"

namespace perron {

struct SolverConfig {
  /// Strictly positive normalization functional; empty means all-ones.
  Vector psi;
  /// Convergence threshold on the Hilbert distance between successive
  /// iterates and on the relative Collatz-Wielandt gap.
  double tol = 1e-10;
  int max_iter = 10000;
  /// Damping theta in (0,1]; unset resolves to 1 for monotone maps and to
  /// 0.45 for non-monotone ones (0.5 sits exactly on the flip-stability
  /// boundary of the d=2, p<2 maps).
  std::optional<double> damping;
  std::uint64_t seed = 0;
  /// Multi-start count.
  int starts = 100;
};

enum class SolveStatus { Converged, MaxIterExceeded };

struct EigenSolution {
  /// psi-normalized eigenvector, psi^T u = 1.
  Vector u;
  /// Eigenvalue of F: F(u) = mu u.
  double mu = 0.0;
  /// System eigenvalue, lambda = mu^(pmax-1) resp. mu^(delta_max).
  double lambda = 0.0;
  /// Tensor maps: blocks rescaled to ||xi_j||_{p_j} = 1.  Polynomial maps:
  /// a single block, the eigenvector rescaled to ||x||_p = a.
  std::vector<Vector> blocks;
  int iterations = 0;
  /// max_i |F_i(u) - mu u_i| / (mu max_i u_i) at the final iterate.
  double residual = 0.0;
  /// Per-iteration Collatz-Wielandt bracket (lower, upper).
  std::vector<std::pair<double, double>> cw_trace;
  SolveStatus status = SolveStatus::MaxIterExceeded;
  bool nonprimitive_override = false;

  bool converged() const { return status == SolveStatus::Converged; }
};

/// (min_i F_i(x)/x_i, max_i F_i(x)/x_i); brackets the cone spectral radius
/// for every strictly positive x.
std::pair<double, double> collatz_wielandt_bounds(const MonotoneMap& F,
                                                  const Vector& x);

/// psi-normalized power algorithm x <- G(x) (damped by cfg.damping).
/// Preconditions: the map is monotone and the underlying polynomial system
/// is weakly primitive; with allow_nonprimitive a strongly connected but
/// imprimitive system proceeds anyway and the override is recorded in the
/// solution.  MaxIterExceeded is reported through the status field with the
/// best iterate retained.
EigenSolution power_solve(const MonotoneMap& F, const SolverConfig& cfg,
                          std::optional<Vector> start = std::nullopt,
                          bool allow_nonprimitive = false);

/// Rescale a tensor-backed solution so every block has unit p_j-norm and
/// recompute lambda = mu^(pmax-1); idempotent.
EigenSolution block_normalize(EigenSolution sol, const NonnegTensor& T,
                              const NormWeights& w);

struct MultiStartResult {
  std::vector<EigenSolution> solutions;  // distinct, sorted
  int converged_starts = 0;
  int nonconverged_starts = 0;
};

/// Damped fixed-point iteration x <- (1-theta) x + theta G(x) from
/// cfg.starts random interior points (iid standard-exponential coordinates,
/// psi-normalized, one seeded stream per start).  Converged points are
/// deduplicated at Hilbert distance 1e-6, block-normalized and sorted
/// lexicographically by first block.  Explicitly permitted for
/// non-monotone maps; non-converged starts are only counted.
MultiStartResult multi_start_solve(const MonotoneMap& F,
                                   const SolverConfig& cfg);

struct VerifyReport {
  /// max over equations of |LHS_i - lambda x_i^(exponent)|.
  double equation_residual = 0.0;
  /// | ||x_j||_{p_j} - 1 | per block (tensor), or | ||x||_p - a | (poly).
  std::vector<double> norm_residuals;
  double lambda = 0.0;
  bool lambda_fitted = false;
  double tol = 0.0;
  bool pass = false;
};

/// Residuals of the raw eigen-system at a nonnegative candidate (boundary
/// allowed); lambda is fitted by least squares across equations when not
/// supplied.
VerifyReport verify_solution(const NonnegTensor& T, const NormWeights& w,
                             const BlockVector& x,
                             std::optional<double> lambda, double tol);
VerifyReport verify_solution(const PolynomialMap& P,
                             const std::vector<double>& deltas, double p,
                             double a, const Vector& x,
                             std::optional<double> lambda, double tol);

struct ComplexVerifyReport {
  double residual = 0.0;
  double nu_modulus = 0.0;
  double lambda = 0.0;
  bool bound_ok = false;
  bool pass = false;
};

/// For P homogeneous of common degree d: checks P_i(v) = nu v_i^d within
/// tol and whether |nu| <= lambda + tol.
ComplexVerifyReport verify_complex_eigenpair(const PolynomialMap& P,
                                             const ComplexVector& v,
                                             std::complex<double> nu,
                                             double lambda, double tol);

}  // namespace perron
