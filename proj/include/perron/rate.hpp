#pragma once

#include <cstdint>

#include "perron/solver.hpp"

namespace perron {

using Matrix = Eigen::MatrixXd;

struct RateReport {
  Matrix M;                  // DF(u)
  double lambda_M = 0.0;     // Perron root of M (equals mu at an eigenvector)
  double r = 0.0;            // max modulus of the non-Perron spectrum
  double rate = 0.0;         // r / lambda_M
  double empirical_rate = 0.0;
  bool empirical_within_bound = false;  // empirical_rate <= rate + 0.05
};

/// Analytic Jacobian DF(u) of either map kind at a strictly positive point;
/// entrywise nonnegative when the map is monotone.
Matrix jacobian(const MonotoneMap& F, const Vector& u);

/// rho(M) for entrywise nonnegative M, via Gelfand iteration with repeated
/// squaring and per-step rescaling (tolerance 1e-9 relative, at most 60
/// squarings); handles imprimitive and defective matrices.
double spectral_radius(const Matrix& M);

/// rho(M - u (psi^T M)) with psi^T u = 1; equals the maximal modulus of the
/// non-Perron eigenvalues of M when M is primitive.
double second_modulus(const Matrix& M, const Vector& u, const Vector& psi);

/// Spectral-gap estimate rate = r / lambda_M together with the measured
/// decay of a fresh power run from a seeded random start (geometric mean of
/// the last 20 sup-norm error ratios against the converged eigenvector).
RateReport convergence_rate(const MonotoneMap& F, const EigenSolution& sol,
                            const Vector& psi, std::uint64_t seed = 1021);

namespace detail {
/// Gelfand radius of an arbitrary square matrix (used for the deflated
/// matrix, which has mixed signs).
double gelfand_radius(Matrix B);
}  // namespace detail

}  // namespace perron
