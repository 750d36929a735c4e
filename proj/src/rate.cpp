#include "perron/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perron/rng.hpp"

namespace perron {

namespace {

inline double pow_pos(double b, double e) { return std::exp(e * std::log(b)); }

double pnorm_pos(const Vector& v, double q) {
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += pow_pos(v[i], q);
  return pow_pos(s, 1.0 / q);
}

Matrix tensor_jacobian(const NonnegTensor& T, const NormWeights& w,
                       const Vector& u, const Vector& Fu) {
  const int d = T.order();
  const int n = T.total_dim();
  BlockVector b = BlockVector::split(T, u);

  // Slot sums S_r and cross-slot partials dS[r][s] assembled entrywise from
  // the full products of each stored coefficient.
  Vector S = Vector::Zero(n);
  Matrix dS = Matrix::Zero(n, n);
  for (const auto& e : T.entries()) {
    double full = e.value;
    for (int k = 0; k < d; ++k) full *= b.block(k)[e.index[k]];
    for (int j = 0; j < d; ++j) {
      int r = T.vertex_id(j, e.index[j]);
      S[r] += full / b.block(j)[e.index[j]];
      for (int l = 0; l < d; ++l) {
        if (l == j) continue;
        int s = T.vertex_id(l, e.index[l]);
        dS(r, s) +=
            full / (b.block(j)[e.index[j]] * b.block(l)[e.index[l]]);
      }
    }
  }

  std::vector<double> norm_p(d);
  for (int j = 0; j < d; ++j) norm_p[j] = pnorm_pos(b.block(j), w.p[j]);

  Matrix M = Matrix::Zero(n, n);
  const double outer = 1.0 / (w.pmax - 1.0);
  for (int j = 0; j < d; ++j) {
    const double pj = w.p[j];
    const double Npj = pow_pos(norm_p[j], pj);
    for (int i = 0; i < T.dims()[j]; ++i) {
      const int r = T.vertex_id(j, i);
      const double fr = Fu[r];
      // within-block columns: p_j-norm factor, plus the own-coordinate power
      for (int i2 = 0; i2 < T.dims()[j]; ++i2) {
        const int s = T.vertex_id(j, i2);
        double dlog =
            (pj - d) * pow_pos(b.block(j)[i2], pj - 1.0) / Npj;
        if (i2 == i) dlog += (w.pmax - pj) / b.block(j)[i];
        M(r, s) = fr * outer * dlog;
      }
      // cross-block columns: slot-sum partials
      for (int l = 0; l < d; ++l) {
        if (l == j) continue;
        for (int i2 = 0; i2 < T.dims()[l]; ++i2) {
          const int s = T.vertex_id(l, i2);
          if (dS(r, s) != 0.0) M(r, s) += fr * outer * dS(r, s) / S[r];
        }
      }
    }
  }
  return M;
}

Matrix poly_jacobian(const MonotoneMap& F, const Vector& u, const Vector& Fu) {
  const PolynomialMap& P = F.poly();
  const std::vector<double>& deltas = F.deltas();
  const double dmax = F.delta_max();
  const double p = F.norm_order();
  const double a = F.norm_scale();
  const int n = P.dimension();

  const double N = pnorm_pos(u, p);
  const double logNa = std::log(N / a);
  Vector dN_over_N(n);  // (dN/dx_k) / N = x_k^{p-1} N^-p
  for (int k = 0; k < n; ++k)
    dN_over_N[k] = pow_pos(u[k], p - 1.0) / pow_pos(N, p);

  Matrix M = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& comp = P.components()[i];
    std::vector<double> terms(comp.size());
    double inner = 0.0;
    double weighted = 0.0;  // sum_m T_m (delta_i - |m|)
    for (std::size_t m = 0; m < comp.size(); ++m) {
      double log_term = std::log(comp[m].coefficient) +
                        (dmax - deltas[i]) * std::log(u[i]) +
                        (deltas[i] - comp[m].degree()) * logNa;
      for (int k = 0; k < n; ++k)
        if (comp[m].exponents[k] > 0)
          log_term += comp[m].exponents[k] * std::log(u[k]);
      terms[m] = std::exp(log_term);
      inner += terms[m];
      weighted += terms[m] * (deltas[i] - comp[m].degree());
    }
    const double scale = Fu[i] / (dmax * inner);
    for (int k = 0; k < n; ++k) {
      double dinner = weighted * dN_over_N[k];
      if (k == i) dinner += (dmax - deltas[i]) * inner / u[i];
      for (std::size_t m = 0; m < comp.size(); ++m)
        if (comp[m].exponents[k] > 0)
          dinner += terms[m] * comp[m].exponents[k] / u[k];
      M(i, k) = scale * dinner;
    }
  }
  return M;
}

}  // namespace

Matrix jacobian(const MonotoneMap& F, const Vector& u) {
  if (u.size() != F.dimension())
    throw DimensionError("vector does not match map dimension");
  for (int i = 0; i < u.size(); ++i)
    if (!(u[i] > 0.0))
      throw ValidationError("jacobian requires a strictly positive point");
  Vector Fu = F.apply(u);
  return F.is_tensor() ? tensor_jacobian(F.tensor(), F.weights(), u, Fu)
                       : poly_jacobian(F, u, Fu);
}

namespace detail {

double gelfand_radius(Matrix B) {
  if (B.rows() != B.cols())
    throw DimensionError("spectral radius of a non-square matrix");
  if (B.rows() == 0) return 0.0;
  auto norm1 = [](const Matrix& A) {
    return A.cwiseAbs().colwise().sum().maxCoeff();
  };
  double norm = norm1(B);
  if (norm == 0.0) return 0.0;
  double logscale = 0.0;
  double est = std::log(norm);
  for (int k = 1; k <= 60; ++k) {
    logscale = 2.0 * (logscale + std::log(norm));
    Matrix C = B / norm;
    B = C * C;
    norm = norm1(B);
    if (norm == 0.0) return 0.0;  // nilpotent
    double est_new = (logscale + std::log(norm)) / std::ldexp(1.0, k);
    bool settled =
        std::abs(est_new - est) <= 1e-9 * std::max(1.0, std::abs(est_new));
    est = est_new;
    // a nilpotent part only vanishes after ~log2(n) squarings; do not trust
    // an early plateau
    if (settled && k >= 6) break;
  }
  return std::exp(est);
}

}  // namespace detail

double spectral_radius(const Matrix& M) {
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (!(M(i, j) >= 0.0) || !std::isfinite(M(i, j)))
        throw ValidationError("spectral_radius requires an entrywise "
                              "nonnegative matrix");
  return detail::gelfand_radius(M);
}

double second_modulus(const Matrix& M, const Vector& u, const Vector& psi) {
  if (M.rows() != M.cols() || M.rows() != u.size() || u.size() != psi.size())
    throw DimensionError("second_modulus dimension mismatch");
  if (std::abs(psi.dot(u) - 1.0) > 1e-10)
    throw ValidationError("second_modulus requires psi^T u = 1");
  Matrix Q = M - u * (psi.transpose() * M);
  return detail::gelfand_radius(Q);
}

RateReport convergence_rate(const MonotoneMap& F, const EigenSolution& sol,
                            const Vector& psi_in, std::uint64_t seed) {
  if (!sol.converged())
    throw ValidationError("convergence_rate requires a converged solution");
  if (!F.monotone())
    throw ValidationError("convergence_rate applies to monotone maps only");
  const int n = F.dimension();
  Vector psi = psi_in.size() == 0 ? Vector::Ones(n) : psi_in;
  if (psi.size() != n) throw DimensionError("psi does not match map dimension");

  // Polish the eigenvector with plain power steps so the empirical error
  // measurement is not limited by the solver tolerance.
  Vector u = sol.u / psi.dot(sol.u);
  for (int k = 0; k < 400; ++k) {
    Vector Fu = F.apply(u);
    Vector un = Fu / psi.dot(Fu);
    double step = hilbert_distance(u, un);
    u = std::move(un);
    if (step <= 1e-15) break;
  }

  RateReport rep;
  rep.M = jacobian(F, u);
  rep.lambda_M = spectral_radius(rep.M);
  rep.r = second_modulus(rep.M, u, psi);
  rep.rate = rep.r / rep.lambda_M;

  detail::Rng rng(seed, 0);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.exponential();
  x /= psi.dot(x);

  const double floor_err = 1e-11 * u.maxCoeff();
  std::vector<double> errors;
  errors.push_back((x - u).cwiseAbs().maxCoeff());
  for (int k = 0; k < 100000; ++k) {
    Vector Fx = F.apply(x);
    x = Fx / psi.dot(Fx);
    double e = (x - u).cwiseAbs().maxCoeff();
    errors.push_back(e);
    if (e < floor_err) break;
  }
  std::vector<double> ratios;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k)
    if (errors[k] >= floor_err && errors[k + 1] >= floor_err &&
        errors[k] > 0.0)
      ratios.push_back(errors[k + 1] / errors[k]);
  if (ratios.empty() && errors.size() >= 2 && errors[0] > 0.0)
    ratios.push_back(errors[1] / errors[0]);  // superlinear collapse

  if (!ratios.empty()) {
    std::size_t take = std::min<std::size_t>(20, ratios.size());
    double acc = 0.0;
    for (std::size_t k = ratios.size() - take; k < ratios.size(); ++k)
      acc += std::log(ratios[k]);
    rep.empirical_rate = std::exp(acc / static_cast<double>(take));
  }
  rep.empirical_within_bound = rep.empirical_rate <= rep.rate + 0.05;
  return rep;
}

}  // namespace perron
