#include "perron/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace perron {

namespace {

// b^e on strictly positive b, per the exp/log evaluation convention.
inline double pow_pos(double b, double e) { return std::exp(e * std::log(b)); }

// ||v||_q for strictly positive v and q > 0.
double pnorm_pos(const Vector& v, double q) {
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += pow_pos(v[i], q);
  return pow_pos(s, 1.0 / q);
}

void require_interior(const Vector& x, int n) {
  if (x.size() != n)
    throw DimensionError("vector of length " + std::to_string(x.size()) +
                         " does not match map dimension " + std::to_string(n));
  for (int i = 0; i < x.size(); ++i)
    if (!(x[i] > 0.0) || !std::isfinite(x[i]))
      throw ValidationError("map evaluation requires a strictly positive "
                            "vector; coordinate " +
                            std::to_string(i) + " is " +
                            std::to_string(x[i]));
}

}  // namespace

MonotoneMap MonotoneMap::tensor_map(NonnegTensor T, NormWeights w) {
  const int d = T.order();
  if (static_cast<int>(w.p.size()) != d)
    throw DimensionError("expected " + std::to_string(d) +
                         " norm exponents, got " + std::to_string(w.p.size()));
  // non-vanishing condition: every (slot, row) carries a positive entry
  std::vector<std::vector<char>> seen(d);
  for (int j = 0; j < d; ++j) seen[j].assign(T.dims()[j], 0);
  for (const auto& e : T.entries())
    for (int j = 0; j < d; ++j) seen[j][e.index[j]] = 1;
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < T.dims()[j]; ++i)
      if (!seen[j][i])
        throw ValidationError(
            "tensor map undefined: slot " + std::to_string(j) + ", row " +
            std::to_string(i) + " has no positive entry");

  MonotoneMap F;
  F.kind_ = Kind::Tensor;
  F.n_ = T.total_dim();
  F.monotone_ = *std::min_element(w.p.begin(), w.p.end()) >= d;
  F.eigen_exponent_ = w.pmax - 1.0;
  F.system_ = std::make_shared<const PolynomialMap>(tensor_system(T));
  F.tensor_ = std::move(T);
  F.weights_ = std::move(w);
  return F;
}

MonotoneMap MonotoneMap::poly_map(PolynomialMap P, std::vector<double> deltas,
                                  double p, double a) {
  const int n = P.dimension();
  if (static_cast<int>(deltas.size()) != n)
    throw DimensionError("expected " + std::to_string(n) +
                         " exponents delta_i, got " +
                         std::to_string(deltas.size()));
  if (!(p > 0.0)) throw ValidationError("norm order p must be positive");
  if (!(a > 0.0)) throw ValidationError("norm scale a must be positive");
  for (int i = 0; i < n; ++i) {
    if (P.components()[i].empty() || P.degrees()[i] < 1)
      throw ValidationError("component " + std::to_string(i) +
                            " must be a polynomial of degree at least 1");
    if (!(deltas[i] >= P.degrees()[i]))
      throw ValidationError("delta_" + std::to_string(i) + " = " +
                            std::to_string(deltas[i]) +
                            " is below the component degree " +
                            std::to_string(P.degrees()[i]));
  }

  MonotoneMap F;
  F.kind_ = Kind::Poly;
  F.n_ = n;
  F.monotone_ = true;  // delta_i >= d_i enforced above
  F.delta_max_ = *std::max_element(deltas.begin(), deltas.end());
  F.eigen_exponent_ = F.delta_max_;
  F.norm_order_ = p;
  F.norm_scale_ = a;
  F.system_ = std::make_shared<const PolynomialMap>(P);
  F.poly_ = std::move(P);
  F.deltas_ = std::move(deltas);
  return F;
}

const NonnegTensor& MonotoneMap::tensor() const {
  if (!tensor_) throw Error("not a tensor-backed map");
  return *tensor_;
}

const NormWeights& MonotoneMap::weights() const {
  if (!weights_) throw Error("not a tensor-backed map");
  return *weights_;
}

const PolynomialMap& MonotoneMap::poly() const {
  if (!poly_) throw Error("not a polynomial-backed map");
  return *poly_;
}

const std::vector<double>& MonotoneMap::deltas() const {
  if (kind_ != Kind::Poly) throw Error("not a polynomial-backed map");
  return deltas_;
}

double MonotoneMap::delta_max() const {
  if (kind_ != Kind::Poly) throw Error("not a polynomial-backed map");
  return delta_max_;
}

double MonotoneMap::norm_order() const {
  if (kind_ != Kind::Poly) throw Error("not a polynomial-backed map");
  return norm_order_;
}

double MonotoneMap::norm_scale() const {
  if (kind_ != Kind::Poly) throw Error("not a polynomial-backed map");
  return norm_scale_;
}

const PolynomialMap& MonotoneMap::system_poly() const { return *system_; }

Vector MonotoneMap::apply(const Vector& x) const {
  require_interior(x, n_);
  Vector out(n_);
  if (kind_ == Kind::Tensor) {
    const NonnegTensor& T = *tensor_;
    const NormWeights& w = *weights_;
    const int d = T.order();
    BlockVector bx = BlockVector::split(T, x);
    for (int j = 0; j < d; ++j) {
      Vector S = evaluate_slot(T, j, bx);
      const double logN = std::log(pnorm_pos(bx.block(j), w.p[j]));
      for (int i = 0; i < T.dims()[j]; ++i) {
        // S_i > 0 in the interior because every row carries an entry
        double log_inner = (w.pmax - w.p[j]) * std::log(bx.block(j)[i]) +
                           (w.p[j] - d) * logN + std::log(S[i]);
        out[T.vertex_id(j, i)] = std::exp(log_inner / (w.pmax - 1.0));
      }
    }
  } else {
    const PolynomialMap& P = *poly_;
    const double logNa = std::log(pnorm_pos(x, norm_order_) / norm_scale_);
    for (int i = 0; i < n_; ++i) {
      double inner = 0.0;
      for (const auto& m : P.components()[i]) {
        double log_term = std::log(m.coefficient) +
                          (delta_max_ - deltas_[i]) * std::log(x[i]) +
                          (deltas_[i] - m.degree()) * logNa;
        for (int k = 0; k < n_; ++k)
          if (m.exponents[k] > 0) log_term += m.exponents[k] * std::log(x[k]);
        inner += std::exp(log_term);
      }
      out[i] = std::exp(std::log(inner) / delta_max_);
    }
  }
  return out;
}

MonotoneMap build_tensor_map(const NonnegTensor& T, const NormWeights& w) {
  return MonotoneMap::tensor_map(T, w);
}

MonotoneMap build_poly_map(const PolynomialMap& P,
                           const std::vector<double>& deltas, double p,
                           double a) {
  return MonotoneMap::poly_map(P, deltas, p, a);
}

Vector apply(const MonotoneMap& F, const Vector& x) { return F.apply(x); }

double hilbert_distance(const Vector& x, const Vector& y) {
  if (x.size() != y.size())
    throw DimensionError("hilbert_distance requires vectors of equal length");
  if (x.size() == 0) throw DimensionError("hilbert_distance of empty vectors");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw ValidationError("hilbert_distance requires strictly positive "
                            "vectors");
    double r = std::log(y[i]) - std::log(x[i]);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi - lo;
}

Vector normalize(const MonotoneMap& F, const Vector& psi, const Vector& x) {
  if (psi.size() != F.dimension())
    throw DimensionError("psi does not match map dimension");
  for (int i = 0; i < psi.size(); ++i)
    if (!(psi[i] > 0.0))
      throw ValidationError("normalization requires strictly positive psi");
  Vector Fx = F.apply(x);
  double s = psi.dot(Fx);
  if (!(s > 0.0)) throw Error("psi^T F(x) vanished");
  return Fx / s;
}

DiGraph f_digraph(const MonotoneMap& F) {
  if (F.is_tensor()) return tensor_F_digraph(F.tensor(), F.weights());

  const PolynomialMap& P = F.poly();
  const int n = P.dimension();
  DiGraph G(n);
  for (int i = 0; i < n; ++i) {
    bool norm_factor = false;  // some monomial of degree < delta_i
    for (const auto& m : P.components()[i]) {
      if (m.degree() < F.deltas()[i]) norm_factor = true;
      for (int k = 0; k < n; ++k)
        if (m.exponents[k] > 0) G.add_edge(i, k);
    }
    if (norm_factor)
      for (int k = 0; k < n; ++k) G.add_edge(i, k);
    if (F.delta_max() > F.deltas()[i]) G.add_edge(i, i);
  }
  return G;
}

}  // namespace perron
