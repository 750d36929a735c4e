#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "perron/polynomial.hpp"
#include "perron/structure.hpp"
#include "perron/tensor.hpp"

namespace perron {

/// The degree-one homogeneous map F derived from a nonnegative tensor with
/// norm weights, or from a polynomial map with exponents delta_i, a norm
/// order p and a scale a.  Immutable after construction; evaluation is pure
/// and restricted to the interior of the cone.
class MonotoneMap {
 public:
  enum class Kind { Tensor, Poly };

  /// F_{i,j}(x) = (x_{i,j}^{pmax-p_j} ||x_j||_{p_j}^{p_j-d} S_{i,j}(x))^{1/(pmax-1)}.
  /// Requires every slot row of T to carry a positive entry; the map is
  /// monotone iff min p_j >= d, otherwise it is built with monotone() false
  /// and the solver requires explicit multi-start use.
  static MonotoneMap tensor_map(NonnegTensor T, NormWeights w);

  /// F_i(x) = (sum_m a_m x_i^{dmax-d_i} (||x||_p / a)^{d_i-|m|} x^m)^{1/dmax};
  /// requires delta_i >= deg P_i with every component of positive degree.
  static MonotoneMap poly_map(PolynomialMap P, std::vector<double> deltas,
                              double p, double a);

  Kind kind() const { return kind_; }
  bool is_tensor() const { return kind_ == Kind::Tensor; }
  int dimension() const { return n_; }
  bool monotone() const { return monotone_; }

  /// Exponent e with lambda = mu^e linking the F-eigenvalue to the system
  /// eigenvalue: pmax-1 for tensor maps, max delta_i for polynomial maps.
  double eigen_exponent() const { return eigen_exponent_; }

  const NonnegTensor& tensor() const;
  const NormWeights& weights() const;
  const PolynomialMap& poly() const;
  const std::vector<double>& deltas() const;
  double delta_max() const;
  double norm_order() const;  // p of ||x||_p (poly maps)
  double norm_scale() const;  // a (poly maps)

  /// The polynomial eigen-system underlying the map: tensor_system(T) for
  /// tensor maps, P itself for polynomial maps.
  const PolynomialMap& system_poly() const;

  /// Evaluate F at a strictly positive x.
  Vector apply(const Vector& x) const;

 private:
  MonotoneMap() = default;

  Kind kind_ = Kind::Tensor;
  int n_ = 0;
  bool monotone_ = false;
  double eigen_exponent_ = 1.0;

  // tensor form
  std::optional<NonnegTensor> tensor_;
  std::optional<NormWeights> weights_;

  // polynomial form
  std::optional<PolynomialMap> poly_;
  std::vector<double> deltas_;
  double delta_max_ = 0.0;
  double norm_order_ = 2.0;
  double norm_scale_ = 1.0;

  std::shared_ptr<const PolynomialMap> system_;
};

/// Free-function spellings of the map constructors.
MonotoneMap build_tensor_map(const NonnegTensor& T, const NormWeights& w);
MonotoneMap build_poly_map(const PolynomialMap& P,
                           const std::vector<double>& deltas, double p,
                           double a);

Vector apply(const MonotoneMap& F, const Vector& x);

/// Hilbert projective distance max_i log(y_i/x_i) - min_i log(y_i/x_i)
/// between strictly positive vectors.
double hilbert_distance(const Vector& x, const Vector& y);

/// G(x) = F(x) / (psi^T F(x)); the result satisfies psi^T G(x) = 1.
Vector normalize(const MonotoneMap& F, const Vector& psi, const Vector& x);

/// Di-graph of F itself (the support of DF at interior points): Lemma-style
/// combinatorial characterization for tensor maps, syntactic occurrence
/// plus norm-factor and dmax-gap edges for polynomial maps.
DiGraph f_digraph(const MonotoneMap& F);

}  // namespace perron
