#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "perron/errors.hpp"

namespace perron {

using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// One term a * x^j of a polynomial in n variables.
struct Monomial {
  std::vector<int> exponents;  // length n, entries >= 0
  double coefficient = 0.0;    // strictly positive as stored

  int degree() const {
    int s = 0;
    for (int e : exponents) s += e;
    return s;
  }
};

/// A map P = (P_1, ..., P_n) whose coordinates are polynomials with
/// nonnegative coefficients.  Zero coefficients are dropped on ingestion,
/// negative ones are rejected, and duplicate exponent vectors within a
/// component are a construction error.  Degrees d_i are always computed
/// from the stored monomials (0 for an identically zero component).
class PolynomialMap {
 public:
  PolynomialMap(int n, std::vector<std::vector<Monomial>> components);

  int dimension() const { return n_; }
  const std::vector<std::vector<Monomial>>& components() const {
    return components_;
  }
  const std::vector<int>& degrees() const { return degrees_; }
  int max_degree() const { return max_degree_; }

  /// True when every component is nonempty and all monomials share one
  /// common total degree.
  bool homogeneous() const;

 private:
  int n_;
  std::vector<std::vector<Monomial>> components_;
  std::vector<int> degrees_;
  int max_degree_ = 0;
};

/// Componentwise evaluation; nonnegative on the nonnegative orthant.
Vector evaluate_poly(const PolynomialMap& P, const Vector& x);

/// Evaluation over C^n (integer powers only).
ComplexVector evaluate_poly(const PolynomialMap& P, const ComplexVector& v);

}  // namespace perron
