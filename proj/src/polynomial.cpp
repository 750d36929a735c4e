#include "perron/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace perron {

PolynomialMap::PolynomialMap(int n,
                             std::vector<std::vector<Monomial>> components)
    : n_(n), components_(std::move(components)) {
  if (n_ <= 0) throw ValidationError("polynomial map dimension must be positive");
  if (static_cast<int>(components_.size()) != n_)
    throw ValidationError("expected " + std::to_string(n_) +
                          " components, got " +
                          std::to_string(components_.size()));

  degrees_.assign(n_, 0);
  for (int i = 0; i < n_; ++i) {
    auto& comp = components_[i];
    std::vector<Monomial> kept;
    kept.reserve(comp.size());
    for (auto& m : comp) {
      if (static_cast<int>(m.exponents.size()) != n_)
        throw ValidationError("monomial of component " + std::to_string(i) +
                              " has exponent vector of wrong length");
      for (int e : m.exponents)
        if (e < 0)
          throw ValidationError("negative exponent in component " +
                                std::to_string(i));
      if (!std::isfinite(m.coefficient) || m.coefficient < 0.0)
        throw ValidationError("negative or non-finite coefficient in component " +
                              std::to_string(i));
      if (m.coefficient == 0.0) continue;
      kept.push_back(std::move(m));
    }
    std::sort(kept.begin(), kept.end(), [](const Monomial& a, const Monomial& b) {
      return a.exponents < b.exponents;
    });
    for (std::size_t k = 1; k < kept.size(); ++k)
      if (kept[k].exponents == kept[k - 1].exponents)
        throw ValidationError("duplicate exponent vector in component " +
                              std::to_string(i));
    for (const auto& m : kept) degrees_[i] = std::max(degrees_[i], m.degree());
    comp = std::move(kept);
  }
  max_degree_ = *std::max_element(degrees_.begin(), degrees_.end());
}

bool PolynomialMap::homogeneous() const {
  for (int i = 0; i < n_; ++i) {
    if (components_[i].empty()) return false;
    for (const auto& m : components_[i])
      if (m.degree() != max_degree_) return false;
  }
  return true;
}

Vector evaluate_poly(const PolynomialMap& P, const Vector& x) {
  if (x.size() != P.dimension())
    throw DimensionError("vector of length " + std::to_string(x.size()) +
                         " does not match map dimension " +
                         std::to_string(P.dimension()));
  const int n = P.dimension();
  Vector out = Vector::Zero(n);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (const auto& m : P.components()[i]) {
      double term = m.coefficient;
      for (int k = 0; k < n; ++k)
        for (int e = 0; e < m.exponents[k]; ++e) term *= x[k];
      sum += term;
    }
    out[i] = sum;
  }
  return out;
}

ComplexVector evaluate_poly(const PolynomialMap& P, const ComplexVector& v) {
  if (v.size() != P.dimension())
    throw DimensionError("complex vector does not match map dimension");
  const int n = P.dimension();
  ComplexVector out = ComplexVector::Zero(n);
  for (int i = 0; i < n; ++i) {
    std::complex<double> sum = 0.0;
    for (const auto& m : P.components()[i]) {
      std::complex<double> term = m.coefficient;
      for (int k = 0; k < n; ++k)
        for (int e = 0; e < m.exponents[k]; ++e) term *= v[k];
      sum += term;
    }
    out[i] = sum;
  }
  return out;
}

}  // namespace perron
