#pragma once

#include <Eigen/Core>
#include <vector>

#include "perron/errors.hpp"
#include "perron/polynomial.hpp"

namespace perron {

/// One stored coefficient f_{i_1..i_d} of a sparse nonnegative tensor.
struct TensorEntry {
  std::vector<int> index;  // length d, 0-based, index[j] in [0, dims[j])
  double value = 0.0;      // strictly positive as stored
};

/// Sparse d-way array of nonnegative coefficients in COO form with
/// canonical lexicographic ordering of multi-indices.  Zero coefficients
/// are silently dropped; negative coefficients and duplicate multi-indices
/// are construction errors.  Requires d >= 2 and every dimension >= 2.
class NonnegTensor {
 public:
  NonnegTensor(std::vector<int> dims, std::vector<TensorEntry> entries);

  int order() const { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<TensorEntry>& entries() const { return entries_; }

  /// Offset of block j inside the concatenated variable vector.
  int block_offset(int j) const { return offsets_[j]; }
  /// n = m_1 + ... + m_d.
  int total_dim() const { return offsets_.back(); }
  /// Global vertex/variable id of coordinate i of block j.
  int vertex_id(int j, int i) const { return offsets_[j] + i; }

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;  // size d+1
  std::vector<TensorEntry> entries_;
};

/// Vector grouped into the d blocks (x_1, ..., x_d) matching a tensor's
/// dimensions; also viewable as one concatenated vector.
class BlockVector {
 public:
  explicit BlockVector(std::vector<Vector> blocks);

  static BlockVector split(const NonnegTensor& T, const Vector& concat);

  const std::vector<Vector>& blocks() const { return blocks_; }
  Vector& block(int j) { return blocks_[j]; }
  const Vector& block(int j) const { return blocks_[j]; }
  int block_count() const { return static_cast<int>(blocks_.size()); }

  Vector concat() const;
  int total_dim() const;

  bool compatible_with(const NonnegTensor& T) const;

 private:
  std::vector<Vector> blocks_;
};

/// Norm exponents p_1..p_d, each > 1, with pmax = max p_j.
struct NormWeights {
  explicit NormWeights(std::vector<double> p_list);

  std::vector<double> p;
  double pmax = 0.0;
};

/// f(x_1,..,x_d) = sum f_{i_1..i_d} x_{i_1,1} ... x_{i_d,d}.
double evaluate_form(const NonnegTensor& T, const BlockVector& x);

/// Gradient slice in slot j (0-based): component i is the sum over all
/// other indices of f * prod_{k != j} x_{i_k,k}.
Vector evaluate_slot(const NonnegTensor& T, int slot, const BlockVector& x);

/// The polynomial system over the concatenated n = sum m_j variables whose
/// component for (slot j, row i) is evaluate_slot(T, j, .)_i; every
/// component is homogeneous of degree d-1.
PolynomialMap tensor_system(const NonnegTensor& T);

}  // namespace perron
