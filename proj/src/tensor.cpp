#include "perron/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace perron {

namespace {

std::string index_string(const std::vector<int>& idx) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < idx.size(); ++k)
    os << idx[k] << (k + 1 < idx.size() ? "," : "");
  os << ")";
  return os.str();
}

}  // namespace

NonnegTensor::NonnegTensor(std::vector<int> dims,
                           std::vector<TensorEntry> entries)
    : dims_(std::move(dims)) {
  if (dims_.size() < 2)
    throw ValidationError("tensor order must be at least 2, got " +
                          std::to_string(dims_.size()));
  offsets_.resize(dims_.size() + 1, 0);
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    if (dims_[j] < 2)
      throw ValidationError("tensor dimension " + std::to_string(j) +
                            " must be at least 2, got " +
                            std::to_string(dims_[j]));
    offsets_[j + 1] = offsets_[j] + dims_[j];
  }

  entries_.reserve(entries.size());
  for (auto& e : entries) {
    if (e.index.size() != dims_.size())
      throw ValidationError("entry index " + index_string(e.index) +
                            " has wrong arity");
    for (std::size_t j = 0; j < dims_.size(); ++j)
      if (e.index[j] < 0 || e.index[j] >= dims_[j])
        throw ValidationError("entry index " + index_string(e.index) +
                              " out of range in position " +
                              std::to_string(j));
    if (!std::isfinite(e.value) || e.value < 0.0)
      throw ValidationError("entry " + index_string(e.index) +
                            " has negative or non-finite coefficient " +
                            std::to_string(e.value));
    if (e.value == 0.0) continue;  // zeros dropped on ingestion
    entries_.push_back(std::move(e));
  }

  std::sort(entries_.begin(), entries_.end(),
            [](const TensorEntry& a, const TensorEntry& b) {
              return a.index < b.index;
            });
  for (std::size_t k = 1; k < entries_.size(); ++k)
    if (entries_[k].index == entries_[k - 1].index)
      throw ValidationError("duplicate multi-index " +
                            index_string(entries_[k].index));
}

BlockVector::BlockVector(std::vector<Vector> blocks)
    : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ValidationError("block vector has no blocks");
  for (const auto& b : blocks_)
    if (!b.allFinite())
      throw ValidationError("block vector has non-finite entries");
}

BlockVector BlockVector::split(const NonnegTensor& T, const Vector& concat) {
  if (concat.size() != T.total_dim())
    throw DimensionError("vector of length " + std::to_string(concat.size()) +
                         " does not match tensor with total dimension " +
                         std::to_string(T.total_dim()));
  std::vector<Vector> blocks;
  blocks.reserve(T.order());
  for (int j = 0; j < T.order(); ++j)
    blocks.push_back(concat.segment(T.block_offset(j), T.dims()[j]));
  return BlockVector(std::move(blocks));
}

Vector BlockVector::concat() const {
  Vector out(total_dim());
  int at = 0;
  for (const auto& b : blocks_) {
    out.segment(at, b.size()) = b;
    at += static_cast<int>(b.size());
  }
  return out;
}

int BlockVector::total_dim() const {
  int n = 0;
  for (const auto& b : blocks_) n += static_cast<int>(b.size());
  return n;
}

bool BlockVector::compatible_with(const NonnegTensor& T) const {
  if (block_count() != T.order()) return false;
  for (int j = 0; j < T.order(); ++j)
    if (blocks_[j].size() != T.dims()[j]) return false;
  return true;
}

NormWeights::NormWeights(std::vector<double> p_list) : p(std::move(p_list)) {
  if (p.empty()) throw ValidationError("empty norm weight list");
  for (double pj : p)
    if (!std::isfinite(pj) || pj <= 1.0)
      throw ValidationError("norm exponent p_j must lie in (1, inf), got " +
                            std::to_string(pj));
  pmax = *std::max_element(p.begin(), p.end());
}

namespace {

void require_compatible(const NonnegTensor& T, const BlockVector& x) {
  if (!x.compatible_with(T))
    throw DimensionError("block vector does not match tensor dimensions");
}

}  // namespace

double evaluate_form(const NonnegTensor& T, const BlockVector& x) {
  require_compatible(T, x);
  const int d = T.order();
  double sum = 0.0;
  for (const auto& e : T.entries()) {
    double term = e.value;
    for (int k = 0; k < d; ++k) term *= x.block(k)[e.index[k]];
    sum += term;
  }
  return sum;
}

Vector evaluate_slot(const NonnegTensor& T, int slot, const BlockVector& x) {
  require_compatible(T, x);
  if (slot < 0 || slot >= T.order())
    throw DimensionError("slot " + std::to_string(slot) +
                         " out of range for order-" +
                         std::to_string(T.order()) + " tensor");
  const int d = T.order();
  Vector out = Vector::Zero(T.dims()[slot]);
  for (const auto& e : T.entries()) {
    double term = e.value;
    for (int k = 0; k < d; ++k)
      if (k != slot) term *= x.block(k)[e.index[k]];
    out[e.index[slot]] += term;
  }
  return out;
}

PolynomialMap tensor_system(const NonnegTensor& T) {
  const int d = T.order();
  const int n = T.total_dim();
  std::vector<std::vector<Monomial>> comps(n);
  for (const auto& e : T.entries()) {
    for (int j = 0; j < d; ++j) {
      Monomial m;
      m.exponents.assign(n, 0);
      for (int k = 0; k < d; ++k)
        if (k != j) m.exponents[T.vertex_id(k, e.index[k])] += 1;
      m.coefficient = e.value;
      comps[T.vertex_id(j, e.index[j])].push_back(std::move(m));
    }
  }
  return PolynomialMap(n, std::move(comps));
}

}  // namespace perron
