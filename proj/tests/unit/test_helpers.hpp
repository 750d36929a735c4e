#pragma once

#include <vector>

#include "perron/tensor.hpp"

namespace testutil {

using perron::BlockVector;
using perron::NonnegTensor;
using perron::TensorEntry;
using perron::Vector;

// The 2x2x2 tensor with f_{iii} = a and every other entry b (the running
// two-parameter example family).
inline NonnegTensor symmetric_222(double a, double b) {
  std::vector<TensorEntry> entries;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        entries.push_back({{i, j, k}, (i == j && j == k) ? a : b});
  return NonnegTensor({2, 2, 2}, entries);
}

inline NonnegTensor all_ones_222() { return symmetric_222(1.0, 1.0); }

// f_{000} = f_{111} = 1, a pair of disjoint triangles in the partite graph.
inline NonnegTensor diagonal_222() {
  return NonnegTensor({2, 2, 2}, {{{0, 0, 0}, 1.0}, {{1, 1, 1}, 1.0}});
}

// d = 2 swap matrix [[0,1],[1,0]].
inline NonnegTensor swap_matrix() {
  return NonnegTensor({2, 2}, {{{0, 1}, 1.0}, {{1, 0}, 1.0}});
}

// The 3x4 bilinear example matrix with unit diagonal and 0.2 elsewhere.
inline NonnegTensor wide_matrix() {
  std::vector<TensorEntry> entries;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j)
      entries.push_back({{i, j}, i == j ? 1.0 : 0.2});
  return NonnegTensor({3, 4}, entries);
}

inline BlockVector ones_blocks(const NonnegTensor& T) {
  std::vector<Vector> blocks;
  for (int j = 0; j < T.order(); ++j)
    blocks.push_back(Vector::Ones(T.dims()[j]));
  return BlockVector(blocks);
}

}  // namespace testutil
