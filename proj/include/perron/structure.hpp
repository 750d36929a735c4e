#pragma once

#include <string>
#include <vector>

#include "perron/polynomial.hpp"
#include "perron/tensor.hpp"

namespace perron {

/// Undirected d-partite support graph of a tensor.  Vertices are labeled by
/// global id (block_offset(j) + i); edges join vertices of distinct parts
/// and are stored with first < second.
struct PartiteGraph {
  std::vector<int> part_sizes;
  std::vector<std::pair<int, int>> edges;

  int vertex_count() const;
  /// (part, index-within-part) of a global vertex id.
  std::pair<int, int> label(int v) const;
};

/// Directed graph on [0, n); loops allowed.
struct DiGraph {
  explicit DiGraph(int n) : adjacency(n) {}

  int vertex_count() const { return static_cast<int>(adjacency.size()); }
  void add_edge(int from, int to);
  bool has_edge(int from, int to) const;
  int edge_count() const;

  std::vector<std::vector<int>> adjacency;  // sorted, deduplicated
};

enum class Verdict { True, False, Skipped };

/// Boolean verdict plus, for a negative one, a witness vertex set
/// (disconnecting component or invariant part).
struct IrreducibilityResult {
  Verdict verdict = Verdict::Skipped;
  std::vector<int> witness;

  bool value() const { return verdict == Verdict::True; }
  bool skipped() const { return verdict == Verdict::Skipped; }
};

struct ConnectivityResult {
  bool connected = false;
  std::vector<int> witness;  // one component when not connected
};

/// Strong connectivity plus the circuit-length gcd (cyclicity) of the
/// graph; weakly primitive means strongly connected with cyclicity 1.
struct PrimitivityResult {
  bool weakly_primitive = false;
  bool strongly_connected = false;
  long cyclicity = 0;  // 0 when the graph has no circuit
  std::vector<int> scc_witness;
};

/// Combined verdicts surfaced by the `check` command.
struct StructureReport {
  ConnectivityResult weakly_irreducible;
  IrreducibilityResult irreducible;
  PrimitivityResult weakly_primitive;
};

/// Maximum vertex/variable count for the exhaustive irreducibility scans.
inline constexpr int kIrreducibilitySizeGuard = 24;

PartiteGraph partite_graph(const NonnegTensor& T);

/// True iff the d-partite support graph is connected; on false the witness
/// is one connected component.
ConnectivityResult is_weakly_irreducible(const NonnegTensor& T);

/// Exhaustive scan over proper nonempty vertex subsets I: the tensor is
/// irreducible iff every I admits an entry with exactly one of its d
/// vertices inside I.  Skipped (never a silent pass) above the size guard.
IrreducibilityResult is_irreducible_tensor(const NonnegTensor& T);

/// Di-graph G(P): edge (i,j) iff x_j occurs in P_i; a monomial of degree
/// below deg P_i additionally yields edges from i to every vertex.
DiGraph map_digraph(const PolynomialMap& P);

/// Di-graph of the tensor map F built from (T, w); requires every slot row
/// to carry an entry and p_j >= d for all j.
DiGraph tensor_F_digraph(const NonnegTensor& T, const NormWeights& w);

ConnectivityResult is_strongly_connected(const DiGraph& G);

/// Strong connectivity and circuit-gcd of G(P); the cyclicity is computed
/// as the gcd of level(u)+1-level(v) over edges in a BFS layering.
PrimitivityResult is_weakly_primitive(const PolynomialMap& P);
PrimitivityResult digraph_primitivity(const DiGraph& G);

/// Exhaustive scan for a nontrivial part Q_I invariant under P; the
/// witness is the invariant index set I.
IrreducibilityResult is_irreducible_map(const PolynomialMap& P);

StructureReport analyze_tensor(const NonnegTensor& T);
StructureReport analyze_poly(const PolynomialMap& P);

}  // namespace perron
