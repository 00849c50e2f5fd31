#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "more/matrix.hpp"

namespace more {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph. Adjacency is stored CSR-style with each
/// neighbor list sorted ascending.
class Graph {
 public:
  Graph() = default;

  std::size_t node_count() const noexcept { return offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(NodeId u, NodeId v) const;

  /// Each edge once as (u, v) with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;

  friend Graph build_graph(std::span<const Edge> edge_pairs, std::size_t n);

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
};

/// Builds a simple undirected graph on nodes [0, n). Self-loops, duplicates and
/// reversed copies are dropped. Throws std::out_of_range for ids >= n.
Graph build_graph(std::span<const Edge> edge_pairs, std::size_t n);

std::vector<std::size_t> degrees(const Graph& g);

/// D̄^{-1/2} (I + A) D̄^{-1/2} with D̄ the degree matrix of I + A.
SparseMatrix renormalized_propagator(const Graph& g);

}  // namespace more
