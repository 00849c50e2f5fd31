#include "more/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace more {

Graph build_graph(std::span<const Edge> edge_pairs, std::size_t n) {
  std::vector<Edge> directed;
  directed.reserve(edge_pairs.size() * 2);
  for (const auto& [u, v] : edge_pairs) {
    if (u >= n || v >= n) {
      throw std::out_of_range("build_graph: edge (" + std::to_string(u) + ", " + std::to_string(v) +
                              ") references a node outside [0, " + std::to_string(n) + ")");
    }
    if (u == v) continue;
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  Graph g;
  g.offsets_.assign(n + 1, 0);
  g.targets_.reserve(directed.size());
  for (const auto& [u, v] : directed) {
    ++g.offsets_[u + 1];
    g.targets_.push_back(v);
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
  return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  const auto nu = neighbors(u);
  return std::binary_search(nu.begin(), nu.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::vector<std::size_t> degrees(const Graph& g) {
  std::vector<std::size_t> d(g.node_count());
  for (NodeId v = 0; v < d.size(); ++v) d[v] = g.degree(v);
  return d;
}

SparseMatrix renormalized_propagator(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> dbar(n);
  for (NodeId v = 0; v < n; ++v) dbar[v] = static_cast<double>(g.degree(v) + 1);

  std::vector<SparseMatrix::Triplet> triplets;
  triplets.reserve(n + 2 * g.edge_count());
  for (NodeId u = 0; u < n; ++u) {
    triplets.push_back({u, u, 1.0 / dbar[u]});
    // The product is commutative in floating point, so the result is exactly symmetric.
    for (NodeId v : g.neighbors(u)) triplets.push_back({u, v, 1.0 / std::sqrt(dbar[u] * dbar[v])});
  }
  return SparseMatrix::from_triplets(n, n, std::move(triplets));
}

}  // namespace more
