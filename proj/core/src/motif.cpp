#include "more/motif.hpp"

#include <stdexcept>
#include <string>

namespace more {

namespace {

constexpr std::array<MotifSignature, kMotifCount> kSignatures = {{
    {"M31", 3, 3, 2, 1, 1},
    {"M32", 3, 2, 2, 2, 0},
    {"M41", 4, 6, 3, 1, 4},
    {"M42", 4, 5, 3, 2, 2},
    {"M43", 4, 4, 2, 2, 0},
}};

constexpr std::size_t idx(MotifKind k) { return static_cast<std::size_t>(k); }

std::uint64_t choose2(std::uint64_t k) { return k == 0 ? 0 : k * (k - 1) / 2; }

void bump(MotifCensus& c, MotifKind k, std::initializer_list<NodeId> nodes) {
  ++c.global[idx(k)];
  for (NodeId v : nodes) ++c.nmd[v][idx(k)];
}

}  // namespace

const MotifSignature& signature(MotifKind kind) { return kSignatures[idx(kind)]; }

std::string_view motif_code(MotifKind kind) { return signature(kind).code; }

MotifCensus census(const Graph& g) {
  const std::size_t n = g.node_count();
  MotifCensus c;
  c.nmd.assign(n, MotifCounts{});

  // Triangles (u < v < w) and their K4 extensions (u < v < w < x).
  std::vector<NodeId> stamp_u(n, static_cast<NodeId>(-1));
  std::vector<NodeId> stamp_v(n, static_cast<NodeId>(-1));
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId x : g.neighbors(u)) stamp_u[x] = u;
    for (NodeId v : g.neighbors(u)) {
      if (v <= u) continue;
      for (NodeId x : g.neighbors(v)) stamp_v[x] = v;
      for (NodeId w : g.neighbors(v)) {
        if (w <= v || stamp_u[w] != u) continue;
        bump(c, MotifKind::kTriangle, {u, v, w});
        for (NodeId x : g.neighbors(w)) {
          if (x > w && stamp_u[x] == u && stamp_v[x] == v) bump(c, MotifKind::kClique4, {u, v, w, x});
        }
      }
    }
  }

  // Induced open wedges. Centre: C(d,2) minus closed wedges. Endpoint: each
  // neighbor u offers d_u - 1 second hops, two of which per triangle close up.
  std::uint64_t wedges = 0;
  for (NodeId v = 0; v < n; ++v) {
    const std::uint64_t t = c.nmd[v][idx(MotifKind::kTriangle)];
    std::uint64_t endpoint = 0;
    for (NodeId u : g.neighbors(v)) endpoint += g.degree(u) - 1;
    c.nmd[v][idx(MotifKind::kPath3)] = (choose2(g.degree(v)) - t) + (endpoint - 2 * t);
    wedges += choose2(g.degree(v));
  }
  c.global[idx(MotifKind::kPath3)] = wedges - 3 * c.count(MotifKind::kTriangle);

  // Diamonds: the chord is the unique edge joining the two degree-3 nodes, so
  // each diamond is seen once from its chord (u, v) with a non-adjacent pair of
  // common neighbors.
  std::vector<NodeId> common;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId x : g.neighbors(u)) stamp_u[x] = u;
    for (NodeId v : g.neighbors(u)) {
      if (v <= u) continue;
      common.clear();
      for (NodeId w : g.neighbors(v)) {
        if (stamp_u[w] == u) common.push_back(w);
      }
      for (std::size_t i = 0; i < common.size(); ++i) {
        for (std::size_t j = i + 1; j < common.size(); ++j) {
          if (!g.has_edge(common[i], common[j])) {
            bump(c, MotifKind::kDiamond, {u, v, common[i], common[j]});
          }
        }
      }
    }
  }

  // Chordless 4-cycles. cycles(v) = sum over opposite corners c of C(k_vc, 2)
  // counts every 4-cycle through v; a diamond holds one and a K4 three.
  std::vector<std::uint32_t> hits(n, 0);
  std::vector<NodeId> touched;
  std::uint64_t cycle_ends = 0;
  for (NodeId v = 0; v < n; ++v) {
    touched.clear();
    for (NodeId u : g.neighbors(v)) {
      for (NodeId w : g.neighbors(u)) {
        if (w == v) continue;
        if (hits[w]++ == 0) touched.push_back(w);
      }
    }
    std::uint64_t cycles = 0;
    for (NodeId w : touched) {
      cycles += choose2(hits[w]);
      hits[w] = 0;
    }
    cycle_ends += cycles;
    auto& row = c.nmd[v];
    row[idx(MotifKind::kCycle4)] = cycles - row[idx(MotifKind::kDiamond)] - 3 * row[idx(MotifKind::kClique4)];
  }
  c.global[idx(MotifKind::kCycle4)] =
      cycle_ends / 4 - c.count(MotifKind::kDiamond) - 3 * c.count(MotifKind::kClique4);

  return c;
}

MotifCensus brute_force_census(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n > kBruteForceMaxNodes) {
    throw std::invalid_argument("brute_force_census: " + std::to_string(n) + " nodes exceeds the limit of " +
                                std::to_string(kBruteForceMaxNodes));
  }
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (const auto& [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;

  MotifCensus c;
  c.nmd.assign(n, MotifCounts{});
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      for (NodeId d = b + 1; d < n; ++d) {
        const int e = adj[a][b] + adj[a][d] + adj[b][d];
        if (e == 3) bump(c, MotifKind::kTriangle, {a, b, d});
        if (e == 2) bump(c, MotifKind::kPath3, {a, b, d});
      }
    }
  }
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId b = a + 1; b < n; ++b) {
      for (NodeId d = b + 1; d < n; ++d) {
        for (NodeId f = d + 1; f < n; ++f) {
          const std::array<NodeId, 4> q = {a, b, d, f};
          std::array<int, 4> deg{};
          int edges = 0;
          for (int i = 0; i < 4; ++i) {
            for (int j = i + 1; j < 4; ++j) {
              if (adj[q[i]][q[j]]) {
                ++edges;
                ++deg[i];
                ++deg[j];
              }
            }
          }
          if (edges == 6) {
            bump(c, MotifKind::kClique4, {a, b, d, f});
          } else if (edges == 5) {
            bump(c, MotifKind::kDiamond, {a, b, d, f});
          } else if (edges == 4 && deg[0] == 2 && deg[1] == 2 && deg[2] == 2 && deg[3] == 2) {
            bump(c, MotifKind::kCycle4, {a, b, d, f});
          }
        }
      }
    }
  }
  return c;
}

MotifCounts non_induced_counts(const Graph& g, const MotifCensus& induced) {
  MotifCounts out{};
  std::uint64_t wedges = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) wedges += choose2(g.degree(v));
  const auto tri = induced.count(MotifKind::kTriangle);
  const auto k4 = induced.count(MotifKind::kClique4);
  const auto diamond = induced.count(MotifKind::kDiamond);
  out[idx(MotifKind::kTriangle)] = tri;
  out[idx(MotifKind::kPath3)] = wedges;
  out[idx(MotifKind::kClique4)] = k4;
  out[idx(MotifKind::kDiamond)] = diamond + 6 * k4;
  out[idx(MotifKind::kCycle4)] = induced.count(MotifKind::kCycle4) + diamond + 3 * k4;
  return out;
}

DenseMatrix nmd_matrix(const MotifCensus& c) {
  DenseMatrix m(c.nmd.size(), kMotifCount);
  for (std::size_t v = 0; v < c.nmd.size(); ++v) {
    for (std::size_t k = 0; k < kMotifCount; ++k) m(v, k) = static_cast<double>(c.nmd[v][k]);
  }
  return m;
}

}  // namespace more
