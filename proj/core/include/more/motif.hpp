#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "more/graph.hpp"
#include "more/matrix.hpp"

namespace more {

/// The five connected low-order motifs. Order fixes the NMD column order.
enum class MotifKind : std::uint8_t {
  kTriangle = 0,  // M31
  kPath3,         // M32, open wedge
  kClique4,       // M41, K4
  kDiamond,       // M42, K4 minus one edge
  kCycle4,        // M43, chordless 4-cycle
};

inline constexpr std::size_t kMotifCount = 5;
inline constexpr std::array<MotifKind, kMotifCount> kAllMotifs = {
    MotifKind::kTriangle, MotifKind::kPath3, MotifKind::kClique4, MotifKind::kDiamond,
    MotifKind::kCycle4};

/// Structural signature of a motif pattern: node and edge counts, maximum
/// degree, diameter and number of triangles it contains.
struct MotifSignature {
  std::string_view code;
  std::size_t nodes;
  std::size_t edges;
  std::size_t max_degree;
  std::size_t diameter;
  std::size_t triangles;

  double density() const {
    return static_cast<double>(edges) / static_cast<double>(nodes * (nodes - 1) / 2);
  }
  double mean_degree() const { return 2.0 * static_cast<double>(edges) / static_cast<double>(nodes); }
};

const MotifSignature& signature(MotifKind kind);
std::string_view motif_code(MotifKind kind);

using MotifCounts = std::array<std::uint64_t, kMotifCount>;

/// Global motif counts plus the per-node motif degree table. Every occurrence
/// is counted once per node set.
struct MotifCensus {
  MotifCounts global{};
  std::vector<MotifCounts> nmd;  // one row per node

  std::uint64_t count(MotifKind k) const { return global[static_cast<std::size_t>(k)]; }
  std::uint64_t node_count(std::size_t v, MotifKind k) const {
    return nmd[v][static_cast<std::size_t>(k)];
  }

  friend bool operator==(const MotifCensus&, const MotifCensus&) = default;
};

/// Induced-subgraph census: triangles by neighbor intersection, K4 by
/// extending oriented triangles, diamonds per chord edge, chordless 4-cycles
/// by wedge counting with diamond/K4 correction.
MotifCensus census(const Graph& g);

inline constexpr std::size_t kBruteForceMaxNodes = 64;

/// Enumerates every 3- and 4-node subset. Throws std::invalid_argument when
/// the graph has more than kBruteForceMaxNodes nodes.
MotifCensus brute_force_census(const Graph& g);

/// Non-induced (subgraph) counts of the same patterns: M32 counts all 2-paths,
/// M42 all diamonds including those inside K4s, M43 all 4-cycles.
MotifCounts non_induced_counts(const Graph& g, const MotifCensus& induced);

/// n x 5 view of the motif degree table.
DenseMatrix nmd_matrix(const MotifCensus& c);

}  // namespace more
