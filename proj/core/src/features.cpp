#include "more/features.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "more/errors.hpp"
#include "more/random.hpp"

namespace more {

StructuralFeatures build_sft(const Graph& g, const MotifCensus& c) {
  const std::size_t n = g.node_count();
  if (c.nmd.size() != n) {
    throw ShapeError("build_sft: census covers " + std::to_string(c.nmd.size()) + " nodes, graph has " +
                     std::to_string(n));
  }
  StructuralFeatures f{DenseMatrix(n, kStructuralColumns)};
  for (NodeId v = 0; v < n; ++v) {
    f.matrix(v, 0) = static_cast<double>(g.degree(v));
    for (std::size_t k = 0; k < kMotifCount; ++k) f.matrix(v, k + 1) = static_cast<double>(c.nmd[v][k]);
  }
  return f;
}

AttributeFeatures build_aft(std::optional<DenseMatrix> raw, std::size_t n, std::uint64_t seed) {
  if (raw) {
    if (raw->rows() != n) {
      throw ShapeError("build_aft: feature matrix has " + std::to_string(raw->rows()) + " rows, expected " +
                       std::to_string(n));
    }
    return {std::move(*raw), FeatureSource::kFile};
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(perm));
  DenseMatrix m(n, n);
  for (std::size_t v = 0; v < n; ++v) m(v, perm[v]) = 1.0;
  return {std::move(m), FeatureSource::kSyntheticOneHot};
}

std::optional<ScaleMode> parse_scale_mode(std::string_view name) {
  if (name == "none") return ScaleMode::kNone;
  if (name == "standardize") return ScaleMode::kStandardize;
  if (name == "log1p") return ScaleMode::kLog1p;
  return std::nullopt;
}

std::string_view to_string(ScaleMode mode) {
  switch (mode) {
    case ScaleMode::kNone: return "none";
    case ScaleMode::kStandardize: return "standardize";
    case ScaleMode::kLog1p: return "log1p";
  }
  return "none";
}

StructuralFeatures scale_columns(StructuralFeatures f, ScaleMode mode) {
  DenseMatrix& m = f.matrix;
  switch (mode) {
    case ScaleMode::kNone:
      break;
    case ScaleMode::kLog1p:
      for (double& v : m.values()) v = std::log1p(v);
      break;
    case ScaleMode::kStandardize: {
      const auto rows = static_cast<double>(m.rows());
      for (std::size_t col = 0; col < m.cols(); ++col) {
        double mean = 0.0;
        bool constant = true;
        for (std::size_t r = 0; r < m.rows(); ++r) {
          mean += m(r, col);
          constant = constant && m(r, col) == m(0, col);
        }
        mean /= rows;
        double var = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) var += (m(r, col) - mean) * (m(r, col) - mean);
        const double sd = std::sqrt(var / rows);
        for (std::size_t r = 0; r < m.rows(); ++r) m(r, col) = !constant && sd > 0.0 ? (m(r, col) - mean) / sd : 0.0;
      }
      break;
    }
  }
  return f;
}

}  // namespace more
