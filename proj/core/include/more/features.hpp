#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "more/graph.hpp"
#include "more/matrix.hpp"
#include "more/motif.hpp"

namespace more {

enum class FeatureSource : std::uint8_t { kFile, kSyntheticOneHot };

/// Attribute feature tensor (AFT): one row per node.
struct AttributeFeatures {
  DenseMatrix matrix;
  FeatureSource source = FeatureSource::kFile;
};

/// Number of structural columns: degree followed by the five motif degrees.
inline constexpr std::size_t kStructuralColumns = 1 + kMotifCount;

/// Structural feature tensor (SFT): columns are
/// [degree, M31, M32, M41, M42, M43].
struct StructuralFeatures {
  DenseMatrix matrix;
};

/// Throws ShapeError when the census was taken on a graph of a different size.
StructuralFeatures build_sft(const Graph& g, const MotifCensus& c);

/// Returns `raw` unchanged when given (after checking it has n rows), otherwise
/// an n x n matrix whose rows are a seeded random permutation of the standard
/// basis vectors.
AttributeFeatures build_aft(std::optional<DenseMatrix> raw, std::size_t n, std::uint64_t seed);

enum class ScaleMode : std::uint8_t { kNone, kStandardize, kLog1p };

std::optional<ScaleMode> parse_scale_mode(std::string_view name);
std::string_view to_string(ScaleMode mode);

/// Per-column transform. Standardize uses the population deviation and maps
/// constant columns to zero.
StructuralFeatures scale_columns(StructuralFeatures f, ScaleMode mode);

}  // namespace more
