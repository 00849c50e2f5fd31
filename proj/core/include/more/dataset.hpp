#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "more/features.hpp"
#include "more/graph.hpp"
#include "more/motif.hpp"
#include "more/training.hpp"

namespace more {

/// A labelled graph with node attributes.
struct Dataset {
  std::string name;
  Graph graph;
  AttributeFeatures aft;
  std::vector<int> labels;
  std::size_t label_count = 0;
};

enum class IdBase : std::uint8_t { kZero, kOne };

/// Reads whitespace-separated "u v" pairs. Blank lines and lines starting with
/// '#' or '%' are skipped; extra columns are ignored. Returned ids are 0-based.
/// Throws FormatError with the 1-based line number on malformed input.
std::vector<Edge> read_edge_list(std::istream& in, IdBase base = IdBase::kZero);
std::vector<Edge> read_edge_list(const std::filesystem::path& path, IdBase base = IdBase::kZero);

void write_edge_list(std::ostream& out, const Graph& g);

/// Edge list plus a "node label" file with exactly one row per node; the
/// label file fixes the node count. Attributes are synthetic one-hot
/// rows seeded by `seed`. Integer labels keep their numeric order after
/// compaction; other label tokens are numbered by first appearance.
Dataset load_edge_list_dataset(const std::filesystem::path& edges_path, const std::filesystem::path& labels_path,
                               std::string name, IdBase base = IdBase::kZero, std::uint64_t seed = 0);

/// Cora-style `.content` (id, binary features, label) and `.cites` (cited,
/// citing) pair. Paper ids are mapped to indices in content order, labels in
/// first-appearance order, citations become undirected edges.
Dataset load_cora(const std::filesystem::path& content_path, const std::filesystem::path& cites_path,
                  std::string name = "cora");
Dataset load_cora(std::istream& content, std::istream& cites, std::string name = "cora");

/// GML graph whose nodes carry an `id` and a `value` attribute used as the
/// label (the format of Newman's football and polblogs files).
Dataset load_gml_dataset(const std::filesystem::path& path, std::string name, std::uint64_t seed = 0);
Dataset load_gml_dataset(std::istream& in, std::string name, std::uint64_t seed = 0);

/// Planted partition: `communities` near-equal blocks, edges inside a block
/// with probability p_in and across blocks with p_out. Throws
/// std::invalid_argument unless communities >= 2 and 0 <= p_out < p_in <= 1.
Dataset generate_synthetic(std::size_t n, std::size_t communities, double p_in, double p_out, std::uint64_t seed);

/// Dense communities for all classes but the last, whose nodes are isolated and
/// so have all-zero structural rows. Attributes are a one-hot class indicator
/// followed by `noise_dims` random bits, so the label is recoverable from
/// attributes alone.
Dataset generate_isolated_class(std::size_t nodes_per_class, std::size_t classes, double p_in,
                                std::size_t noise_dims, std::uint64_t seed);

/// Graph-derived model inputs for a dataset.
struct PreparedData {
  MotifCensus census;
  GraphData data;
};

PreparedData prepare(const Dataset& ds, ScaleMode sft_scale = ScaleMode::kNone);

/// Fails with std::invalid_argument when labels or features disagree with the graph.
void validate(const Dataset& ds);

}  // namespace more
