#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "more/dataset.hpp"
#include "more/training.hpp"

namespace more {

/// One (dataset, variant, config) result.
struct BenchmarkRow {
  std::string dataset;
  std::string model;       // GCN, MORE-HA, MORE-SU, MORE-CO
  std::string aggregator;  // "-" for GCN
  double lr = 0.0;
  std::size_t max_epoch = 0;
  std::size_t embed_dim = 0;
  double accuracy = 0.0;
  std::size_t iter_count = 0;
  double astt = 0.0;
  double oit = 0.0;
  double tet = 0.0;
  std::string error;  // empty on success
};

/// Parses a JSON array of config objects. "embed_dim" may be a list, which
/// expands into one config per entry. Throws FormatError.
std::vector<TrainConfig> parse_config_grid(std::istream& in);

/// The four compared variants of a base config: GCN, MORE-HA, MORE-SU, MORE-CO.
std::vector<TrainConfig> expand_variants(const TrainConfig& base);

struct BenchmarkInput {
  std::string name;
  PreparedData prepared;
  Split split;
};

/// Runs every dataset x variant x config. A failing run is recorded in its
/// row's `error` field and the grid continues. Rows are sorted by dataset,
/// model, lr, max_epoch, embed_dim.
std::vector<BenchmarkRow> run_benchmark(const std::vector<BenchmarkInput>& datasets,
                                        const std::vector<TrainConfig>& grid);

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);
void write_benchmark_table(std::ostream& out, const std::vector<BenchmarkRow>& rows);

/// Highest-accuracy row per (dataset, model, lr, max_epoch) across embed dims.
std::vector<BenchmarkRow> best_per_embed_sweep(const std::vector<BenchmarkRow>& rows);

}  // namespace more
