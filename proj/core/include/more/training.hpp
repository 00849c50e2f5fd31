#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "more/matrix.hpp"
#include "more/model.hpp"

namespace more {

enum class ModelKind : std::uint8_t { kMore, kBaseline };

std::optional<ModelKind> parse_model_kind(std::string_view name);
std::string_view to_string(ModelKind kind);

/// Embedding sizes swept by the benchmark harness.
inline constexpr std::size_t kEmbedDimSweep[] = {32, 64, 128, 256, 512};

struct TrainConfig {
  ModelKind model = ModelKind::kMore;
  Aggregator aggregator = Aggregator::kHadamard;
  double lr = 0.01;
  std::size_t max_epoch = 300;
  double dropout = 0.5;
  double l2 = 5e-4;
  std::size_t tolerance = 30;
  std::size_t embed_dim = 64;
  std::uint64_t seed = 42;

  /// Throws std::invalid_argument on lr <= 0, tolerance == 0, embed_dim == 0
  /// or dropout outside [0, 1).
  void validate() const;

  /// "GCN", "MORE-HA", "MORE-SU" or "MORE-CO".
  std::string_view variant_name() const;
};

/// Disjoint train / validation / test node sets.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

struct SplitSizes {
  std::size_t train;
  std::size_t val;
  std::size_t test;
};

/// 150 / 500 / 500 for 1150 <= n <= 3000; otherwise the same proportions of n,
/// rounded down. Throws std::invalid_argument if any set would be empty.
SplitSizes split_sizes(std::size_t n);

/// Uniformly random split with split_sizes(n); each set is sorted ascending.
Split make_split(std::size_t n, std::uint64_t seed);

/// Bias-corrected Adam moments for a list of parameter matrices.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step = 0;
  std::vector<DenseMatrix> first;
  std::vector<DenseMatrix> second;
};

/// One Adam update of every matrix in `params` using the matching entry of
/// `grads`. Moments are created on the first call.
void adam_step(std::span<DenseMatrix* const> params, std::span<const DenseMatrix* const> grads, AdamState& state,
               double lr);

/// Everything a training run consumes besides the split and config.
struct GraphData {
  SparseMatrix propagator;
  DenseMatrix aft;
  DenseMatrix sft;
  std::vector<int> labels;
  std::size_t label_count = 0;
};

using ModelParams = std::variant<MoreParams, BaselineParams>;

ModelParams init_params(const GraphData& data, const TrainConfig& config);

/// Eval-mode forward pass for whichever model `params` holds.
ModelOutput predict(const GraphData& data, const ModelParams& params, Aggregator aggregator);

/// Fraction of masked nodes whose arg-max class equals the label. Throws
/// std::invalid_argument on an empty mask.
double accuracy(const DenseMatrix& probs, std::span<const int> labels, std::span<const std::size_t> mask);

/// Eval-mode accuracy of `params` on `mask`.
double evaluate(const GraphData& data, const ModelParams& params, Aggregator aggregator,
                std::span<const std::size_t> mask);

struct EpochMetrics {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double test_loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
};

struct TrainReport {
  std::vector<EpochMetrics> curves;
  std::size_t iter_count = 0;
  std::size_t best_epoch = 0;  // 0 when no epoch ran
  double best_val_loss = std::numeric_limits<double>::infinity();
  double astt = 0.0;  // mean seconds of forward + backward + update per epoch
  double oit = 0.0;   // seconds for the whole training loop
  double tet = 0.0;   // seconds for the final test evaluation
  double test_accuracy = 0.0;
};

struct TrainResult {
  TrainReport report;
  ModelParams params;  // from the best-validation-loss epoch
};

/// Full-batch training with Adam and patience-based early stopping on the
/// validation loss. Throws TrainingError when a loss becomes non-finite.
TrainResult train(const GraphData& data, const Split& split, const TrainConfig& config);

}  // namespace more
