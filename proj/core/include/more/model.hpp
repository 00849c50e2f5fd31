#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "more/matrix.hpp"

namespace more {

/// How the attribute and structural embeddings are combined.
enum class Aggregator : std::uint8_t {
  kHadamard,  // HA: elementwise product
  kSum,       // SU: elementwise sum
  kConcat,    // CO: [attribute | structural]
};

std::optional<Aggregator> parse_aggregator(std::string_view name);
std::string_view to_string(Aggregator a);

/// Trainable weights of the dual-branch model.
struct MoreParams {
  DenseMatrix attr_weight;    // d_a x ED
  DenseMatrix struct_weight;  // d_s x ED
  DenseMatrix theta;          // h x L, h = ED (HA, SU) or 2 ED (CO)

  std::vector<DenseMatrix*> tensors() { return {&attr_weight, &struct_weight, &theta}; }
  std::vector<const DenseMatrix*> tensors() const { return {&attr_weight, &struct_weight, &theta}; }
};

/// Two-layer GCN weights.
struct BaselineParams {
  DenseMatrix w0;  // d_a x ED
  DenseMatrix w1;  // ED x L

  std::vector<DenseMatrix*> tensors() { return {&w0, &w1}; }
  std::vector<const DenseMatrix*> tensors() const { return {&w0, &w1}; }
};

/// Glorot-uniform initialisation, one derived stream per matrix.
MoreParams init_more_params(std::size_t attr_dim, std::size_t struct_dim, std::size_t embed_dim,
                            std::size_t label_count, Aggregator mode, std::uint64_t seed);
BaselineParams init_baseline_params(std::size_t attr_dim, std::size_t embed_dim, std::size_t label_count,
                                    std::uint64_t seed);

/// Dropout configuration for one forward pass. Inverted scaling by 1/(1-p);
/// nothing is dropped unless `train` is set.
struct DropoutSpec {
  bool train = false;
  double p = 0.0;
  std::uint64_t seed = 0;
};

/// Intermediates of a single-layer GCN branch.
struct BranchCache {
  DenseMatrix input;       // features after dropout
  DenseMatrix pre_act;     // Ã X W
  DenseMatrix activation;  // ReLU(pre_act)
};

struct MoreCache {
  Aggregator mode = Aggregator::kHadamard;
  BranchCache attr;
  BranchCache structural;
  DenseMatrix aggregate;      // before dropout
  DenseMatrix dropped;        // after dropout
  DenseMatrix dropout_scale;  // per-entry multiplier; empty in eval mode
};

struct BaselineCache {
  BranchCache layer0;
  DenseMatrix hidden_dropped;
  DenseMatrix dropout_scale;  // empty in eval mode
};

/// Row-stochastic class probabilities plus what backward() needs.
struct ModelOutput {
  DenseMatrix probs;
  std::variant<MoreCache, BaselineCache> cache;
};

/// ReLU(Ã · dropout(x) · w).
DenseMatrix gcn_embed(const SparseMatrix& prop, const DenseMatrix& x, const DenseMatrix& w,
                      const DropoutSpec& dropout = {});

DenseMatrix aggregate(const DenseMatrix& attr, const DenseMatrix& structural, Aggregator mode);

/// Max-subtracted row softmax.
DenseMatrix softmax_rows(const DenseMatrix& z);

/// SM(Ã · Aggre(GCN(AFT), GCN(SFT)) · Θ). Dropout streams for the two branches
/// and the aggregate are derived from `dropout.seed`.
ModelOutput more_forward(const SparseMatrix& prop, const DenseMatrix& aft, const DenseMatrix& sft,
                         const MoreParams& params, Aggregator mode, const DropoutSpec& dropout = {});

/// SM(Ã · ReLU(Ã X W0) · W1) with dropout ahead of each layer.
ModelOutput baseline_forward(const SparseMatrix& prop, const DenseMatrix& x, const BaselineParams& params,
                             const DropoutSpec& dropout = {});

inline constexpr double kProbabilityFloor = 1e-12;

/// Mean over `mask` of -ln(max(p_i,label_i, 1e-12)). Throws
/// std::invalid_argument on an empty mask.
double cross_entropy(const DenseMatrix& probs, std::span<const int> labels, std::span<const std::size_t> mask);

/// 0.5 * sum of squared weights over every trainable matrix.
double weight_penalty(const MoreParams& params);
double weight_penalty(const BaselineParams& params);

/// Cross-entropy on the masked nodes plus l2 * weight_penalty(params).
double loss(const ModelOutput& out, std::span<const int> labels, std::span<const std::size_t> mask,
            const MoreParams& params, double l2);
double loss(const ModelOutput& out, std::span<const int> labels, std::span<const std::size_t> mask,
            const BaselineParams& params, double l2);

/// Analytic gradient of loss() with respect to every parameter, reusing the
/// dropout masks stored in `out`. `prop` must be the propagator used in the
/// forward pass. Throws StateError if `out` came from the other model or its
/// shapes disagree with `params`.
MoreParams backward(const SparseMatrix& prop, const ModelOutput& out, std::span<const int> labels,
                    std::span<const std::size_t> mask, const MoreParams& params, double l2);
BaselineParams backward(const SparseMatrix& prop, const ModelOutput& out, std::span<const int> labels,
                        std::span<const std::size_t> mask, const BaselineParams& params, double l2);

/// Index of the largest entry in each row; ties go to the lowest index.
std::vector<int> argmax_rows(const DenseMatrix& probs);

}  // namespace more
