#include "more/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "more/errors.hpp"
#include "more/random.hpp"

namespace more {

namespace {

// Stream tags for derive_seed().
constexpr std::uint64_t kAttrStream = 0;
constexpr std::uint64_t kStructStream = 1;
constexpr std::uint64_t kAggregateStream = 2;

DenseMatrix glorot(std::size_t fan_in, std::size_t fan_out, std::uint64_t seed) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Rng rng(seed);
  DenseMatrix w(fan_in, fan_out);
  for (double& v : w.values()) v = rng.uniform(-limit, limit);
  return w;
}

void check_dropout(const DropoutSpec& d) {
  if (!(d.p >= 0.0 && d.p < 1.0)) throw std::invalid_argument("dropout probability must lie in [0, 1)");
}

/// Returns the dropped copy of x and fills `scale` with the per-entry
/// multiplier. Zero entries consume no randomness.
DenseMatrix dropout(const DenseMatrix& x, const DropoutSpec& d, std::uint64_t stream, DenseMatrix* scale) {
  if (!d.train || d.p == 0.0) {
    if (scale) *scale = DenseMatrix();
    return x;
  }
  Rng rng(derive_seed(d.seed, stream));
  const double keep = 1.0 / (1.0 - d.p);
  DenseMatrix out = x;
  if (scale) *scale = DenseMatrix(x.rows(), x.cols(), 0.0);
  auto ov = out.values();
  for (std::size_t i = 0; i < ov.size(); ++i) {
    if (ov[i] == 0.0 && !scale) continue;
    const double s = rng.uniform() < d.p ? 0.0 : keep;
    ov[i] *= s;
    if (scale) scale->values()[i] = s;
  }
  return out;
}

DenseMatrix relu(const DenseMatrix& z) {
  DenseMatrix out = z;
  for (double& v : out.values()) v = std::max(v, 0.0);
  return out;
}

/// g ⊙ 1[z > 0], in place.
void relu_backward(const DenseMatrix& pre_act, DenseMatrix& grad) {
  auto gv = grad.values();
  const auto zv = pre_act.values();
  for (std::size_t i = 0; i < gv.size(); ++i) {
    if (!(zv[i] > 0.0)) gv[i] = 0.0;
  }
}

void apply_scale(const DenseMatrix& scale, DenseMatrix& grad) {
  if (scale.size() == 0) return;
  auto gv = grad.values();
  const auto sv = scale.values();
  for (std::size_t i = 0; i < gv.size(); ++i) gv[i] *= sv[i];
}

BranchCache run_branch(const SparseMatrix& prop, const DenseMatrix& x, const DenseMatrix& w,
                       const DropoutSpec& d, std::uint64_t stream) {
  if (prop.cols() != x.rows()) {
    throw ShapeError("gcn branch: propagator is " + std::to_string(prop.rows()) + "x" +
                     std::to_string(prop.cols()) + " but features have " + std::to_string(x.rows()) + " rows");
  }
  BranchCache b;
  b.input = dropout(x, d, stream, nullptr);
  b.pre_act = spmm(prop, matmul(b.input, w));
  b.activation = relu(b.pre_act);
  return b;
}

void check_targets(const DenseMatrix& probs, std::span<const int> labels, std::span<const std::size_t> mask) {
  if (mask.empty()) throw std::invalid_argument("loss: empty node mask");
  if (labels.size() != probs.rows()) throw ShapeError("loss: label count differs from node count");
  for (std::size_t i : mask) {
    if (i >= probs.rows()) throw std::out_of_range("loss: mask index outside the graph");
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= probs.cols()) {
      throw std::out_of_range("loss: label of node " + std::to_string(i) + " outside [0, L)");
    }
  }
}

/// Gradient of the loss w.r.t. the logits: (p - onehot) / |mask| on masked
/// rows. This is the log-softmax derivative; it agrees with the clamped loss
/// wherever the floor is inactive and keeps saturated rows trainable.
DenseMatrix logits_grad(const DenseMatrix& probs, std::span<const int> labels, std::span<const std::size_t> mask) {
  check_targets(probs, labels, mask);
  DenseMatrix g(probs.rows(), probs.cols());
  const double inv = 1.0 / static_cast<double>(mask.size());
  for (std::size_t i : mask) {
    const auto y = static_cast<std::size_t>(labels[i]);
    auto gi = g.row(i);
    const auto pi = probs.row(i);
    for (std::size_t l = 0; l < gi.size(); ++l) gi[l] += pi[l] * inv;
    gi[y] -= inv;
  }
  return g;
}

/// dW = X^T (Ã dZ) + l2 W, with Ã symmetric.
DenseMatrix weight_grad(const SparseMatrix& prop, const BranchCache& b, const DenseMatrix& d_pre,
                        const DenseMatrix& w, double l2) {
  DenseMatrix g = matmul_tn(b.input, spmm(prop, d_pre));
  axpy(l2, w, g);
  return g;
}

void require_shape(const DenseMatrix& m, std::size_t rows, std::size_t cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw StateError(std::string("backward: ") + what + " shape does not match the cached forward pass");
  }
}

}  // namespace

std::optional<Aggregator> parse_aggregator(std::string_view name) {
  if (name == "ha" || name == "HA") return Aggregator::kHadamard;
  if (name == "su" || name == "SU") return Aggregator::kSum;
  if (name == "co" || name == "CO") return Aggregator::kConcat;
  return std::nullopt;
}

std::string_view to_string(Aggregator a) {
  switch (a) {
    case Aggregator::kHadamard: return "HA";
    case Aggregator::kSum: return "SU";
    case Aggregator::kConcat: return "CO";
  }
  return "HA";
}

MoreParams init_more_params(std::size_t attr_dim, std::size_t struct_dim, std::size_t embed_dim,
                            std::size_t label_count, Aggregator mode, std::uint64_t seed) {
  const std::size_t hidden = mode == Aggregator::kConcat ? 2 * embed_dim : embed_dim;
  return {glorot(attr_dim, embed_dim, derive_seed(seed, 100)),
          glorot(struct_dim, embed_dim, derive_seed(seed, 101)),
          glorot(hidden, label_count, derive_seed(seed, 102))};
}

BaselineParams init_baseline_params(std::size_t attr_dim, std::size_t embed_dim, std::size_t label_count,
                                    std::uint64_t seed) {
  return {glorot(attr_dim, embed_dim, derive_seed(seed, 200)),
          glorot(embed_dim, label_count, derive_seed(seed, 201))};
}

DenseMatrix gcn_embed(const SparseMatrix& prop, const DenseMatrix& x, const DenseMatrix& w,
                      const DropoutSpec& dropout) {
  check_dropout(dropout);
  return run_branch(prop, x, w, dropout, kAttrStream).activation;
}

DenseMatrix aggregate(const DenseMatrix& attr, const DenseMatrix& structural, Aggregator mode) {
  switch (mode) {
    case Aggregator::kHadamard: return hadamard(attr, structural);
    case Aggregator::kSum: return add(attr, structural);
    case Aggregator::kConcat: return concat_columns(attr, structural);
  }
  throw std::invalid_argument("aggregate: unknown mode");
}

DenseMatrix softmax_rows(const DenseMatrix& z) {
  DenseMatrix out = z;
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    if (row.empty()) continue;
    const double mx = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (double& v : row) {
      v = std::exp(v - mx);
      total += v;
    }
    for (double& v : row) v /= total;
  }
  return out;
}

ModelOutput more_forward(const SparseMatrix& prop, const DenseMatrix& aft, const DenseMatrix& sft,
                         const MoreParams& params, Aggregator mode, const DropoutSpec& dropout_spec) {
  check_dropout(dropout_spec);
  MoreCache c;
  c.mode = mode;
  c.attr = run_branch(prop, aft, params.attr_weight, dropout_spec, kAttrStream);
  c.structural = run_branch(prop, sft, params.struct_weight, dropout_spec, kStructStream);
  c.aggregate = aggregate(c.attr.activation, c.structural.activation, mode);
  c.dropped = dropout(c.aggregate, dropout_spec, kAggregateStream, &c.dropout_scale);
  DenseMatrix probs = softmax_rows(spmm(prop, matmul(c.dropped, params.theta)));
  return {std::move(probs), std::move(c)};
}

ModelOutput baseline_forward(const SparseMatrix& prop, const DenseMatrix& x, const BaselineParams& params,
                             const DropoutSpec& dropout_spec) {
  check_dropout(dropout_spec);
  BaselineCache c;
  c.layer0 = run_branch(prop, x, params.w0, dropout_spec, kAttrStream);
  c.hidden_dropped = dropout(c.layer0.activation, dropout_spec, kAggregateStream, &c.dropout_scale);
  DenseMatrix probs = softmax_rows(spmm(prop, matmul(c.hidden_dropped, params.w1)));
  return {std::move(probs), std::move(c)};
}

double cross_entropy(const DenseMatrix& probs, std::span<const int> labels, std::span<const std::size_t> mask) {
  check_targets(probs, labels, mask);
  double total = 0.0;
  for (std::size_t i : mask) {
    total -= std::log(std::max(probs(i, static_cast<std::size_t>(labels[i])), kProbabilityFloor));
  }
  return total / static_cast<double>(mask.size());
}

double weight_penalty(const MoreParams& params) {
  double s = 0.0;
  for (const DenseMatrix* w : params.tensors()) s += w->squared_norm();
  return 0.5 * s;
}

double weight_penalty(const BaselineParams& params) {
  double s = 0.0;
  for (const DenseMatrix* w : params.tensors()) s += w->squared_norm();
  return 0.5 * s;
}

double loss(const ModelOutput& out, std::span<const int> labels, std::span<const std::size_t> mask,
            const MoreParams& params, double l2) {
  return cross_entropy(out.probs, labels, mask) + l2 * weight_penalty(params);
}

double loss(const ModelOutput& out, std::span<const int> labels, std::span<const std::size_t> mask,
            const BaselineParams& params, double l2) {
  return cross_entropy(out.probs, labels, mask) + l2 * weight_penalty(params);
}

MoreParams backward(const SparseMatrix& prop, const ModelOutput& out, std::span<const int> labels,
                    std::span<const std::size_t> mask, const MoreParams& params, double l2) {
  const auto* c = std::get_if<MoreCache>(&out.cache);
  if (!c) throw StateError("backward: cache was produced by the baseline model");
  const std::size_t n = out.probs.rows();
  const std::size_t embed = params.attr_weight.cols();
  require_shape(params.attr_weight, c->attr.input.cols(), embed, "attribute weight");
  require_shape(params.struct_weight, c->structural.input.cols(), embed, "structural weight");
  require_shape(params.theta, c->dropped.cols(), out.probs.cols(), "theta");
  require_shape(c->dropped, n, c->mode == Aggregator::kConcat ? 2 * embed : embed, "aggregate");
  if (prop.rows() != n) throw StateError("backward: propagator does not match the cached forward pass");

  MoreParams grad;
  const DenseMatrix d_logits = logits_grad(out.probs, labels, mask);
  const DenseMatrix prop_d_logits = spmm(prop, d_logits);

  grad.theta = matmul_tn(c->dropped, prop_d_logits);
  axpy(l2, params.theta, grad.theta);

  DenseMatrix d_agg = matmul_nt(prop_d_logits, params.theta);
  apply_scale(c->dropout_scale, d_agg);

  DenseMatrix d_attr;
  DenseMatrix d_struct;
  switch (c->mode) {
    case Aggregator::kHadamard:
      d_attr = hadamard(d_agg, c->structural.activation);
      d_struct = hadamard(d_agg, c->attr.activation);
      break;
    case Aggregator::kSum:
      d_attr = d_agg;
      d_struct = std::move(d_agg);
      break;
    case Aggregator::kConcat:
      d_attr = slice_columns(d_agg, 0, embed);
      d_struct = slice_columns(d_agg, embed, embed);
      break;
  }
  relu_backward(c->attr.pre_act, d_attr);
  relu_backward(c->structural.pre_act, d_struct);
  grad.attr_weight = weight_grad(prop, c->attr, d_attr, params.attr_weight, l2);
  grad.struct_weight = weight_grad(prop, c->structural, d_struct, params.struct_weight, l2);
  return grad;
}

BaselineParams backward(const SparseMatrix& prop, const ModelOutput& out, std::span<const int> labels,
                        std::span<const std::size_t> mask, const BaselineParams& params, double l2) {
  const auto* c = std::get_if<BaselineCache>(&out.cache);
  if (!c) throw StateError("backward: cache was produced by the dual-branch model");
  const std::size_t n = out.probs.rows();
  require_shape(params.w0, c->layer0.input.cols(), c->hidden_dropped.cols(), "w0");
  require_shape(params.w1, c->hidden_dropped.cols(), out.probs.cols(), "w1");
  if (prop.rows() != n || c->hidden_dropped.rows() != n) {
    throw StateError("backward: propagator does not match the cached forward pass");
  }

  BaselineParams grad;
  const DenseMatrix prop_d_logits = spmm(prop, logits_grad(out.probs, labels, mask));
  grad.w1 = matmul_tn(c->hidden_dropped, prop_d_logits);
  axpy(l2, params.w1, grad.w1);

  DenseMatrix d_hidden = matmul_nt(prop_d_logits, params.w1);
  apply_scale(c->dropout_scale, d_hidden);
  relu_backward(c->layer0.pre_act, d_hidden);
  grad.w0 = weight_grad(prop, c->layer0, d_hidden, params.w0, l2);
  return grad;
}

std::vector<int> argmax_rows(const DenseMatrix& probs) {
  std::vector<int> out(probs.rows(), 0);
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    const auto row = probs.row(r);
    out[r] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

}  // namespace more
