#include "more/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "more/errors.hpp"
#include "more/random.hpp"

namespace more {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Seed tags keep initialisation, split and dropout streams independent.
constexpr std::uint64_t kInitTag = 1;
constexpr std::uint64_t kEpochTagBase = 1000;

}  // namespace

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  if (name == "more" || name == "MORE") return ModelKind::kMore;
  if (name == "gcn" || name == "GCN" || name == "baseline") return ModelKind::kBaseline;
  return std::nullopt;
}

std::string_view to_string(ModelKind kind) { return kind == ModelKind::kMore ? "more" : "gcn"; }

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw std::invalid_argument("train config: lr must be positive");
  if (tolerance == 0) throw std::invalid_argument("train config: tolerance must be at least 1");
  if (embed_dim == 0) throw std::invalid_argument("train config: embed_dim must be at least 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("train config: dropout must lie in [0, 1)");
  if (!(l2 >= 0.0)) throw std::invalid_argument("train config: l2 must be non-negative");
}

std::string_view TrainConfig::variant_name() const {
  if (model == ModelKind::kBaseline) return "GCN";
  switch (aggregator) {
    case Aggregator::kHadamard: return "MORE-HA";
    case Aggregator::kSum: return "MORE-SU";
    case Aggregator::kConcat: return "MORE-CO";
  }
  return "MORE-HA";
}

SplitSizes split_sizes(std::size_t n) {
  SplitSizes s{150, 500, 500};
  if (n < 1150 || n > 3000) s = {n * 150 / 1150, n * 500 / 1150, n * 500 / 1150};
  if (s.train == 0 || s.val == 0 || s.test == 0) {
    throw std::invalid_argument("make_split: " + std::to_string(n) + " nodes are too few for a three-way split");
  }
  return s;
}

Split make_split(std::size_t n, std::uint64_t seed) {
  const SplitSizes sizes = split_sizes(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  Split s;
  auto take = [&, pos = std::size_t{0}](std::size_t count) mutable {
    std::vector<std::size_t> part(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                  order.begin() + static_cast<std::ptrdiff_t>(pos + count));
    pos += count;
    std::sort(part.begin(), part.end());
    return part;
  };
  s.train = take(sizes.train);
  s.val = take(sizes.val);
  s.test = take(sizes.test);
  return s;
}

void adam_step(std::span<DenseMatrix* const> params, std::span<const DenseMatrix* const> grads, AdamState& state,
               double lr) {
  if (params.size() != grads.size()) throw ShapeError("adam_step: parameter and gradient counts differ");
  if (state.first.empty()) {
    for (const DenseMatrix* p : params) {
      state.first.emplace_back(p->rows(), p->cols());
      state.second.emplace_back(p->rows(), p->cols());
    }
  }
  if (state.first.size() != params.size()) throw ShapeError("adam_step: state tracks a different parameter list");

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(state.beta1, t);
  const double correct2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    DenseMatrix& p = *params[k];
    const DenseMatrix& g = *grads[k];
    if (!p.same_shape(g) || !p.same_shape(state.first[k])) {
      throw ShapeError("adam_step: shape mismatch for parameter " + std::to_string(k));
    }
    auto pv = p.values();
    const auto gv = g.values();
    auto m = state.first[k].values();
    auto v = state.second[k].values();
    for (std::size_t i = 0; i < pv.size(); ++i) {
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * gv[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * gv[i] * gv[i];
      const double m_hat = m[i] / correct1;
      const double v_hat = v[i] / correct2;
      pv[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

ModelParams init_params(const GraphData& data, const TrainConfig& config) {
  const std::uint64_t seed = derive_seed(config.seed, kInitTag);
  if (config.model == ModelKind::kBaseline) {
    return init_baseline_params(data.aft.cols(), config.embed_dim, data.label_count, seed);
  }
  return init_more_params(data.aft.cols(), data.sft.cols(), config.embed_dim, data.label_count, config.aggregator,
                          seed);
}

namespace {

ModelOutput forward(const GraphData& data, const ModelParams& params, Aggregator aggregator,
                    const DropoutSpec& dropout) {
  if (const auto* p = std::get_if<MoreParams>(&params)) {
    return more_forward(data.propagator, data.aft, data.sft, *p, aggregator, dropout);
  }
  return baseline_forward(data.propagator, data.aft, std::get<BaselineParams>(params), dropout);
}

double model_loss(const ModelOutput& out, const GraphData& data, std::span<const std::size_t> mask,
                  const ModelParams& params, double l2) {
  return std::visit([&](const auto& p) { return loss(out, data.labels, mask, p, l2); }, params);
}

}  // namespace

ModelOutput predict(const GraphData& data, const ModelParams& params, Aggregator aggregator) {
  return forward(data, params, aggregator, DropoutSpec{});
}

double accuracy(const DenseMatrix& probs, std::span<const int> labels, std::span<const std::size_t> mask) {
  if (mask.empty()) throw std::invalid_argument("accuracy: empty node mask");
  const std::vector<int> predicted = argmax_rows(probs);
  std::size_t hits = 0;
  for (std::size_t i : mask) hits += predicted.at(i) == labels[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(mask.size());
}

double evaluate(const GraphData& data, const ModelParams& params, Aggregator aggregator,
                std::span<const std::size_t> mask) {
  return accuracy(predict(data, params, aggregator).probs, data.labels, mask);
}

TrainResult train(const GraphData& data, const Split& split, const TrainConfig& config) {
  config.validate();
  if (data.labels.size() != data.aft.rows()) throw ShapeError("train: label count differs from node count");

  ModelParams params = init_params(data, config);
  ModelParams best = params;
  AdamState adam;
  TrainReport report;
  std::size_t since_best = 0;
  double step_seconds = 0.0;

  const auto loop_start = Clock::now();
  for (std::size_t epoch = 1; epoch <= config.max_epoch; ++epoch) {
    const auto step_start = Clock::now();
    const DropoutSpec dropout{true, config.dropout, derive_seed(config.seed, kEpochTagBase + epoch)};
    const ModelOutput out = forward(data, params, config.aggregator, dropout);

    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = model_loss(out, data, split.train, params, config.l2);
    if (!std::isfinite(m.train_loss)) throw TrainingError("non-finite training loss", epoch);
    m.train_acc = accuracy(out.probs, data.labels, split.train);

    std::visit(
        [&](auto& p) {
          auto grad = backward(data.propagator, out, data.labels, split.train, p, config.l2);
          const auto grads = std::as_const(grad).tensors();
          adam_step(p.tensors(), grads, adam, config.lr);
        },
        params);
    step_seconds += seconds_since(step_start);

    const ModelOutput eval = predict(data, params, config.aggregator);
    m.val_loss = model_loss(eval, data, split.val, params, config.l2);
    if (!std::isfinite(m.val_loss)) throw TrainingError("non-finite validation loss", epoch);
    m.test_loss = model_loss(eval, data, split.test, params, config.l2);
    m.val_acc = accuracy(eval.probs, data.labels, split.val);
    m.test_acc = accuracy(eval.probs, data.labels, split.test);
    report.curves.push_back(m);
    report.iter_count = epoch;

    if (m.val_loss < report.best_val_loss) {
      report.best_val_loss = m.val_loss;
      report.best_epoch = epoch;
      best = params;
      since_best = 0;
    } else if (++since_best >= config.tolerance) {
      break;
    }
  }
  report.oit = seconds_since(loop_start);
  report.astt = report.iter_count == 0 ? 0.0 : step_seconds / static_cast<double>(report.iter_count);

  const auto test_start = Clock::now();
  report.test_accuracy = evaluate(data, best, config.aggregator, split.test);
  report.tet = seconds_since(test_start);
  return {std::move(report), std::move(best)};
}

}  // namespace more
