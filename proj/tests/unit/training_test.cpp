#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "more/dataset.hpp"
#include "more/errors.hpp"
#include "more/training.hpp"

using namespace more;

namespace {

const PreparedData& small_synthetic() {
  static const PreparedData prepared = prepare(generate_synthetic(200, 2, 0.3, 0.01, 5));
  return prepared;
}

TrainConfig quick_config(ModelKind model, Aggregator agg) {
  TrainConfig c;
  c.model = model;
  c.aggregator = agg;
  c.embed_dim = 16;
  c.max_epoch = 40;
  c.seed = 3;
  return c;
}

}  // namespace

TEST(SplitSizes, FixedBandAndProportional) {
  const SplitSizes cora = split_sizes(2708);
  EXPECT_EQ(cora.train, 150u);
  EXPECT_EQ(cora.val, 500u);
  EXPECT_EQ(cora.test, 500u);
  const SplitSizes football = split_sizes(115);
  EXPECT_EQ(football.train, 15u);
  EXPECT_EQ(football.val, 50u);
  EXPECT_EQ(football.test, 50u);
  const SplitSizes big = split_sizes(4600);
  EXPECT_EQ(big.train, 600u);
  EXPECT_EQ(big.val, 2000u);
  EXPECT_THROW(split_sizes(5), std::invalid_argument);
}

TEST(MakeSplit, DisjointSortedAndSeeded) {
  const Split a = make_split(1000, 7);
  std::set<std::size_t> all;
  for (const auto* part : {&a.train, &a.val, &a.test}) {
    EXPECT_TRUE(std::is_sorted(part->begin(), part->end()));
    for (std::size_t v : *part) {
      EXPECT_LT(v, 1000u);
      all.insert(v);
    }
  }
  EXPECT_EQ(all.size(), a.train.size() + a.val.size() + a.test.size());
  const Split b = make_split(1000, 7);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(a.train, make_split(1000, 8).train);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  // m̂ = g and v̂ = g², so the step is lr·g/(|g| + ε).
  DenseMatrix w{{1.0, -2.0}};
  const DenseMatrix g{{3.0, -0.5}};
  AdamState state;
  DenseMatrix* params[] = {&w};
  const DenseMatrix* grads[] = {&g};
  adam_step(params, grads, state, 0.01);
  EXPECT_NEAR(w(0, 0), 1.0 - 0.01 * 3.0 / (3.0 + 1e-8), 1e-15);
  EXPECT_NEAR(w(0, 1), -2.0 + 0.01 * 0.5 / (0.5 + 1e-8), 1e-15);
  EXPECT_EQ(state.step, 1u);
}

TEST(Adam, ZeroGradientLeavesParameters) {
  DenseMatrix w{{1.0, 2.0}, {3.0, 4.0}};
  const DenseMatrix before = w;
  const DenseMatrix g(2, 2);
  AdamState state;
  DenseMatrix* params[] = {&w};
  const DenseMatrix* grads[] = {&g};
  for (int i = 0; i < 5; ++i) adam_step(params, grads, state, 0.1);
  EXPECT_EQ(w, before);
}

TEST(Adam, ReplayIsBitIdenticalAndShapesChecked) {
  auto run = [] {
    DenseMatrix w{{0.3, -0.7}};
    AdamState state;
    DenseMatrix* params[] = {&w};
    for (int i = 1; i <= 10; ++i) {
      const DenseMatrix g{{std::sin(i * 1.0), std::cos(i * 2.0)}};
      const DenseMatrix* grads[] = {&g};
      adam_step(params, grads, state, 0.05);
    }
    return w;
  };
  EXPECT_EQ(run(), run());
  DenseMatrix w(1, 2);
  const DenseMatrix wrong(2, 1);
  AdamState state;
  DenseMatrix* params[] = {&w};
  const DenseMatrix* grads[] = {&wrong};
  EXPECT_THROW(adam_step(params, grads, state, 0.1), ShapeError);
}

TEST(Accuracy, CountsArgmaxHits) {
  const DenseMatrix probs{{0.9, 0.1}, {0.2, 0.8}, {0.6, 0.4}, {0.3, 0.7}};
  const std::vector<int> labels{0, 1, 0, 0};
  const std::vector<std::size_t> all{0, 1, 2, 3};
  EXPECT_DOUBLE_EQ(accuracy(probs, labels, all), 0.75);
  const std::vector<std::size_t> first_two{0, 1};
  EXPECT_DOUBLE_EQ(accuracy(probs, labels, first_two), 1.0);
  EXPECT_THROW(accuracy(probs, labels, std::vector<std::size_t>{}), std::invalid_argument);
}

TEST(Accuracy, UniformOutputPredictsFirstClass) {
  const DenseMatrix probs(5, 3, 1.0 / 3.0);
  const std::vector<int> labels{0, 2, 0, 1, 0};
  const std::vector<std::size_t> all{0, 1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(accuracy(probs, labels, all), 0.6);
}

TEST(TrainConfig, ValidateRejectsBadValues) {
  TrainConfig c;
  EXPECT_NO_THROW(c.validate());
  c.lr = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.tolerance = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.dropout = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.embed_dim = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Train, ZeroEpochsReportsInitialParameters) {
  const auto& p = small_synthetic();
  const Split split = make_split(200, 1);
  TrainConfig c = quick_config(ModelKind::kMore, Aggregator::kSum);
  c.max_epoch = 0;
  const TrainResult r = train(p.data, split, c);
  EXPECT_EQ(r.report.iter_count, 0u);
  EXPECT_EQ(r.report.best_epoch, 0u);
  EXPECT_TRUE(r.report.curves.empty());
  const double initial = evaluate(p.data, init_params(p.data, c), c.aggregator, split.test);
  EXPECT_DOUBLE_EQ(r.report.test_accuracy, initial);
}

TEST(Train, FlatValidationLossStopsAfterPatience) {
  // All-zero inputs keep every embedding at zero, so the output never moves.
  const auto& p = small_synthetic();
  GraphData data = p.data;
  data.aft = DenseMatrix(data.aft.rows(), data.aft.cols());
  data.sft = DenseMatrix(data.sft.rows(), data.sft.cols());
  TrainConfig c = quick_config(ModelKind::kMore, Aggregator::kSum);
  c.l2 = 0.0;
  c.max_epoch = 300;
  c.tolerance = 7;
  const TrainResult r = train(data, make_split(200, 1), c);
  EXPECT_EQ(r.report.iter_count, 8u);
  EXPECT_EQ(r.report.best_epoch, 1u);
  for (const auto& m : r.report.curves) EXPECT_EQ(m.val_loss, r.report.curves.front().val_loss);
}

TEST(Train, BestEpochHasMinimumValidationLoss) {
  const auto& p = small_synthetic();
  const TrainResult r = train(p.data, make_split(200, 2), quick_config(ModelKind::kBaseline, Aggregator::kHadamard));
  ASSERT_FALSE(r.report.curves.empty());
  double best = INFINITY;
  for (const auto& m : r.report.curves) best = std::min(best, m.val_loss);
  EXPECT_EQ(r.report.best_val_loss, best);
  EXPECT_EQ(r.report.curves[r.report.best_epoch - 1].val_loss, best);
  EXPECT_LE(r.report.iter_count, 40u);
  EXPECT_GE(r.report.oit, 0.0);
}

TEST(Train, SameSeedSameCurves) {
  const auto& p = small_synthetic();
  const Split split = make_split(200, 4);
  const auto c = quick_config(ModelKind::kMore, Aggregator::kConcat);
  const TrainResult a = train(p.data, split, c);
  const TrainResult b = train(p.data, split, c);
  ASSERT_EQ(a.report.curves.size(), b.report.curves.size());
  for (std::size_t i = 0; i < a.report.curves.size(); ++i) {
    EXPECT_EQ(a.report.curves[i].train_loss, b.report.curves[i].train_loss);
    EXPECT_EQ(a.report.curves[i].val_loss, b.report.curves[i].val_loss);
  }
  EXPECT_EQ(a.report.test_accuracy, b.report.test_accuracy);
}

TEST(Train, LossFallsForEveryVariant) {
  // Raw motif counts run into the thousands here; standardised columns keep
  // the first Adam steps from overshooting.
  const PreparedData p = prepare(generate_synthetic(200, 2, 0.3, 0.01, 5), ScaleMode::kStandardize);
  const Split split = make_split(200, 6);
  for (const auto& [model, agg] : {std::pair{ModelKind::kBaseline, Aggregator::kHadamard},
                                   std::pair{ModelKind::kMore, Aggregator::kHadamard},
                                   std::pair{ModelKind::kMore, Aggregator::kSum},
                                   std::pair{ModelKind::kMore, Aggregator::kConcat}}) {
    TrainConfig c = quick_config(model, agg);
    c.dropout = 0.0;
    c.max_epoch = 20;
    const TrainResult r = train(p.data, split, c);
    ASSERT_GE(r.report.curves.size(), 2u) << c.variant_name();
    EXPECT_LT(r.report.curves.back().train_loss, r.report.curves.front().train_loss) << c.variant_name();
  }
}

TEST(Train, LabelMismatchRejected) {
  GraphData data = small_synthetic().data;
  data.labels.pop_back();
  EXPECT_THROW(train(data, make_split(200, 1), TrainConfig{}), ShapeError);
}

TEST(ModelKindNames, RoundTrip) {
  EXPECT_EQ(parse_model_kind("gcn"), ModelKind::kBaseline);
  EXPECT_EQ(parse_model_kind("more"), ModelKind::kMore);
  EXPECT_FALSE(parse_model_kind("gat").has_value());
  EXPECT_EQ(to_string(ModelKind::kBaseline), "gcn");
}
