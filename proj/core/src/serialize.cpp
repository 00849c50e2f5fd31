#include "more/serialize.hpp"

#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "more/errors.hpp"

namespace more {

using nlohmann::json;

namespace {

json config_json(const TrainConfig& c) {
  return json{{"model", to_string(c.model)},
              {"aggregator", std::string(to_string(c.aggregator))},
              {"lr", c.lr},
              {"max_epoch", c.max_epoch},
              {"dropout", c.dropout},
              {"l2", c.l2},
              {"tolerance", c.tolerance},
              {"embed_dim", c.embed_dim},
              {"seed", c.seed}};
}

TrainConfig config_of(const json& j) {
  if (!j.is_object()) throw FormatError("train config must be a JSON object");
  TrainConfig c;
  try {
    if (j.contains("model")) {
      const auto m = parse_model_kind(j.at("model").get<std::string>());
      if (!m) throw FormatError("unknown model '" + j.at("model").get<std::string>() + "'");
      c.model = *m;
    }
    if (j.contains("aggregator")) {
      const auto a = parse_aggregator(j.at("aggregator").get<std::string>());
      if (!a) throw FormatError("unknown aggregator '" + j.at("aggregator").get<std::string>() + "'");
      c.aggregator = *a;
    }
    c.lr = j.value("lr", c.lr);
    c.max_epoch = j.value("max_epoch", c.max_epoch);
    c.dropout = j.value("dropout", c.dropout);
    c.l2 = j.value("l2", c.l2);
    c.tolerance = j.value("tolerance", c.tolerance);
    if (j.contains("embed_dim") && j.at("embed_dim").is_number()) c.embed_dim = j.at("embed_dim").get<std::size_t>();
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& e) {
    throw FormatError(std::string("train config: ") + e.what());
  }
  return c;
}

json matrix_json(const DenseMatrix& m) {
  return json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"values", std::vector<double>(m.values().begin(), m.values().end())}};
}

DenseMatrix matrix_of(const json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != rows * cols) throw FormatError("checkpoint: matrix value count does not match its shape");
  return DenseMatrix(rows, cols, std::move(values));
}

}  // namespace

std::string config_to_json(const TrainConfig& config) { return config_json(config).dump(); }

TrainConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("train config: ") + e.what());
  }
  return config_of(j);
}

std::uint64_t config_hash(const TrainConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_report_json(std::ostream& out, const TrainReport& report, const TrainConfig& config,
                       std::string_view dataset) {
  json curves = json::array();
  for (const auto& m : report.curves) {
    curves.push_back({{"epoch", m.epoch},
                      {"train_loss", m.train_loss},
                      {"val_loss", m.val_loss},
                      {"test_loss", m.test_loss},
                      {"train_acc", m.train_acc},
                      {"val_acc", m.val_acc},
                      {"test_acc", m.test_acc}});
  }
  const json j{{"dataset", dataset},
               {"variant", config.variant_name()},
               {"config", config_json(config)},
               {"test_accuracy", report.test_accuracy},
               {"iter_count", report.iter_count},
               {"best_epoch", report.best_epoch},
               {"best_val_loss", report.best_epoch == 0 ? json(nullptr) : json(report.best_val_loss)},
               {"astt", report.astt},
               {"oit", report.oit},
               {"tet", report.tet},
               {"curves", std::move(curves)}};
  out << j.dump(2) << '\n';
}

void write_curves_csv(std::ostream& out, const TrainReport& report) {
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  out << "epoch,train_loss,val_loss,test_loss,train_acc,val_acc,test_acc\n";
  for (const auto& m : report.curves) {
    out << m.epoch << ',' << m.train_loss << ',' << m.val_loss << ',' << m.test_loss << ',' << m.train_acc << ','
        << m.val_acc << ',' << m.test_acc << '\n';
  }
  out.precision(old);
}

void write_nmd_csv(std::ostream& out, const MotifCensus& census) {
  out << "node,m31,m32,m41,m42,m43\n";
  for (std::size_t v = 0; v < census.nmd.size(); ++v) {
    out << v;
    for (auto count : census.nmd[v]) out << ',' << count;
    out << '\n';
  }
}

std::string split_to_json(const Split& split) {
  return json{{"train", split.train}, {"val", split.val}, {"test", split.test}}.dump();
}

void save_params(std::ostream& out, const ModelParams& params, const TrainConfig& config) {
  json tensors = json::object();
  if (const auto* p = std::get_if<MoreParams>(&params)) {
    tensors["attr_weight"] = matrix_json(p->attr_weight);
    tensors["struct_weight"] = matrix_json(p->struct_weight);
    tensors["theta"] = matrix_json(p->theta);
  } else {
    const auto& b = std::get<BaselineParams>(params);
    tensors["w0"] = matrix_json(b.w0);
    tensors["w1"] = matrix_json(b.w1);
  }
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << config_hash(config);
  const json j{{"model", to_string(config.model)},
               {"seed", config.seed},
               {"config", config_json(config)},
               {"config_hash", hash.str()},
               {"tensors", std::move(tensors)}};
  // Doubles are written in shortest round-trip form, so reloading is bit-exact.
  out << j.dump() << '\n';
}

ModelParams load_params(std::istream& in, TrainConfig* config) {
  try {
    const json j = json::parse(in);
    if (config) *config = config_of(j.at("config"));
    const auto& t = j.at("tensors");
    const auto kind = parse_model_kind(j.at("model").get<std::string>());
    if (!kind) throw FormatError("checkpoint: unknown model kind");
    if (*kind == ModelKind::kMore) {
      return MoreParams{matrix_of(t.at("attr_weight")), matrix_of(t.at("struct_weight")), matrix_of(t.at("theta"))};
    }
    return BaselineParams{matrix_of(t.at("w0")), matrix_of(t.at("w1"))};
  } catch (const json::exception& e) {
    throw FormatError(std::string("checkpoint: ") + e.what());
  }
}

}  // namespace more
