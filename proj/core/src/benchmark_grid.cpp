#include "more/benchmark_grid.hpp"

#include <algorithm>
#include <exception>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <tuple>

#include <json.hpp>

#include "more/errors.hpp"
#include "more/serialize.hpp"

namespace more {

using nlohmann::json;

std::vector<TrainConfig> parse_config_grid(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("grid: ") + e.what());
  }
  if (!j.is_array()) throw FormatError("grid: expected a JSON array of config objects");

  std::vector<TrainConfig> grid;
  for (const auto& entry : j) {
    const TrainConfig base = config_from_json(entry.dump());
    if (entry.is_object() && entry.contains("embed_dim") && entry.at("embed_dim").is_array()) {
      for (const auto& dim : entry.at("embed_dim")) {
        if (!dim.is_number_unsigned()) throw FormatError("grid: embed_dim entries must be positive integers");
        TrainConfig c = base;
        c.embed_dim = dim.get<std::size_t>();
        grid.push_back(c);
      }
    } else {
      grid.push_back(base);
    }
  }
  return grid;
}

std::vector<TrainConfig> expand_variants(const TrainConfig& base) {
  std::vector<TrainConfig> out;
  TrainConfig gcn = base;
  gcn.model = ModelKind::kBaseline;
  out.push_back(gcn);
  for (Aggregator a : {Aggregator::kHadamard, Aggregator::kSum, Aggregator::kConcat}) {
    TrainConfig c = base;
    c.model = ModelKind::kMore;
    c.aggregator = a;
    out.push_back(c);
  }
  return out;
}

std::vector<BenchmarkRow> run_benchmark(const std::vector<BenchmarkInput>& datasets,
                                        const std::vector<TrainConfig>& grid) {
  std::vector<BenchmarkRow> rows;
  for (const auto& ds : datasets) {
    for (const auto& base : grid) {
      for (const auto& config : expand_variants(base)) {
        BenchmarkRow row;
        row.dataset = ds.name;
        row.model = std::string(config.variant_name());
        row.aggregator = config.model == ModelKind::kBaseline ? "-" : std::string(to_string(config.aggregator));
        row.lr = config.lr;
        row.max_epoch = config.max_epoch;
        row.embed_dim = config.embed_dim;
        try {
          const TrainResult result = train(ds.prepared.data, ds.split, config);
          row.accuracy = result.report.test_accuracy;
          row.iter_count = result.report.iter_count;
          row.astt = result.report.astt;
          row.oit = result.report.oit;
          row.tet = result.report.tet;
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        rows.push_back(std::move(row));
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchmarkRow& a, const BenchmarkRow& b) {
    return std::tie(a.dataset, a.model, a.lr, a.max_epoch, a.embed_dim) <
           std::tie(b.dataset, b.model, b.lr, b.max_epoch, b.embed_dim);
  });
  return rows;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  out << "dataset,model,aggregator,lr,max_epoch,embed_dim,accuracy,iter_count,astt,oit,tet,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), '"', '\'');
    out << r.dataset << ',' << r.model << ',' << r.aggregator << ',' << r.lr << ',' << r.max_epoch << ','
        << r.embed_dim << ',' << r.accuracy << ',' << r.iter_count << ',' << r.astt << ',' << r.oit << ',' << r.tet
        << ",\"" << err << "\"\n";
  }
}

void write_benchmark_table(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  out << std::left << std::setw(16) << "dataset" << std::setw(9) << "model" << std::right << std::setw(8) << "lr"
      << std::setw(7) << "epochs" << std::setw(5) << "ED" << std::setw(10) << "accuracy" << std::setw(7) << "#Iter"
      << std::setw(11) << "ASTT(s)" << std::setw(11) << "OIT(s)" << std::setw(11) << "TET(s)" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(16) << r.dataset << std::setw(9) << r.model << std::right << std::setw(8) << r.lr
        << std::setw(7) << r.max_epoch << std::setw(5) << r.embed_dim;
    if (!r.error.empty()) {
      out << "  error: " << r.error << '\n';
      continue;
    }
    out << std::fixed << std::setprecision(2) << std::setw(9) << 100.0 * r.accuracy << '%' << std::setw(7)
        << r.iter_count << std::setprecision(4) << std::setw(11) << r.astt << std::setw(11) << r.oit << std::setw(11)
        << r.tet << '\n';
    out << std::defaultfloat << std::setprecision(6);
  }
}

std::vector<BenchmarkRow> best_per_embed_sweep(const std::vector<BenchmarkRow>& rows) {
  std::map<std::tuple<std::string, std::string, double, std::size_t>, BenchmarkRow> best;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    const auto key = std::make_tuple(r.dataset, r.model, r.lr, r.max_epoch);
    auto it = best.find(key);
    if (it == best.end() || r.accuracy > it->second.accuracy) best[key] = r;
  }
  std::vector<BenchmarkRow> out;
  for (auto& [key, row] : best) out.push_back(row);
  return out;
}

}  // namespace more
