// Command-line front end: motif census, training, benchmark grids and splits.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "more/benchmark_grid.hpp"
#include "more/dataset.hpp"
#include "more/errors.hpp"
#include "more/motif.hpp"
#include "more/random.hpp"
#include "more/serialize.hpp"
#include "more/training.hpp"

namespace {

using namespace more;

// Synthetic one-hot features draw from their own stream so they stay
// independent of the split, which uses the seed directly.
constexpr std::uint64_t kFeatureSeedTag = 7;

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) out.push_back(part);
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

struct DatasetArgs {
  std::string edges;
  std::string labels;
  bool one_based = false;
  std::string cora_content;
  std::string cora_cites;
  std::string gml;
  std::string synthetic;  // n,communities,p_in,p_out
  std::string name;
  std::string sft_scale = "none";
};

void add_dataset_options(CLI::App& cmd, DatasetArgs& a) {
  cmd.add_option("--edges", a.edges, "Edge list file (u v per line)");
  cmd.add_option("--labels", a.labels, "Node label file (node label per line)");
  cmd.add_flag("--one-based", a.one_based, "Node ids in edge/label files start at 1");
  cmd.add_option("--cora-content", a.cora_content, "Cora .content file");
  cmd.add_option("--cora-cites", a.cora_cites, "Cora .cites file");
  cmd.add_option("--gml", a.gml, "GML graph with node 'value' labels");
  cmd.add_option("--synthetic", a.synthetic, "Planted partition: n,communities,p_in,p_out");
  cmd.add_option("--name", a.name, "Dataset name used in reports");
  cmd.add_option("--sft-scale", a.sft_scale, "Structural feature scaling")
      ->check(CLI::IsMember({"none", "standardize", "log1p"}));
}

Dataset load_dataset(const DatasetArgs& a, std::uint64_t seed) {
  Dataset ds;
  if (!a.cora_content.empty() || !a.cora_cites.empty()) {
    if (a.cora_content.empty() || a.cora_cites.empty()) throw CLI::ValidationError("--cora-content and --cora-cites go together");
    ds = load_cora(a.cora_content, a.cora_cites);
  } else if (!a.edges.empty() || !a.labels.empty()) {
    if (a.edges.empty() || a.labels.empty()) throw CLI::ValidationError("--edges and --labels go together");
    ds = load_edge_list_dataset(a.edges, a.labels, "edges", a.one_based ? IdBase::kOne : IdBase::kZero, seed);
  } else if (!a.gml.empty()) {
    ds = load_gml_dataset(a.gml, "gml", seed);
  } else if (!a.synthetic.empty()) {
    const auto parts = split_on(a.synthetic, ',');
    if (parts.size() != 4) throw CLI::ValidationError("--synthetic expects n,communities,p_in,p_out");
    ds = generate_synthetic(std::stoul(parts[0]), std::stoul(parts[1]), std::stod(parts[2]), std::stod(parts[3]), seed);
  } else {
    throw CLI::ValidationError("no dataset given (use --edges/--labels, --cora-*, --gml or --synthetic)");
  }
  if (!a.name.empty()) ds.name = a.name;
  return ds;
}

// "kind:arg:arg..." for the benchmark subcommand.
Dataset load_dataset_spec(const std::string& spec, std::uint64_t seed) {
  const auto parts = split_on(spec, ':');
  DatasetArgs a;
  if (parts.empty()) throw CLI::ValidationError("empty --dataset spec");
  const std::string& kind = parts[0];
  if (kind == "edges" && (parts.size() == 3 || parts.size() == 4)) {
    a.edges = parts[1];
    a.labels = parts[2];
    a.one_based = parts.size() == 4 && parts[3] == "one-based";
  } else if (kind == "cora" && parts.size() == 3) {
    a.cora_content = parts[1];
    a.cora_cites = parts[2];
  } else if (kind == "gml" && parts.size() == 2) {
    a.gml = parts[1];
  } else if (kind == "synthetic" && parts.size() == 2) {
    a.synthetic = parts[1];
  } else {
    throw CLI::ValidationError("bad --dataset spec '" + spec +
                               "' (edges:E:L[:one-based] | cora:CONTENT:CITES | gml:FILE | synthetic:n,c,pin,pout)");
  }
  Dataset ds = load_dataset(a, seed);
  if (kind != "synthetic") {
    const auto stem = std::filesystem::path(parts[1]).stem().string();
    ds.name = stem.empty() ? kind : stem;
  }
  return ds;
}

int run_census(const std::string& edges_path, bool one_based, const std::string& nmd_out) {
  const auto edges = read_edge_list(edges_path, one_based ? IdBase::kOne : IdBase::kZero);
  std::size_t n = 0;
  for (const auto& [u, v] : edges) n = std::max<std::size_t>(n, std::max(u, v) + 1);
  const Graph g = build_graph(edges, n);
  const MotifCensus c = census(g);
  const MotifCounts loose = non_induced_counts(g, c);

  std::size_t max_deg = 0;
  for (NodeId v = 0; v < n; ++v) max_deg = std::max(max_deg, g.degree(v));
  const double nd = static_cast<double>(n);
  const double m = static_cast<double>(g.edge_count());
  const auto tri = static_cast<double>(c.count(MotifKind::kTriangle));
  const auto wedges = static_cast<double>(loose[static_cast<std::size_t>(MotifKind::kPath3)]);

  std::cout << std::left << std::setw(14) << "#Node" << n << '\n'
            << std::setw(14) << "#Edge" << g.edge_count() << '\n'
            << std::setw(14) << "mean degree" << (n ? 2.0 * m / nd : 0.0) << '\n'
            << std::setw(14) << "max degree" << max_deg << '\n'
            << std::setw(14) << "density" << (n > 1 ? 2.0 * m / (nd * (nd - 1.0)) : 0.0) << '\n'
            << std::setw(14) << "transitivity" << (wedges > 0 ? 3.0 * tri / wedges : 0.0) << '\n'
            << '\n'
            << std::setw(8) << "motif" << std::right << std::setw(16) << "induced" << std::setw(16) << "non-induced"
            << '\n';
  for (MotifKind k : kAllMotifs) {
    std::cout << std::left << std::setw(8) << ("#" + std::string(motif_code(k))) << std::right << std::setw(16)
              << c.count(k) << std::setw(16) << loose[static_cast<std::size_t>(k)] << '\n';
  }
  if (!nmd_out.empty()) {
    auto out = open_output(nmd_out);
    write_nmd_csv(out, c);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Motif-aware node classification: census, training and benchmarks"};
  app.require_subcommand(1);

  // census
  auto* census_cmd = app.add_subcommand("census", "Count induced 3- and 4-node motifs in an edge list");
  std::string census_edges;
  bool census_one_based = false;
  std::string nmd_out;
  census_cmd->add_option("edges", census_edges, "Edge list file")->required();
  census_cmd->add_flag("--one-based", census_one_based, "Node ids start at 1");
  census_cmd->add_option("--nmd-out", nmd_out, "Write the per-node motif degree table as CSV");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train one model on one dataset");
  DatasetArgs train_data;
  add_dataset_options(*train_cmd, train_data);
  TrainConfig cfg;
  std::string model_name = "more";
  std::string agg_name = "ha";
  std::string curves_out;
  std::string params_out;
  std::string report_out;
  train_cmd->add_option("--model", model_name, "gcn or more")->check(CLI::IsMember({"gcn", "more"}));
  train_cmd->add_option("--agg", agg_name, "Aggregator for more: ha, su or co")->check(CLI::IsMember({"ha", "su", "co"}));
  train_cmd->add_option("--lr", cfg.lr, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--max-epoch", cfg.max_epoch, "Maximum training epochs")->capture_default_str();
  train_cmd->add_option("--dropout", cfg.dropout, "Dropout probability")->capture_default_str();
  train_cmd->add_option("--l2", cfg.l2, "L2 regularisation factor")->capture_default_str();
  train_cmd->add_option("--tolerance", cfg.tolerance, "Early-stopping patience in epochs")->capture_default_str();
  train_cmd->add_option("--embed-dim", cfg.embed_dim, "Embedding dimension")->capture_default_str();
  train_cmd->add_option("--seed", cfg.seed, "Seed for features, split, initialisation and dropout")
      ->capture_default_str();
  train_cmd->add_option("--curves-out", curves_out, "Per-epoch metrics CSV");
  train_cmd->add_option("--params-out", params_out, "Checkpoint of the selected parameters (JSON)");
  train_cmd->add_option("--report-out", report_out, "Training report (JSON)");

  // benchmark
  auto* bench_cmd = app.add_subcommand("benchmark", "Run GCN and the three MORE variants over a config grid");
  std::string grid_path;
  std::string bench_out;
  std::vector<std::string> dataset_specs;
  std::string bench_scale = "none";
  std::uint64_t bench_seed = 42;
  bench_cmd->add_option("--grid", grid_path, "JSON array of train configs")->required();
  bench_cmd->add_option("--out", bench_out, "Results CSV")->required();
  bench_cmd->add_option("--dataset", dataset_specs,
                        "edges:E:L[:one-based] | cora:CONTENT:CITES | gml:FILE | synthetic:n,c,pin,pout");
  bench_cmd->add_option("--sft-scale", bench_scale, "Structural feature scaling")
      ->check(CLI::IsMember({"none", "standardize", "log1p"}));
  bench_cmd->add_option("--seed", bench_seed, "Seed for features and splits")->capture_default_str();

  // split
  auto* split_cmd = app.add_subcommand("split", "Print a train/val/test split as JSON");
  std::size_t split_n = 0;
  std::uint64_t split_seed = 42;
  split_cmd->add_option("n", split_n, "Node count")->required();
  split_cmd->add_option("--seed", split_seed, "Split seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (census_cmd->parsed()) return run_census(census_edges, census_one_based, nmd_out);

    if (train_cmd->parsed()) {
      cfg.model = *parse_model_kind(model_name);
      cfg.aggregator = *parse_aggregator(agg_name);
      cfg.validate();
      const Dataset ds = load_dataset(train_data, derive_seed(cfg.seed, kFeatureSeedTag));
      const PreparedData prepared = prepare(ds, *parse_scale_mode(train_data.sft_scale));
      const Split split = make_split(ds.graph.node_count(), cfg.seed);
      const TrainResult result = train(prepared.data, split, cfg);
      const auto& r = result.report;
      std::cout << ds.name << ' ' << cfg.variant_name() << ": test accuracy " << std::fixed << std::setprecision(2)
                << 100.0 * r.test_accuracy << "%, #Iter " << r.iter_count << ", best epoch " << r.best_epoch
                << std::setprecision(4) << ", ASTT " << r.astt << " s, OIT " << r.oit << " s, TET " << r.tet
                << " s\n";
      if (!curves_out.empty()) {
        auto out = open_output(curves_out);
        write_curves_csv(out, r);
      }
      if (!params_out.empty()) {
        auto out = open_output(params_out);
        save_params(out, result.params, cfg);
      }
      if (!report_out.empty()) {
        auto out = open_output(report_out);
        write_report_json(out, r, cfg, ds.name);
      }
      return 0;
    }

    if (bench_cmd->parsed()) {
      std::ifstream grid_in(grid_path);
      if (!grid_in) throw std::runtime_error("cannot open " + grid_path);
      const auto grid = parse_config_grid(grid_in);
      std::vector<BenchmarkInput> inputs;
      for (const auto& spec : dataset_specs) {
        const Dataset ds = load_dataset_spec(spec, derive_seed(bench_seed, kFeatureSeedTag));
        inputs.push_back({ds.name, prepare(ds, *parse_scale_mode(bench_scale)),
                          make_split(ds.graph.node_count(), bench_seed)});
      }
      const auto rows = run_benchmark(inputs, grid);
      auto out = open_output(bench_out);
      write_benchmark_csv(out, rows);
      if (!rows.empty()) {
        write_benchmark_table(std::cout, rows);
        std::cout << "\nbest over embedding sizes:\n";
        write_benchmark_table(std::cout, best_per_embed_sweep(rows));
      }
      return 0;
    }

    if (split_cmd->parsed()) {
      std::cout << split_to_json(make_split(split_n, split_seed)) << '\n';
      return 0;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
