#include "more/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "more/errors.hpp"
#include "more/random.hpp"

namespace more {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

bool skippable(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#' || line[first] == '%';
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(std::move(tok));
  return out;
}

std::optional<long long> parse_int(std::string_view tok) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

NodeId parse_node(std::string_view tok, IdBase base, std::size_t line_no) {
  const auto v = parse_int(tok);
  const long long offset = base == IdBase::kOne ? 1 : 0;
  if (!v || *v - offset < 0) throw FormatError("bad node id '" + std::string(tok) + "'", line_no);
  return static_cast<NodeId>(*v - offset);
}

/// Numeric tokens keep numeric order; anything else is numbered by first
/// appearance.
std::vector<int> encode_labels(const std::vector<std::string>& tokens, std::size_t& label_count) {
  std::vector<int> out(tokens.size());
  const bool numeric = std::all_of(tokens.begin(), tokens.end(), [](const auto& t) { return parse_int(t).has_value(); });
  if (numeric) {
    std::map<long long, int> ids;
    for (const auto& t : tokens) ids.emplace(*parse_int(t), 0);
    int next = 0;
    for (auto& [value, id] : ids) id = next++;
    for (std::size_t i = 0; i < tokens.size(); ++i) out[i] = ids.at(*parse_int(tokens[i]));
    label_count = ids.size();
  } else {
    std::unordered_map<std::string, int> ids;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      out[i] = ids.emplace(tokens[i], static_cast<int>(ids.size())).first->second;
    }
    label_count = ids.size();
  }
  return out;
}

}  // namespace

std::vector<Edge> read_edge_list(std::istream& in, IdBase base) {
  std::vector<Edge> edges;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (skippable(line)) continue;
    const auto tokens = split_ws(line);
    if (tokens.size() < 2) throw FormatError("expected 'u v'", line_no);
    edges.emplace_back(parse_node(tokens[0], base, line_no), parse_node(tokens[1], base, line_no));
  }
  return edges;
}

std::vector<Edge> read_edge_list(const std::filesystem::path& path, IdBase base) {
  auto in = open_input(path);
  return read_edge_list(in, base);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

Dataset load_edge_list_dataset(const std::filesystem::path& edges_path, const std::filesystem::path& labels_path,
                               std::string name, IdBase base, std::uint64_t seed) {
  const std::vector<Edge> edges = read_edge_list(edges_path, base);

  struct LabelRow {
    NodeId node;
    std::string token;
    std::size_t line;
  };
  std::vector<LabelRow> rows;
  {
    auto in = open_input(labels_path);
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
      if (skippable(line)) continue;
      const auto tokens = split_ws(line);
      if (tokens.size() < 2) throw FormatError(labels_path.string() + ": expected 'node label'", line_no);
      rows.push_back({parse_node(tokens[0], base, line_no), tokens[1], line_no});
    }
  }
  const std::size_t n = rows.size();
  std::vector<std::string> label_tokens(n);
  std::vector<bool> seen(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [node, token, line] = rows[i];
    if (node >= n) {
      throw FormatError(labels_path.string() + ": unknown node id " + std::to_string(node) + " (labels define " +
                            std::to_string(n) + " nodes)",
                        line);
    }
    if (seen[node]) {
      throw FormatError(labels_path.string() + ": node " + std::to_string(node) + " labelled twice", line);
    }
    seen[node] = true;
    label_tokens[node] = token;
  }
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw FormatError(edges_path.string() + ": edge (" + std::to_string(u) + ", " + std::to_string(v) +
                        ") references an unlabelled node");
    }
  }

  Dataset ds;
  ds.name = std::move(name);
  ds.graph = build_graph(edges, n);
  ds.labels = encode_labels(label_tokens, ds.label_count);
  ds.aft = build_aft(std::nullopt, n, seed);
  return ds;
}

Dataset load_cora(std::istream& content, std::istream& cites, std::string name) {
  std::unordered_map<std::string, NodeId> index;
  std::vector<double> features;
  std::vector<std::string> label_tokens;
  std::size_t dim = 0;
  std::string line;
  for (std::size_t line_no = 1; std::getline(content, line); ++line_no) {
    if (skippable(line)) continue;
    const auto tokens = split_ws(line);
    if (tokens.size() < 3) throw FormatError("content: expected 'id features... label'", line_no);
    const std::size_t row_dim = tokens.size() - 2;
    if (label_tokens.empty()) dim = row_dim;
    if (row_dim != dim) {
      throw FormatError("content: " + std::to_string(row_dim) + " features, expected " + std::to_string(dim), line_no);
    }
    if (!index.emplace(tokens.front(), static_cast<NodeId>(label_tokens.size())).second) {
      throw FormatError("content: duplicate paper id " + tokens.front(), line_no);
    }
    for (std::size_t k = 1; k <= dim; ++k) {
      const auto v = parse_int(tokens[k]);
      if (!v) throw FormatError("content: non-integer feature '" + tokens[k] + "'", line_no);
      features.push_back(static_cast<double>(*v));
    }
    label_tokens.push_back(tokens.back());
  }
  const std::size_t n = label_tokens.size();

  std::vector<Edge> edges;
  for (std::size_t line_no = 1; std::getline(cites, line); ++line_no) {
    if (skippable(line)) continue;
    const auto tokens = split_ws(line);
    if (tokens.size() < 2) throw FormatError("cites: expected 'cited citing'", line_no);
    const auto a = index.find(tokens[0]);
    const auto b = index.find(tokens[1]);
    if (a == index.end() || b == index.end()) throw FormatError("cites: unknown paper id", line_no);
    edges.emplace_back(a->second, b->second);
  }

  Dataset ds;
  ds.name = std::move(name);
  ds.graph = build_graph(edges, n);
  ds.aft = build_aft(DenseMatrix(n, dim, std::move(features)), n, 0);
  // Cora labels are strings; first-appearance order keeps ids reproducible.
  std::unordered_map<std::string, int> ids;
  ds.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds.labels[i] = ids.emplace(label_tokens[i], static_cast<int>(ids.size())).first->second;
  }
  ds.label_count = ids.size();
  return ds;
}

Dataset load_cora(const std::filesystem::path& content_path, const std::filesystem::path& cites_path,
                  std::string name) {
  auto content = open_input(content_path);
  auto cites = open_input(cites_path);
  return load_cora(content, cites, std::move(name));
}

Dataset load_gml_dataset(std::istream& in, std::string name, std::uint64_t seed) {
  // Token stream with quoted strings kept whole; nesting tracked by brackets.
  std::vector<std::string> tokens;
  std::string tok;
  char ch = 0;
  while (in.get(ch)) {
    if (ch == '"') {
      std::string quoted;
      while (in.get(ch) && ch != '"') quoted.push_back(ch);
      tokens.push_back('"' + quoted);
    } else if (ch == '[' || ch == ']') {
      if (!tok.empty()) tokens.push_back(std::move(tok)), tok.clear();
      tokens.emplace_back(1, ch);
    } else if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!tok.empty()) tokens.push_back(std::move(tok)), tok.clear();
    } else {
      tok.push_back(ch);
    }
  }
  if (!tok.empty()) tokens.push_back(std::move(tok));

  struct Block {
    std::map<std::string, std::string> attrs;
  };
  std::vector<Block> nodes;
  std::vector<Block> edge_blocks;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if ((tokens[i] != "node" && tokens[i] != "edge") || i + 1 >= tokens.size() || tokens[i + 1] != "[") continue;
    Block b;
    std::size_t j = i + 2;
    int depth = 1;
    for (; j < tokens.size() && depth > 0; ++j) {
      if (tokens[j] == "[") {
        ++depth;
      } else if (tokens[j] == "]") {
        --depth;
      } else if (depth == 1 && j + 1 < tokens.size() && tokens[j + 1] != "[" && tokens[j + 1] != "]") {
        b.attrs[tokens[j]] = tokens[j + 1];
        ++j;
      }
    }
    (tokens[i] == "node" ? nodes : edge_blocks).push_back(std::move(b));
    i = j - 1;
  }

  std::unordered_map<std::string, NodeId> index;
  std::vector<std::string> label_tokens;
  for (const auto& b : nodes) {
    const auto id = b.attrs.find("id");
    const auto value = b.attrs.find("value");
    if (id == b.attrs.end()) throw FormatError("gml: node without id");
    if (value == b.attrs.end()) throw FormatError("gml: node " + id->second + " has no value attribute");
    if (!index.emplace(id->second, static_cast<NodeId>(label_tokens.size())).second) {
      throw FormatError("gml: duplicate node id " + id->second);
    }
    label_tokens.push_back(value->second);
  }
  std::vector<Edge> edges;
  for (const auto& b : edge_blocks) {
    const auto s = b.attrs.find("source");
    const auto t = b.attrs.find("target");
    if (s == b.attrs.end() || t == b.attrs.end()) throw FormatError("gml: edge without source/target");
    const auto a = index.find(s->second);
    const auto c = index.find(t->second);
    if (a == index.end() || c == index.end()) throw FormatError("gml: edge references unknown node");
    edges.emplace_back(a->second, c->second);
  }

  Dataset ds;
  ds.name = std::move(name);
  ds.graph = build_graph(edges, label_tokens.size());
  ds.labels = encode_labels(label_tokens, ds.label_count);
  ds.aft = build_aft(std::nullopt, label_tokens.size(), seed);
  return ds;
}

Dataset load_gml_dataset(const std::filesystem::path& path, std::string name, std::uint64_t seed) {
  auto in = open_input(path);
  return load_gml_dataset(in, std::move(name), seed);
}

Dataset generate_synthetic(std::size_t n, std::size_t communities, double p_in, double p_out, std::uint64_t seed) {
  if (communities < 2) throw std::invalid_argument("generate_synthetic: need at least two communities");
  if (!(p_out >= 0.0 && p_out < p_in && p_in <= 1.0)) {
    throw std::invalid_argument("generate_synthetic: require 0 <= p_out < p_in <= 1");
  }
  if (n < communities) throw std::invalid_argument("generate_synthetic: fewer nodes than communities");

  Dataset ds;
  ds.name = "synthetic";
  ds.label_count = communities;
  ds.labels.resize(n);
  for (std::size_t v = 0; v < n; ++v) ds.labels[v] = static_cast<int>(v * communities / n);

  Rng rng(derive_seed(seed, 0));
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double p = ds.labels[u] == ds.labels[v] ? p_in : p_out;
      if (rng.uniform() < p) edges.emplace_back(u, v);
    }
  }
  ds.graph = build_graph(edges, n);
  ds.aft = build_aft(std::nullopt, n, derive_seed(seed, 1));
  return ds;
}

Dataset generate_isolated_class(std::size_t nodes_per_class, std::size_t classes, double p_in,
                                std::size_t noise_dims, std::uint64_t seed) {
  if (classes < 2) throw std::invalid_argument("generate_isolated_class: need at least two classes");
  if (!(p_in > 0.0 && p_in <= 1.0)) throw std::invalid_argument("generate_isolated_class: p_in must lie in (0, 1]");
  const std::size_t n = nodes_per_class * classes;

  Dataset ds;
  ds.name = "isolated-class";
  ds.label_count = classes;
  ds.labels.resize(n);
  for (std::size_t v = 0; v < n; ++v) ds.labels[v] = static_cast<int>(v / nodes_per_class);

  Rng rng(derive_seed(seed, 0));
  std::vector<Edge> edges;
  const auto isolated = static_cast<int>(classes - 1);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (ds.labels[u] == ds.labels[v] && ds.labels[u] != isolated && rng.uniform() < p_in) edges.emplace_back(u, v);
    }
  }
  ds.graph = build_graph(edges, n);

  DenseMatrix x(n, classes + noise_dims);
  Rng noise(derive_seed(seed, 1));
  for (std::size_t v = 0; v < n; ++v) {
    x(v, static_cast<std::size_t>(ds.labels[v])) = 1.0;
    for (std::size_t k = 0; k < noise_dims; ++k) x(v, classes + k) = noise.uniform() < 0.5 ? 1.0 : 0.0;
  }
  ds.aft = build_aft(std::move(x), n, 0);
  return ds;
}

void validate(const Dataset& ds) {
  const std::size_t n = ds.graph.node_count();
  if (ds.labels.size() != n) throw std::invalid_argument(ds.name + ": label count differs from node count");
  if (ds.aft.matrix.rows() != n) throw std::invalid_argument(ds.name + ": feature rows differ from node count");
  for (int l : ds.labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= ds.label_count) {
      throw std::invalid_argument(ds.name + ": label id outside [0, L)");
    }
  }
}

PreparedData prepare(const Dataset& ds, ScaleMode sft_scale) {
  validate(ds);
  PreparedData p;
  p.census = census(ds.graph);
  p.data.propagator = renormalized_propagator(ds.graph);
  p.data.aft = ds.aft.matrix;
  p.data.sft = scale_columns(build_sft(ds.graph, p.census), sft_scale).matrix;
  p.data.labels = ds.labels;
  p.data.label_count = ds.label_count;
  return p;
}

}  // namespace more
