#include "smci/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "smci/errors.hpp"

namespace smci {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw Error("write to '" + path + "' failed");
}

json parse_json(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(std::string("malformed ") + what + " JSON");
  return j;
}

}  // namespace

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string graph_to_json(const PairwiseGraph& g) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  json out{{"n", g.num_vertices()}, {"edges", std::move(edges)}};
  return out.dump(2) + "\n";
}

PairwiseGraph graph_from_json(const std::string& text) {
  json j = parse_json(text, "graph");
  if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
    throw Error("graph JSON needs 'n' and 'edges'");
  std::vector<Edge> edges;
  for (const json& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw Error("graph edge entries must be [u, v] pairs");
    edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  }
  return PairwiseGraph(j.at("n").get<int>(), std::move(edges));
}

void save_graph(const std::string& path, const PairwiseGraph& g) {
  write_file(path, graph_to_json(g));
}

PairwiseGraph load_graph(const std::string& path) {
  return graph_from_json(read_file(path));
}

std::string model_to_json(const PbmParams& params) {
  const PairwiseGraph& g = params.graph();
  json edges = json::array();
  for (int k = 0; k < g.num_edges(); ++k) {
    const Edge& e = g.edges()[k];
    edges.push_back({e.u, e.v, params.coupling_at(k)});
  }
  json out{{"n", g.num_vertices()},
           {"bias", params.biases()},
           {"edges", std::move(edges)}};
  return out.dump(2) + "\n";
}

PbmParams model_from_json(const std::string& text) {
  json j = parse_json(text, "model");
  if (!j.is_object() || !j.contains("n") || !j.contains("bias") ||
      !j.contains("edges"))
    throw Error("model JSON needs 'n', 'bias' and 'edges'");
  int n = j.at("n").get<int>();
  std::vector<double> bias = j.at("bias").get<std::vector<double>>();
  std::vector<Edge> edges;
  std::vector<double> coupling;
  for (const json& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 3)
      throw Error("model edge entries must be [u, v, w] triples");
    edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    coupling.push_back(e.at(2).get<double>());
  }
  PairwiseGraph g(n, edges);
  // The graph constructor sorts edges; couplings must follow that order.
  std::vector<double> aligned(g.num_edges());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    int idx = g.edge_index(edges[k].u, edges[k].v);
    aligned[idx] = coupling[k];
  }
  return PbmParams(std::move(g), std::move(bias), std::move(aligned));
}

void save_model(const std::string& path, const PbmParams& params) {
  write_file(path, model_to_json(params));
}

PbmParams load_model(const std::string& path) {
  return model_from_json(read_file(path));
}

void save_samples(const std::string& path, const SampleSet& s, std::uint64_t seed) {
  if (s.weighted()) throw ArgumentError("weighted sample sets have no CSV form");
  std::ostringstream out;
  out << "# n=" << s.n << " m=" << s.size() << " seed=" << seed << "\n";
  for (const SpinConfig& x : s.points) {
    for (int i = 0; i < s.n; ++i) {
      if (i) out << ',';
      out << (x[i] > 0 ? "1" : "-1");
    }
    out << '\n';
  }
  write_file(path, out.str());
}

SampleSet load_samples(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("# n=", 0) != 0)
    throw Error("sample CSV must start with a '# n=... m=... seed=...' header");
  int n = 0, m = 0;
  unsigned long long seed = 0;
  if (std::sscanf(line.c_str(), "# n=%d m=%d seed=%llu", &n, &m, &seed) < 2)
    throw Error("malformed sample CSV header: '" + line + "'");
  std::vector<SpinConfig> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SpinConfig x;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      if (cell == "1" || cell == "+1")
        x.push_back(Spin{1});
      else if (cell == "-1")
        x.push_back(Spin{-1});
      else
        throw Error("sample CSV cells must be 1 or -1, got '" + cell + "'");
    }
    points.push_back(std::move(x));
  }
  if (static_cast<int>(points.size()) != m)
    throw Error("sample CSV header promises " + std::to_string(m) +
                " rows, found " + std::to_string(points.size()));
  return SampleSet(n, std::move(points));
}

namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void save_results_csv(const std::string& path, const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  out << "scenario,trial,method,param,value,note\n";
  for (const ResultRow& r : rows) {
    out << csv_escape(r.scenario) << ',' << r.trial << ',' << csv_escape(r.method)
        << ',' << r.param << ',' << fmt_double(r.value) << ','
        << csv_escape(r.note) << '\n';
  }
  write_file(path, out.str());
}

void save_summary_json(const std::string& path, const std::string& config_json,
                       const std::vector<AggregateRow>& aggregates) {
  json config = parse_json(config_json, "summary config");
  json aggs = json::array();
  for (const AggregateRow& a : aggregates) {
    json row{{"method", a.method},
             {"param", a.param},
             {"count", a.count},
             {"mean", std::isfinite(a.mean) ? json(a.mean) : json()},
             {"se", std::isfinite(a.se) ? json(a.se) : json()}};
    aggs.push_back(std::move(row));
  }
  json out{{"config", std::move(config)}, {"aggregates", std::move(aggs)}};
  write_file(path, out.dump(2) + "\n");
}

void save_trace_csv(const std::string& path, const std::vector<LearnTraceRow>& rows) {
  std::ostringstream out;
  out << "step,mae,grad_norm\n";
  for (const LearnTraceRow& r : rows)
    out << r.step << ',' << fmt_double(r.mae) << ',' << fmt_double(r.grad_max)
        << '\n';
  write_file(path, out.str());
}

}  // namespace smci
