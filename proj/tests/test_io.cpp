#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "smci/errors.hpp"
#include "smci/experiments.hpp"
#include "smci/io.hpp"

using namespace smci;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("smci_io_test_" + name);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct FileGuard {
  std::filesystem::path path;
  ~FileGuard() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("doubles survive a round trip through their text form") {
  for (double v : {0.0, 1.0, -1.5, 1.0 / 3.0, 0.30000000000000004,
                   -2.2250738585072014e-308, 1e300, std::exp(1.0)}) {
    CHECK(std::stod(fmt_double(v)) == v);
  }
  CHECK(fmt_double(std::nan("")) == "nan");
  CHECK(fmt_double(-std::nan("")) == "nan");
}

TEST_CASE("graphs survive a JSON round trip") {
  PairwiseGraph g(5, {{3, 4}, {0, 1}, {1, 3}});
  std::string text = graph_to_json(g);
  PairwiseGraph back = graph_from_json(text);
  CHECK(back.num_vertices() == 5);
  CHECK(back.edges() == g.edges());

  FileGuard file{temp_file("graph.json")};
  save_graph(file.path.string(), g);
  CHECK(load_graph(file.path.string()).edges() == g.edges());

  CHECK_THROWS_AS(graph_from_json("{\"edges\": []}"), Error);
  CHECK_THROWS_AS(graph_from_json("not json"), Error);
  CHECK_THROWS_AS(load_graph("/nonexistent/graph.json"), Error);
}

TEST_CASE("models survive a JSON round trip at full precision") {
  PairwiseGraph g(4, {{0, 1}, {1, 2}, {2, 3}});
  PbmParams params(g, {0.1, -1.0 / 3.0, 0.30000000000000004, 2e-300},
                   {0.5, -0.25, 1.0 / 7.0});
  std::string text = model_to_json(params);
  PbmParams back = model_from_json(text);
  CHECK(back.num_vertices() == 4);
  for (int i = 0; i < 4; ++i) CHECK(back.bias(i) == params.bias(i));
  for (int k = 0; k < 3; ++k)
    CHECK(back.coupling_at(k) == params.coupling_at(k));

  FileGuard file{temp_file("model.json")};
  save_model(file.path.string(), params);
  PbmParams loaded = load_model(file.path.string());
  CHECK(loaded.coupling_at(2) == params.coupling_at(2));

  // Edge order in the file does not matter; couplings follow their edge.
  std::string scrambled =
      "{\"n\": 3, \"bias\": [0, 0, 0],"
      " \"edges\": [[1, 2, 0.75], [0, 1, -0.5]]}";
  PbmParams from_scrambled = model_from_json(scrambled);
  CHECK(from_scrambled.coupling(0, 1) == -0.5);
  CHECK(from_scrambled.coupling(1, 2) == 0.75);

  CHECK_THROWS_AS(model_from_json("{\"n\": 2, \"bias\": [0.0]}"), Error);
}

TEST_CASE("sample sets survive a CSV round trip") {
  SampleSet s(3, {{1, -1, 1}, {-1, -1, -1}, {1, 1, 1}});
  FileGuard file{temp_file("samples.csv")};
  save_samples(file.path.string(), s, 42);

  std::string text = slurp(file.path);
  CHECK(text.rfind("# n=3 m=3 seed=42", 0) == 0);

  SampleSet back = load_samples(file.path.string());
  CHECK(back.n == 3);
  REQUIRE(back.size() == 3);
  for (int l = 0; l < 3; ++l) CHECK(back.points[l] == s.points[l]);

  SampleSet weighted(2, {{1, 1}}, {2.0});
  CHECK_THROWS_AS(save_samples(file.path.string(), weighted, 0), ArgumentError);
  CHECK_THROWS_AS(load_samples("/nonexistent/samples.csv"), Error);
}

TEST_CASE("result rows write as escaped CSV") {
  std::vector<ResultRow> rows = {
      {"inference", 0, "smci1", 100, 0.125, ""},
      {"inference", 1, "smci2", 10, std::nan(""),
       "sum region has 12 members, exceeds enumeration cap 8"},
  };
  FileGuard file{temp_file("results.csv")};
  save_results_csv(file.path.string(), rows);
  std::string text = slurp(file.path);

  CHECK(text.rfind("scenario,trial,method,param,value,note\n", 0) == 0);
  CHECK(text.find("inference,0,smci1,100,0.125,\n") != std::string::npos);
  // The note contains a comma, so it must be quoted.
  CHECK(text.find("\"sum region has 12 members, exceeds enumeration cap 8\"") !=
        std::string::npos);
  CHECK(text.find("nan") != std::string::npos);
}

TEST_CASE("summaries embed the configuration and the aggregate table") {
  std::vector<AggregateRow> aggs = {
      {"mci", 10, 0.25, 0.0125, 200},
      {"smci2", 10, std::nan(""), std::nan(""), 0},
  };
  FileGuard file{temp_file("summary.json")};
  save_summary_json(file.path.string(), "{\"trials\": 200}", aggs);
  std::string text = slurp(file.path);

  CHECK(text.find("\"config\"") != std::string::npos);
  CHECK(text.find("\"trials\": 200") != std::string::npos);
  CHECK(text.find("\"method\": \"mci\"") != std::string::npos);
  CHECK(text.find("0.25") != std::string::npos);
  // NaN has no JSON literal; skipped aggregates serialize as null.
  CHECK(text.find("null") != std::string::npos);
  CHECK(text.find("nan") == std::string::npos);

  CHECK_THROWS_AS(save_summary_json(file.path.string(), "not json", aggs), Error);
}

TEST_CASE("learning traces write one row per recorded step") {
  std::vector<LearnTraceRow> rows = {{50, 0.5, 0.25}, {100, 0.25, 0.125}};
  FileGuard file{temp_file("trace.csv")};
  save_trace_csv(file.path.string(), rows);
  std::string text = slurp(file.path);
  CHECK(text == "step,mae,grad_norm\n50,0.5,0.25\n100,0.25,0.125\n");
}

TEST_CASE("file output reports unwritable paths") {
  PairwiseGraph g(2, {{0, 1}});
  CHECK_THROWS_AS(save_graph("/nonexistent/dir/graph.json", g), Error);
}
