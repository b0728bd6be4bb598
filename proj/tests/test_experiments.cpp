#include <doctest.h>

#include <cmath>

#include "smci/errors.hpp"
#include "smci/experiments.hpp"
#include "smci/io.hpp"

using namespace smci;
using doctest::Approx;

TEST_CASE("graph specs parse and print") {
  GraphSpec grid = GraphSpec::parse("grid:3x4");
  CHECK(grid.kind == GraphSpec::kGrid);
  CHECK(grid.rows == 3);
  CHECK(grid.cols == 4);
  CHECK(grid.to_string() == "grid:3x4");

  GraphSpec rnd = GraphSpec::parse("random:20,0.25");
  CHECK(rnd.kind == GraphSpec::kRandom);
  CHECK(rnd.n == 20);
  CHECK(rnd.p == Approx(0.25));
  CHECK(GraphSpec::parse(rnd.to_string()).p == rnd.p);

  GraphSpec complete = GraphSpec::parse("complete:7");
  CHECK(complete.kind == GraphSpec::kComplete);
  CHECK(complete.n == 7);

  GraphSpec file = GraphSpec::parse("file:some/graph.json");
  CHECK(file.kind == GraphSpec::kFile);
  CHECK(file.path == "some/graph.json");

  CHECK_THROWS_AS(GraphSpec::parse("grid:3"), ArgumentError);
  CHECK_THROWS_AS(GraphSpec::parse("grid:0x4"), ArgumentError);
  CHECK_THROWS_AS(GraphSpec::parse("random:20"), ArgumentError);
  CHECK_THROWS_AS(GraphSpec::parse("random:20,1.5"), ArgumentError);
  CHECK_THROWS_AS(GraphSpec::parse("complete:x"), ArgumentError);
  CHECK_THROWS_AS(GraphSpec::parse("file:"), ArgumentError);
  CHECK_THROWS_AS(GraphSpec::parse("torus:3x3"), ArgumentError);
}

TEST_CASE("graph specs build the graphs they describe") {
  PairwiseGraph grid = GraphSpec::parse("grid:3x4").instantiate(0);
  CHECK(grid.num_vertices() == 12);
  CHECK(grid.num_edges() == 17);

  PairwiseGraph complete = GraphSpec::parse("complete:5").instantiate(0);
  CHECK(complete.num_edges() == 10);

  GraphSpec rnd = GraphSpec::parse("random:15,0.3");
  PairwiseGraph a = rnd.instantiate(123);
  PairwiseGraph b = rnd.instantiate(123);
  CHECK(a.edges() == b.edges());
}

TEST_CASE("generated models stay inside the requested ranges") {
  PairwiseGraph g = PairwiseGraph::grid(3, 3);
  PbmParams params = generate_model(g, -0.1, 0.2, 0.05, 0.3, 99);
  for (int i = 0; i < 9; ++i) {
    CHECK(params.bias(i) >= -0.1);
    CHECK(params.bias(i) <= 0.2);
  }
  for (int k = 0; k < g.num_edges(); ++k) {
    CHECK(params.coupling_at(k) >= 0.05);
    CHECK(params.coupling_at(k) <= 0.3);
  }

  PbmParams again = generate_model(g, -0.1, 0.2, 0.05, 0.3, 99);
  CHECK(again.bias(0) == params.bias(0));
  CHECK(again.coupling_at(0) == params.coupling_at(0));

  CHECK_THROWS_AS(generate_model(g, 0.5, -0.5, 0.0, 1.0, 1), ArgumentError);
}

TEST_CASE("mean absolute error over plain and keyed tables") {
  CHECK(mae({1.0, 2.0}, {2.0, 4.0}) == Approx(1.5).epsilon(1e-15));
  CHECK_THROWS_AS(mae({1.0}, {1.0, 2.0}), ArgumentError);
  CHECK_THROWS_AS(mae(std::vector<double>{}, std::vector<double>{}),
                  ArgumentError);

  std::vector<std::pair<std::string, double>> ref = {{"a", 1.0}, {"b", 2.0}};
  std::vector<std::pair<std::string, double>> est = {{"b", 2.5}, {"a", 1.0}};
  CHECK(mae(ref, est) == Approx(0.25).epsilon(1e-15));

  std::vector<std::pair<std::string, double>> wrong = {{"a", 1.0}, {"c", 2.0}};
  CHECK_THROWS_AS(mae(ref, wrong), ArgumentError);
}

TEST_CASE("aggregates group by method and parameter") {
  std::vector<ResultRow> rows = {
      {"s", 0, "m1", 10, 1.0, ""},
      {"s", 1, "m1", 10, 3.0, ""},
      {"s", 0, "m1", 20, std::nan(""), "skipped"},
      {"s", 1, "m1", 20, 5.0, ""},
      {"s", 0, "m2", 10, 2.0, ""},
      {"s", 0, "m3", 1, std::nan(""), "skipped"},
  };
  std::vector<AggregateRow> aggs = aggregate_rows(rows);
  REQUIRE(aggs.size() == 4);

  CHECK(aggs[0].method == "m1");
  CHECK(aggs[0].param == 10);
  CHECK(aggs[0].mean == Approx(2.0));
  CHECK(aggs[0].se == Approx(1.0));
  CHECK(aggs[0].count == 2);

  CHECK(aggs[1].method == "m1");
  CHECK(aggs[1].param == 20);
  CHECK(aggs[1].mean == Approx(5.0));
  CHECK(aggs[1].se == 0.0);
  CHECK(aggs[1].count == 1);

  CHECK(aggs[2].method == "m2");
  CHECK(aggs[2].count == 1);

  CHECK(aggs[3].method == "m3");
  CHECK(aggs[3].count == 0);
  CHECK(std::isnan(aggs[3].mean));
}

TEST_CASE("inference trials cover every method and sample size") {
  InferenceConfig config;
  config.graph = GraphSpec::parse("grid:2x3");
  config.sample_sizes = {5, 20};
  config.methods = {"mci", "smci1", "smci-s2", "smci2", "ais"};
  config.schedule = AnnealSchedule::linear(20, 5);
  config.ais_step = 1e-2;
  config.ais_chains = 0;  // one ladder per sample size
  config.seed = 77;

  std::vector<ResultRow> rows = run_inference_trial(config, 3);
  REQUIRE(rows.size() == 10);
  for (const ResultRow& row : rows) {
    CHECK(row.scenario == "inference");
    CHECK(row.trial == 3);
    CHECK(std::isfinite(row.value));
    CHECK(row.value >= 0.0);
    CHECK(row.note.empty());
  }

  // Bitwise reproducibility of a repeated trial.
  std::vector<ResultRow> again = run_inference_trial(config, 3);
  REQUIRE(again.size() == rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    CHECK(again[r].method == rows[r].method);
    CHECK(again[r].param == rows[r].param);
    CHECK(again[r].value == rows[r].value);
  }

  // A fixed chain count runs a single ladder regardless of sample sizes.
  config.ais_chains = 37;
  std::vector<ResultRow> fixed_rows = run_inference_trial(config, 3);
  REQUIRE(fixed_rows.size() == 9);
  CHECK(fixed_rows.back().method == "ais");
  CHECK(fixed_rows.back().param == 37);
}

TEST_CASE("inference results do not depend on which other methods run") {
  InferenceConfig config;
  config.graph = GraphSpec::parse("grid:2x3");
  config.sample_sizes = {5, 20};
  config.methods = {"mci", "smci1", "smci-s2", "smci2"};
  config.schedule = AnnealSchedule::linear(20, 5);
  config.seed = 78;
  std::vector<ResultRow> full = run_inference_trial(config, 1);

  InferenceConfig solo = config;
  solo.methods = {"smci1"};
  std::vector<ResultRow> part = run_inference_trial(solo, 1);
  REQUIRE(part.size() == 2);
  for (const ResultRow& p : part) {
    bool found = false;
    for (const ResultRow& f : full)
      if (f.method == p.method && f.param == p.param) {
        CHECK(f.value == p.value);
        found = true;
      }
    CHECK(found);
  }

  // Dropping the smaller sample size leaves the larger one untouched.
  InferenceConfig big = config;
  big.sample_sizes = {20};
  std::vector<ResultRow> big_rows = run_inference_trial(big, 1);
  for (const ResultRow& b : big_rows)
    for (const ResultRow& f : full)
      if (f.method == b.method && f.param == b.param) CHECK(f.value == b.value);
}

TEST_CASE("inference trials record capacity misses as skipped cells") {
  InferenceConfig config;
  config.graph = GraphSpec::parse("complete:10");
  config.sample_sizes = {5};
  config.methods = {"smci1", "smci2"};
  config.schedule = AnnealSchedule::linear(10, 2);
  config.region_cap = 8;
  config.seed = 79;

  std::vector<ResultRow> rows = run_inference_trial(config, 0);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].method == "smci1");
  CHECK(std::isfinite(rows[0].value));
  CHECK(rows[1].method == "smci2");
  CHECK(std::isnan(rows[1].value));
  CHECK(rows[1].note.find("exceeds") != std::string::npos);
}

TEST_CASE("inference experiments aggregate their own rows") {
  InferenceConfig config;
  config.graph = GraphSpec::parse("grid:2x2");
  config.trials = 3;
  config.sample_sizes = {8};
  config.methods = {"mci", "smci1"};
  config.schedule = AnnealSchedule::linear(15, 5);
  config.seed = 80;

  ResultTable table = run_inference_experiment(config);
  CHECK(table.rows.size() == 6);
  std::vector<AggregateRow> expect = aggregate_rows(table.rows);
  REQUIRE(table.aggregates.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(table.aggregates[i].method == expect[i].method);
    CHECK(table.aggregates[i].mean == expect[i].mean);
    CHECK(table.aggregates[i].se == expect[i].se);
    CHECK(table.aggregates[i].count == expect[i].count);
  }

  CHECK_THROWS_AS(
      [&] {
        InferenceConfig bad = config;
        bad.trials = 0;
        run_inference_experiment(bad);
      }(),
      ArgumentError);
}

TEST_CASE("learning method tokens parse") {
  LearnMethodSpec fixed = LearnMethodSpec::parse("fixed-smci1");
  CHECK_FALSE(fixed.persistent);
  CHECK(fixed.estimator.kind == CovMethod::kSmci1);
  CHECK(fixed.replicates == 1);

  LearnMethodSpec pcd = LearnMethodSpec::parse("pcd-s2:e=5");
  CHECK(pcd.persistent);
  CHECK(pcd.estimator.kind == CovMethod::kS2);
  CHECK(pcd.replicates == 5);

  CHECK(LearnMethodSpec::parse("pcd-exact").estimator.kind == CovMethod::kExact);
  CHECK(LearnMethodSpec::parse("fixed-s2").estimator.kind == CovMethod::kS2);

  CHECK_THROWS_AS(LearnMethodSpec::parse("fixed-smci1:e=3"), ArgumentError);
  CHECK_THROWS_AS(LearnMethodSpec::parse("pcd-s2:x=2"), ArgumentError);
  CHECK_THROWS_AS(LearnMethodSpec::parse("pcd-s2:e=0"), ArgumentError);
  CHECK_THROWS_AS(LearnMethodSpec::parse("sgd-smci1"), ArgumentError);
  CHECK_THROWS_AS(LearnMethodSpec::parse("pcd-smci9"), ArgumentError);
}

TEST_CASE("learning trials trace every method against the reference") {
  LearningConfig config;
  config.generator = GraphSpec::parse("grid:2x2");
  config.learner = GraphSpec::parse("grid:2x2");
  config.data_count = 16;
  config.methods = {"fixed-smci1", "pcd-smci1:e=2"};
  config.learning_rate = 0.1;
  config.steps = 40;
  config.trace_stride = 20;
  config.schedule = AnnealSchedule::linear(30, 5);
  config.seed = 81;

  std::vector<ResultRow> rows = run_learning_trial(config, 2);
  REQUIRE(rows.size() == 4);
  for (const ResultRow& row : rows) {
    CHECK(row.scenario == "learning");
    CHECK(row.trial == 2);
    CHECK(std::isfinite(row.value));
    CHECK(row.value >= 0.0);
  }
  CHECK(rows[0].method == "fixed-smci1");
  CHECK(rows[0].param == 20);
  CHECK(rows[1].param == 40);
  CHECK(rows[2].method == "pcd-smci1:e=2");

  std::vector<ResultRow> again = run_learning_trial(config, 2);
  for (std::size_t r = 0; r < rows.size(); ++r)
    CHECK(again[r].value == rows[r].value);

  // Each method draws from its own stream, so running one alone matches.
  LearningConfig solo = config;
  solo.methods = {"pcd-smci1:e=2"};
  std::vector<ResultRow> part = run_learning_trial(solo, 2);
  REQUIRE(part.size() == 2);
  CHECK(part[0].value == rows[2].value);
  CHECK(part[1].value == rows[3].value);
}

TEST_CASE("learning experiments reject mismatched graph sizes") {
  LearningConfig config;
  config.generator = GraphSpec::parse("grid:2x2");
  config.learner = GraphSpec::parse("grid:2x3");
  config.data_count = 8;
  config.steps = 5;
  config.schedule = AnnealSchedule::linear(10, 2);
  CHECK_THROWS_AS(run_learning_trial(config, 0), ArgumentError);
}

TEST_CASE("learning trials skip when the reference fit cannot converge") {
  LearningConfig config;
  config.generator = GraphSpec::parse("grid:2x2");
  config.learner = GraphSpec::parse("grid:2x2");
  config.trials = 1;
  config.data_count = 8;
  config.methods = {"fixed-smci1", "pcd-smci1"};
  config.steps = 5;
  config.trace_stride = 5;
  config.schedule = AnnealSchedule::linear(10, 2);
  config.mle_max_iter = 2;  // the reference cannot converge this fast
  config.seed = 83;

  std::vector<ResultRow> rows = run_learning_trial(config, 0);
  REQUIRE(rows.size() == 2);
  for (const ResultRow& row : rows) {
    CHECK(std::isnan(row.value));
    CHECK(row.param == 5);
    CHECK(row.note.find("did not converge") != std::string::npos);
  }

  // Skipped rows still form aggregate groups, with zero finite values.
  ResultTable table = run_learning_experiment(config);
  REQUIRE(table.aggregates.size() == 2);
  CHECK(table.aggregates[0].count == 0);

  // Configuration errors are not converted into skips.
  LearningConfig bad = config;
  bad.methods = {"sgd-smci1"};
  CHECK_THROWS_AS(run_learning_trial(bad, 0), ArgumentError);
  bad = config;
  bad.mle_rate = 0.0;
  CHECK_THROWS_AS(run_learning_trial(bad, 0), ArgumentError);
}

TEST_CASE("learning experiments aggregate over trials") {
  LearningConfig config;
  config.generator = GraphSpec::parse("grid:2x2");
  config.learner = GraphSpec::parse("grid:2x2");
  config.trials = 2;
  // Enough data that no empirical moment sits exactly at +-1, which would
  // push the maximum-likelihood reference off to infinity.
  config.data_count = 32;
  config.methods = {"fixed-smci1"};
  config.learning_rate = 0.1;
  config.steps = 30;
  config.trace_stride = 10;
  config.schedule = AnnealSchedule::linear(20, 5);
  config.seed = 82;

  ResultTable table = run_learning_experiment(config);
  CHECK(table.rows.size() == 6);
  REQUIRE(table.aggregates.size() == 3);
  CHECK(table.aggregates[0].param == 10);
  CHECK(table.aggregates[0].count == 2);
  CHECK(std::isfinite(table.aggregates[0].mean));
}
