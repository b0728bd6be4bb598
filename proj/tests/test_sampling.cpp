#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "smci/errors.hpp"
#include "smci/experiments.hpp"
#include "smci/sampling.hpp"

using namespace smci;
using doctest::Approx;

TEST_CASE("linear anneal schedules ramp to one and hold") {
  AnnealSchedule s = AnnealSchedule::linear(4, 2);
  CHECK(s.betas == std::vector<double>{0.25, 0.5, 0.75, 1.0, 1.0, 1.0});
  CHECK(s.total_sweeps() == 6);
  CHECK_THROWS_AS(AnnealSchedule::linear(0, 5), ArgumentError);
  CHECK_THROWS_AS(AnnealSchedule::linear(5, -1), ArgumentError);
}

TEST_CASE("one sweep preserves the exact distribution") {
  // Evolve an exact distribution vector through the sweep operator: for each
  // site in order, resample that site from its conditional. The stationary
  // distribution must be an exact fixed point.
  RandomStream rng(3);
  PairwiseGraph g = PairwiseGraph::random(4, 0.8, rng);
  PbmParams params = generate_model(g, -0.5, 0.5, -0.8, 0.8, 11);

  std::vector<double> pi(16);
  double z = 0.0;
  for (std::uint64_t mask = 0; mask < 16; ++mask) {
    pi[mask] = std::exp(testutil::direct_energy(
        params, testutil::config_from_mask(4, mask)));
    z += pi[mask];
  }
  for (double& p : pi) p /= z;

  auto sweep_operator = [&](std::vector<double> dist) {
    for (int i = 0; i < 4; ++i) {
      std::vector<double> next(16, 0.0);
      for (std::uint64_t mask = 0; mask < 16; ++mask) {
        SpinConfig x = testutil::config_from_mask(4, mask);
        double field = local_field(params, i, x);
        double p_up = 1.0 / (1.0 + std::exp(-2.0 * field));
        next[mask | (1ULL << i)] += dist[mask] * p_up;
        next[mask & ~(1ULL << i)] += dist[mask] * (1.0 - p_up);
      }
      dist = next;
    }
    return dist;
  };

  std::vector<double> evolved = sweep_operator(pi);
  for (std::uint64_t mask = 0; mask < 16; ++mask)
    CHECK(evolved[mask] == Approx(pi[mask]).epsilon(1e-12));

  // And from a cold start the operator converges to the same fixed point.
  std::vector<double> dist(16, 1.0 / 16.0);
  for (int it = 0; it < 200; ++it) dist = sweep_operator(dist);
  for (std::uint64_t mask = 0; mask < 16; ++mask)
    CHECK(dist[mask] == Approx(pi[mask]).epsilon(1e-9));
}

TEST_CASE("sweeps at beta zero ignore the parameters") {
  PbmParams params(PairwiseGraph::grid(2, 3), {5.0, -5.0, 5.0, -5.0, 5.0, -5.0},
                   {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0});
  RandomStream rng(4);
  int ups = 0;
  const int reps = 20000;
  SpinConfig x(6, Spin{1});
  for (int rep = 0; rep < reps; ++rep) {
    gibbs_sweep(params, x, 0.0, rng);
    for (Spin s : x) ups += s > 0;
  }
  double frac = static_cast<double>(ups) / (6.0 * reps);
  CHECK(frac == Approx(0.5).epsilon(0.02));
}

TEST_CASE("sample sets are reproducible and chain-count stable") {
  PbmParams params = generate_model(PairwiseGraph::grid(2, 3), -0.2, 0.2, -0.3,
                                    0.3, 21);
  AnnealSchedule sched = AnnealSchedule::linear(30, 5);
  SampleSet a = draw_sample_set(params, 5, sched, 99);
  SampleSet b = draw_sample_set(params, 5, sched, 99);
  CHECK(a.points == b.points);

  SampleSet big = draw_sample_set(params, 9, sched, 99);
  for (int l = 0; l < 5; ++l) CHECK(big.points[l] == a.points[l]);

  SampleSet other = draw_sample_set(params, 5, sched, 100);
  CHECK(other.points != a.points);

  CHECK_THROWS_AS(draw_sample_set(params, 0, sched, 1), ArgumentError);
}

TEST_CASE("independent-spin models are sampled exactly after one sweep") {
  PairwiseGraph g(6, {});
  PbmParams params(g, {0.3, -0.6, 0.0, 1.0, -0.15, 0.45}, {});
  AnnealSchedule direct;
  direct.betas = {1.0};
  SampleSet s = draw_sample_set(params, 20000, direct, 7);

  for (int i = 0; i < 6; ++i) {
    double acc = 0.0;
    for (const SpinConfig& x : s.points) acc += x[i];
    double mean = acc / s.size();
    double expect = std::tanh(params.bias(i));
    double se = std::sqrt((1.0 - expect * expect) / s.size());
    CHECK(std::abs(mean - expect) < 4.0 * se + 1e-12);
  }
}

TEST_CASE("long runs reproduce the exact moments") {
  PbmParams params = generate_model(PairwiseGraph::grid(2, 3), -0.2, 0.2, -0.3,
                                    0.3, 33);
  Moments exact = exact_moments(params);

  RandomStream rng(55);
  SpinConfig x = random_config(6, rng);
  for (int burn = 0; burn < 500; ++burn) gibbs_sweep(params, x, 1.0, rng);

  const int sweeps = 200000;
  std::vector<double> mean_acc(6, 0.0);
  std::vector<double> pair_acc(params.graph().num_edges(), 0.0);
  for (int rep = 0; rep < sweeps; ++rep) {
    gibbs_sweep(params, x, 1.0, rng);
    for (int i = 0; i < 6; ++i) mean_acc[i] += x[i];
    for (int k = 0; k < params.graph().num_edges(); ++k) {
      const Edge& e = params.graph().edges()[k];
      pair_acc[k] += static_cast<double>(x[e.u]) * static_cast<double>(x[e.v]);
    }
  }
  // Tolerances are ~3 standard errors with a generous autocorrelation factor.
  for (int i = 0; i < 6; ++i)
    CHECK(std::abs(mean_acc[i] / sweeps - exact.mean[i]) < 0.02);
  for (int k = 0; k < params.graph().num_edges(); ++k)
    CHECK(std::abs(pair_acc[k] / sweeps - exact.pair[k]) < 0.02);
}

TEST_CASE("persistent chains stay near the target distribution") {
  PbmParams params = generate_model(PairwiseGraph::grid(2, 4), -0.2, 0.2, -0.3,
                                    0.3, 44);
  SampleSet start = draw_sample_set(params, 400, AnnealSchedule::linear(200, 20), 5);
  ChainState chains = ChainState::init(start, 6);
  for (int t = 0; t < 50; ++t) persistent_update(params, chains, 1);

  Moments exact = exact_moments(params);
  SampleSet current = chains.as_sample_set(8);
  for (int i = 0; i < 8; ++i) {
    double acc = 0.0;
    for (const SpinConfig& x : current.points) acc += x[i];
    CHECK(std::abs(acc / current.size() - exact.mean[i]) < 0.2);
  }

  CHECK_THROWS_AS(persistent_update(params, chains, 0), ArgumentError);
}

TEST_CASE("persistent updates are reproducible") {
  PbmParams params = generate_model(PairwiseGraph::grid(2, 3), -0.2, 0.2, -0.3,
                                    0.3, 45);
  SampleSet start = draw_sample_set(params, 10, AnnealSchedule::linear(20, 5), 1);
  ChainState a = ChainState::init(start, 9);
  ChainState b = ChainState::init(start, 9);
  for (int t = 0; t < 7; ++t) {
    persistent_update(params, a, 2);
    persistent_update(params, b, 2);
  }
  CHECK(a.configs == b.configs);

  SampleSet weighted(6, start.points, std::vector<double>(10, 1.0));
  CHECK_THROWS_AS(ChainState::init(weighted, 9), ArgumentError);
}

TEST_CASE("importance ladder on a uniform model is exact") {
  PbmParams params(PairwiseGraph::grid(2, 3));
  AisResult r = ais_estimate(params, 10, 0.01, 42);
  CHECK(r.log_z == 6.0 * std::log(2.0));
  for (double lw : r.log_weights) CHECK(lw == 0.0);
  for (double w : r.samples.weights) CHECK(w == 1.0);
}

TEST_CASE("importance ladder recovers independent-spin partition functions") {
  PairwiseGraph g(20, {});
  PbmParams params = generate_model(g, -0.2, 0.2, 0.0, 0.0, 77);
  double truth = 0.0;
  for (int i = 0; i < 20; ++i)
    truth += std::log(2.0 * std::cosh(params.bias(i)));

  AisResult r = ais_estimate(params, 100, 1e-4, 5);
  CHECK(std::abs(r.log_z - truth) / std::abs(truth) < 0.01);
  for (double lw : r.log_weights) CHECK(std::isfinite(lw));
  for (double w : r.samples.weights) {
    CHECK(std::isfinite(w));
    CHECK(w > 0.0);
  }
}

TEST_CASE("importance-weighted moments match exact enumeration") {
  PbmParams params = generate_model(PairwiseGraph::grid(2, 4), -0.2, 0.2, -0.3,
                                    0.3, 88);
  AisResult r = ais_estimate(params, 400, 1e-3, 12);
  Moments exact = exact_moments(params);
  Moments est = estimate_moments(params, CovMethod::mci(), r.samples);
  // Per-moment standard error is about 0.05; the bound covers the max over
  // all 18 checked quantities.
  for (int i = 0; i < 8; ++i) CHECK(std::abs(est.mean[i] - exact.mean[i]) < 0.16);
  for (int k = 0; k < params.graph().num_edges(); ++k)
    CHECK(std::abs(est.pair[k] - exact.pair[k]) < 0.16);

  AisResult again = ais_estimate(params, 400, 1e-3, 12);
  CHECK(again.log_z == r.log_z);
  CHECK_THROWS_AS(ais_estimate(params, 0, 1e-3, 1), ArgumentError);
  CHECK_THROWS_AS(ais_estimate(params, 5, 0.0, 1), ArgumentError);
}
