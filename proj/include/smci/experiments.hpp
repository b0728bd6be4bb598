#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smci/estimators.hpp"
#include "smci/learning.hpp"
#include "smci/model.hpp"
#include "smci/sampling.hpp"

namespace smci {

// Graph family selector, parseable from strings like "grid:4x5",
// "random:20,0.2", "complete:20" and "file:graph.json".
struct GraphSpec {
  enum Kind { kGrid, kRandom, kComplete, kFile } kind = kGrid;
  int rows = 4, cols = 5;  // kGrid
  int n = 20;              // kRandom / kComplete
  double p = 0.2;          // kRandom
  std::string path;        // kFile

  static GraphSpec parse(const std::string& text);
  std::string to_string() const;
  // Random graphs draw their edges from a stream seeded with `seed`; the
  // other kinds ignore it.
  PairwiseGraph instantiate(std::uint64_t seed) const;
};

// Model with biases and couplings drawn uniformly from the given ranges
// (biases first in vertex order, then couplings in edge order).
PbmParams generate_model(const PairwiseGraph& g, double bias_lo, double bias_hi,
                         double coup_lo, double coup_hi, std::uint64_t seed);

// Mean absolute difference between two aligned value tables.
double mae(const std::vector<double>& ref, const std::vector<double>& est);
// Keyed variant; throws unless both tables have exactly the same keys.
double mae(const std::vector<std::pair<std::string, double>>& ref,
           const std::vector<std::pair<std::string, double>>& est);

// One long-format result: scenario/trial identify the repetition, method the
// estimator or learner, param the sample size or step, value the metric.
// note is empty unless the cell was skipped (then value is NaN).
struct ResultRow {
  std::string scenario;
  int trial = 0;
  std::string method;
  long param = 0;
  double value = 0.0;
  std::string note;
};

struct AggregateRow {
  std::string method;
  long param = 0;
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  int count = 0;    // finite values only
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> aggregates;
};

// Mean/standard-error summary per (method, param), ordered by method name
// then param. NaN values (skipped cells) are excluded from the aggregates.
std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows);

// Estimator-accuracy experiment: per trial, draw a model, compute its exact
// edge covariances, then score every method's covariance table against them
// (MAE over edges) at every sample size.
struct InferenceConfig {
  std::string scenario = "inference";
  GraphSpec graph;
  int trials = 200;
  std::vector<int> sample_sizes = {10, 100, 1000};
  // Tokens: "mci", "smci1", "smci-s2", "smci<k>" (k >= 2), "ais".
  std::vector<std::string> methods = {"mci", "smci1", "smci-s2", "smci2"};
  double bias_lo = -0.2, bias_hi = 0.2;
  double coup_lo = -0.3, coup_hi = 0.3;
  AnnealSchedule schedule = AnnealSchedule::linear();
  int region_cap = kDefaultRegionCap;
  // Chains per annealed-importance ladder; 0 instead runs one ladder per
  // sample size with the chain count following it.
  int ais_chains = 100;
  double ais_step = 1e-4;
  std::uint64_t seed = 0;
};

std::vector<ResultRow> run_inference_trial(const InferenceConfig& config, int trial);
ResultTable run_inference_experiment(const InferenceConfig& config);

// Learner-accuracy experiment: per trial, draw a generating model, sample a
// dataset, fit the reference by exact maximum likelihood, then trace the
// coupling MAE of each approximate learner against that reference. A trial
// whose reference fit does not converge (small datasets can put the optimum
// at infinity) is recorded as one skipped row per method, value NaN with the
// failure note, and contributes nothing to the aggregates.
struct LearningConfig {
  std::string scenario = "learning";
  GraphSpec generator;
  GraphSpec learner;
  int trials = 50;
  int data_count = 50;
  // Tokens: "fixed-smci1", "fixed-s2", "pcd-smci1", "pcd-s2", optionally
  // with a ":e=<r>" suffix for the persistent chain replication factor.
  std::vector<std::string> methods = {"fixed-smci1", "pcd-smci1"};
  double bias_lo = -0.2, bias_hi = 0.2;
  double coup_lo = -0.3, coup_hi = 0.3;
  double learning_rate = 0.02;
  int steps = 5000;
  int kappa = 1;
  int trace_stride = 50;
  AnnealSchedule schedule = AnnealSchedule::linear();
  double mle_rate = 0.5;
  double mle_tol = 1e-8;
  long mle_max_iter = 20000;
  std::uint64_t seed = 0;
};

// Parsed learning method token.
struct LearnMethodSpec {
  std::string token;
  bool persistent = false;
  CovMethod estimator = CovMethod::smci1();
  int replicates = 1;

  static LearnMethodSpec parse(const std::string& token);
};

std::vector<ResultRow> run_learning_trial(const LearningConfig& config, int trial);
ResultTable run_learning_experiment(const LearningConfig& config);

}  // namespace smci
