#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smci/estimators.hpp"
#include "smci/model.hpp"
#include "smci/sampling.hpp"

namespace smci {

// Average log likelihood of the data under the model (weights supported).
double log_likelihood(const PbmParams& params, const SampleSet& data,
                      int cap = kDefaultExactCap);

// Gradient of the average log likelihood: data moments minus model moments.
struct Gradient {
  std::vector<double> bias;
  std::vector<double> coupling;

  double max_abs() const;
};

// Exact gradient via full enumeration of the model moments.
Gradient exact_gradient(const PbmParams& params, const SampleSet& data,
                        int cap = kDefaultExactCap);

// Gradient with the model moments replaced by an estimate over sample set s.
Gradient approx_gradient(const PbmParams& params, const SampleSet& data,
                         const SampleSet& s, CovMethod method,
                         int cap = kDefaultRegionCap);

// Maximum-likelihood parameters by gradient ascent from zero with each
// coordinate scaled by the variance of its sufficient statistic, stopped
// when the largest gradient component drops below tol. Throws Error if that
// does not happen within max_iter steps.
PbmParams exact_mle(const PairwiseGraph& g, const SampleSet& data,
                    double learning_rate = 0.5, double tol = 1e-8,
                    long max_iter = 5000, int cap = kDefaultExactCap);

// Shared settings for the approximate learning loops.
struct LearnConfig {
  CovMethod estimator = CovMethod::smci1();
  double learning_rate = 0.02;
  int steps = 5000;
  int replicates = 1;  // persistent chains per data point
  int kappa = 1;       // chain sweeps per parameter update
  std::uint64_t seed = 0;
  int trace_stride = 1;  // record every stride-th step (the last step always)
  int cap = kDefaultRegionCap;
};

struct LearnTraceRow {
  int step = 0;
  double mae = 0.0;  // coupling MAE against the reference, NaN without one
  double grad_max = 0.0;
};

struct LearnTrace {
  std::vector<LearnTraceRow> rows;
  PbmParams params;  // parameters after the last step
};

// Gradient ascent where the model moments are re-estimated from the data
// itself at the current parameters every step.
LearnTrace fixed_sample_learning(const PairwiseGraph& g, const SampleSet& data,
                                 const LearnConfig& config,
                                 const PbmParams* reference = nullptr);

// Gradient ascent with persistent chains: chains start at `replicates`
// copies of the data and advance kappa sweeps after every parameter update;
// the model moments are estimated on the current chains.
LearnTrace pcd_smci_learning(const PairwiseGraph& g, const SampleSet& data,
                             const LearnConfig& config,
                             const PbmParams* reference = nullptr);

// Mean absolute difference of the couplings of two models on one graph.
double coupling_mae(const PbmParams& a, const PbmParams& b);

}  // namespace smci
