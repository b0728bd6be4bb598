#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "smci/model.hpp"

namespace smci {

// Function of the spins on a target region. Receives the restriction of a
// configuration to the target, in the target's sorted member order.
using TargetFn = std::function<double(const SpinConfig&)>;

// atanh arguments are clamped into [-limit, +limit] before evaluation so
// saturated tanh products cannot produce infinities. Every clamp increments
// a global counter that tests and debugging can inspect.
inline constexpr double kTanhClampLimit = 1.0 - 1e-15;
std::uint64_t clamp_hit_count();
void reset_clamp_hits();

// Plain sample average of f over the target spins.
double mci_estimate(const TargetFn& f, const Region& t, const SampleSet& s);

// Region-sum estimator: for each sample, sum f against the conditional
// distribution of the spins in `a` given the sampled boundary, then average
// over samples. t must be inside a; enumeration is capped at 2^cap states.
double gsmci_estimate(const PbmParams& params, const TargetFn& f, const Region& t,
                      const Region& a, const SampleSet& s,
                      int cap = kDefaultRegionCap);

// Region-sum estimator of order k: the sum region is everything within k-1
// hops of t. k = 1 sums over t alone.
double ksmci_estimate(const PbmParams& params, const TargetFn& f, const Region& t,
                      int k, const SampleSet& s, int cap = kDefaultRegionCap);

// Closed form of the order-1 estimator for a single-site mean:
// average of tanh(local field at i).
double smci1_mean(const PbmParams& params, int i, const SampleSet& s);

// Closed form of the order-1 estimator for a pair moment <x_i x_j>:
// average of tanh(atanh(tanh(g_ij) tanh(g_ji)) + w_ij) with g_ij the cavity
// field at i excluding j. Valid for any i != j; w_ij = 0 off the edge set.
double smci1_pair(const PbmParams& params, int i, int j, const SampleSet& s);

// Sum region for the semi-order-2 estimator: t plus a greedily chosen
// independent subset of t's first neighbors. Ties during the greedy pass are
// broken toward the neighbor with the largest total |coupling| into t.
Region s2_region(const PbmParams& params, const Region& t);

// Closed forms of the semi-order-2 estimator on a = t (+) independent
// neighbors. The region must be one produced by s2_region (or any region
// whose complement-of-target part is an independent set).
double s2_mean(const PbmParams& params, int i, const Region& a, const SampleSet& s);
double s2_pair(const PbmParams& params, int i, int j, const Region& a,
               const SampleSet& s);

// Scaled asymptotic variance of the region-sum estimator with sum region a:
// Var over the boundary marginal of the conditional expectation of f, so 0
// when a covers the whole graph. Exact, by enumeration over all states;
// requires num_vertices() <= cap.
double asymptotic_variance(const PbmParams& params, const TargetFn& f,
                           const Region& t, const Region& a,
                           int cap = kDefaultRegionCap);

// Scaled asymptotic variance of the plain sample average: Var(f).
double mci_asymptotic_variance(const PbmParams& params, const TargetFn& f,
                               const Region& t, int cap = kDefaultExactCap);

// Estimator selector for whole-model moment and covariance tables.
struct CovMethod {
  enum Kind { kExact, kMci, kSmci1, kS2, kSmciK } kind = kMci;
  int k = 2;  // order for kSmciK

  static CovMethod exact() { return {kExact, 0}; }
  static CovMethod mci() { return {kMci, 0}; }
  static CovMethod smci1() { return {kSmci1, 0}; }
  static CovMethod s2() { return {kS2, 0}; }
  static CovMethod smci_k(int k) { return {kSmciK, k}; }

  // Token forms: "exact", "mci", "smci1", "smci-s2", "smci<k>" with k >= 2.
  static CovMethod parse(const std::string& token);
  std::string to_string() const;
};

// All first moments and edge pair moments under one estimator. The sample
// set is ignored for kExact.
Moments estimate_moments(const PbmParams& params, CovMethod method,
                         const SampleSet& s, int cap = kDefaultRegionCap);

// Per-edge covariances <x_i x_j> - <x_i><x_j>, with the same estimator used
// for the pair moment and both means. Aligned with graph().edges().
std::vector<double> covariance_table(const PbmParams& params, CovMethod method,
                                     const SampleSet& s,
                                     int cap = kDefaultRegionCap);

}  // namespace smci
