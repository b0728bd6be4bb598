#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "smci/graph.hpp"

namespace smci {

using Spin = std::int8_t;
// Full configuration: x[i] in {-1, +1} for each vertex i.
using SpinConfig = std::vector<Spin>;

// Collection of configurations with optional nonnegative weights. An empty
// weight vector means uniform weights. Doubles as a dataset for learning and
// as the sample set consumed by estimators.
struct SampleSet {
  int n = 0;
  std::vector<SpinConfig> points;
  std::vector<double> weights;  // empty, or one nonnegative weight per point

  SampleSet() = default;
  SampleSet(int n_, std::vector<SpinConfig> points_,
            std::vector<double> weights_ = {});

  int size() const { return static_cast<int>(points.size()); }
  bool weighted() const { return !weights.empty(); }
  double weight(int l) const { return weighted() ? weights[l] : 1.0; }
  double total_weight() const;
};

// Default cap on exact whole-model enumeration (2^n states).
inline constexpr int kDefaultExactCap = 24;
// Default cap on region enumeration (2^|a| states).
inline constexpr int kDefaultRegionCap = 20;

// Parameters of a pairwise model over spins in {-1, +1}:
// P(x) proportional to exp(sum_i bias_i x_i + sum_{ij in E} coupling_ij x_i x_j).
// Couplings live only on graph edges; queries off the edge set return 0.
class PbmParams {
 public:
  explicit PbmParams(PairwiseGraph g);
  PbmParams(PairwiseGraph g, std::vector<double> bias, std::vector<double> coupling);

  const PairwiseGraph& graph() const { return graph_; }
  int num_vertices() const { return graph_.num_vertices(); }

  double bias(int i) const;
  void set_bias(int i, double value);
  const std::vector<double>& biases() const { return bias_; }

  // Coupling on edge {i,j}; 0 when {i,j} is not an edge.
  double coupling(int i, int j) const;
  // Coupling by index into graph().edges().
  double coupling_at(int edge_idx) const;
  void set_coupling_at(int edge_idx, double value);
  const std::vector<double>& couplings() const { return coupling_; }

  struct Nbr {
    int vertex;
    int edge;  // index into graph().edges()
  };
  // Adjacency of i with edge indices, ascending by neighbor id.
  const std::vector<Nbr>& adjacency(int i) const;

 private:
  PairwiseGraph graph_;
  std::vector<double> bias_;
  std::vector<double> coupling_;
  std::vector<std::vector<Nbr>> adj_;
};

// Exponent of the unnormalized probability:
// sum_i bias_i x_i + sum_{ij in E} coupling_ij x_i x_j.
double log_potential(const PbmParams& params, const SpinConfig& x);

// Effective field at i given the rest of the configuration:
// bias_i + sum_{j adjacent to i} coupling_ij x_j.
double local_field(const PbmParams& params, int i, const SpinConfig& x);

// Local field at i with the contribution of adjacent vertex j removed.
// Equals local_field when {i,j} is not an edge.
double cavity_field(const PbmParams& params, int i, int j, const SpinConfig& x);

// Field at i in A from its bias plus couplings to neighbors outside A, read
// from x. Members of A contribute nothing, whatever x holds for them.
double boundary_field(const PbmParams& params, int i, const Region& a,
                      const SpinConfig& x);

// Conditional distribution of the spins in `region` given the boundary spins
// read from `boundary_values`. prob is indexed by bitmask: bit b set means
// region.members()[b] is +1. log_norm is the log of the normalizing sum of
// the unnormalized weights.
struct ConditionalTable {
  Region region;
  std::vector<double> prob;
  double log_norm = 0.0;
};

ConditionalTable conditional_on_region(const PbmParams& params, const Region& region,
                                       const SpinConfig& boundary_values,
                                       int cap = kDefaultRegionCap);

// Exact expectation of f over the full distribution by enumeration. f
// receives the restriction of x to t (in t's sorted member order).
double exact_expectation(const PbmParams& params,
                         const std::function<double(const SpinConfig&)>& f,
                         const Region& t, int cap = kDefaultExactCap);

// All first moments <x_i> and pair moments <x_i x_j> on edges, by one
// enumeration pass. pair is aligned with graph().edges().
struct Moments {
  std::vector<double> mean;
  std::vector<double> pair;
};

Moments exact_moments(const PbmParams& params, int cap = kDefaultExactCap);

// Per-edge covariances <x_i x_j> - <x_i><x_j> from a moment table.
std::vector<double> covariances_from_moments(const PairwiseGraph& g,
                                             const Moments& m);

// log of the partition function, by enumeration.
double log_partition(const PbmParams& params, int cap = kDefaultExactCap);

}  // namespace smci
