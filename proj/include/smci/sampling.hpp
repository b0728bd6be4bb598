#pragma once

#include <cstdint>
#include <vector>

#include "smci/model.hpp"
#include "smci/random.hpp"

namespace smci {

// Inverse-temperature schedule for annealed Gibbs sampling: the chain runs
// sweeps_per_beta sweeps at each listed beta in order.
struct AnnealSchedule {
  std::vector<double> betas;
  int sweeps_per_beta = 1;

  // Linear ramp of `ramp` sweeps from beta = 0 up to 1, then `equil` more
  // sweeps at beta = 1.
  static AnnealSchedule linear(int ramp = 1000, int equil = 100);

  int total_sweeps() const {
    return static_cast<int>(betas.size()) * sweeps_per_beta;
  }
};

// One heat-bath sweep over all vertices in ascending order at inverse
// temperature beta. Each vertex is resampled from its conditional given the
// current (partially updated) configuration. One u01 draw per vertex.
void gibbs_sweep(const PbmParams& params, SpinConfig& x, double beta,
                 RandomStream& rng);

// Uniform random configuration.
SpinConfig random_config(int n, RandomStream& rng);

// m independent annealed configurations. Chain l runs on its own stream
// seeded with derive_seed(seed, {kSeedTagChain, l}), starting from a uniform
// configuration, so results do not depend on how many other chains run.
SampleSet draw_sample_set(const PbmParams& params, int m,
                          const AnnealSchedule& schedule, std::uint64_t seed);

// Persistent chains: configurations plus their private streams. Used by
// persistent contrastive learning, where chains survive across parameter
// updates.
struct ChainState {
  std::vector<SpinConfig> configs;
  std::vector<RandomStream> streams;

  static ChainState init(const SampleSet& start, std::uint64_t seed);
  SampleSet as_sample_set(int n) const;
};

// Advance every chain by kappa full sweeps at beta = 1 under the given
// parameters. kappa must be positive.
void persistent_update(const PbmParams& params, ChainState& chains, int kappa);

// Annealed importance sampling from the uniform distribution at beta = 0 to
// the model at beta = 1, with a ladder of uniform beta increments of size
// `step` (last rung clipped to land exactly on 1). Returns the log partition
// function estimate, the final configurations with their importance weights
// (normalized by the largest), and the raw log weights.
struct AisResult {
  double log_z = 0.0;
  SampleSet samples;
  std::vector<double> log_weights;
};

AisResult ais_estimate(const PbmParams& params, int m, double step,
                       std::uint64_t seed);

}  // namespace smci
