#include "smci/sampling.hpp"

#include <cmath>
#include <string>

#include "smci/errors.hpp"

namespace smci {

AnnealSchedule AnnealSchedule::linear(int ramp, int equil) {
  if (ramp < 1) throw ArgumentError("ramp must run at least one sweep");
  if (equil < 0) throw ArgumentError("equilibration sweeps must be nonnegative");
  AnnealSchedule s;
  s.betas.reserve(ramp + equil);
  for (int k = 1; k <= ramp; ++k)
    s.betas.push_back(static_cast<double>(k) / static_cast<double>(ramp));
  for (int k = 0; k < equil; ++k) s.betas.push_back(1.0);
  s.sweeps_per_beta = 1;
  return s;
}

void gibbs_sweep(const PbmParams& params, SpinConfig& x, double beta,
                 RandomStream& rng) {
  if (static_cast<int>(x.size()) != params.num_vertices())
    throw ArgumentError("configuration size does not match the model");
  const auto& bias = params.biases();
  const auto& coupling = params.couplings();
  for (int i = 0; i < params.num_vertices(); ++i) {
    double field = bias[i];
    for (const PbmParams::Nbr& nb : params.adjacency(i))
      field += coupling[nb.edge] * static_cast<double>(x[nb.vertex]);
    double p_up = 1.0 / (1.0 + std::exp(-2.0 * beta * field));
    x[i] = rng.u01() < p_up ? Spin{1} : Spin{-1};
  }
}

SpinConfig random_config(int n, RandomStream& rng) {
  SpinConfig x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.spin();
  return x;
}

SampleSet draw_sample_set(const PbmParams& params, int m,
                          const AnnealSchedule& schedule, std::uint64_t seed) {
  if (m < 1) throw ArgumentError("sample count must be positive");
  if (schedule.betas.empty()) throw ArgumentError("anneal schedule is empty");
  if (schedule.sweeps_per_beta < 1)
    throw ArgumentError("sweeps per beta must be positive");
  const int n = params.num_vertices();
  std::vector<SpinConfig> points;
  points.reserve(m);
  for (int l = 0; l < m; ++l) {
    RandomStream rng(derive_seed(seed, {kSeedTagChain, static_cast<std::uint64_t>(l)}));
    SpinConfig x = random_config(n, rng);
    for (double beta : schedule.betas)
      for (int r = 0; r < schedule.sweeps_per_beta; ++r)
        gibbs_sweep(params, x, beta, rng);
    points.push_back(std::move(x));
  }
  return SampleSet(n, std::move(points));
}

ChainState ChainState::init(const SampleSet& start, std::uint64_t seed) {
  if (start.weighted())
    throw ArgumentError("persistent chains require unweighted start points");
  if (start.size() < 1) throw ArgumentError("persistent chains need at least one start point");
  ChainState state;
  state.configs = start.points;
  state.streams.reserve(start.size());
  for (int l = 0; l < start.size(); ++l)
    state.streams.emplace_back(
        derive_seed(seed, {kSeedTagChain, static_cast<std::uint64_t>(l)}));
  return state;
}

SampleSet ChainState::as_sample_set(int n) const {
  return SampleSet(n, configs);
}

void persistent_update(const PbmParams& params, ChainState& chains, int kappa) {
  if (kappa < 1) throw ArgumentError("chain update count must be positive");
  if (chains.configs.size() != chains.streams.size())
    throw ArgumentError("chain state is inconsistent");
  for (std::size_t l = 0; l < chains.configs.size(); ++l)
    for (int r = 0; r < kappa; ++r)
      gibbs_sweep(params, chains.configs[l], 1.0, chains.streams[l]);
}

AisResult ais_estimate(const PbmParams& params, int m, double step,
                       std::uint64_t seed) {
  if (m < 1) throw ArgumentError("chain count must be positive");
  if (!(step > 0.0) || step > 1.0)
    throw ArgumentError("ladder step must be in (0, 1]");
  const int n = params.num_vertices();
  // Rung count: smallest k with k * step covering 1; the last rung is
  // clipped to beta = 1 exactly.
  const std::uint64_t rungs =
      static_cast<std::uint64_t>(std::ceil((1.0 - 1e-12) / step));

  std::vector<SpinConfig> points;
  points.reserve(m);
  std::vector<double> log_weights(m, 0.0);
  for (int l = 0; l < m; ++l) {
    RandomStream rng(derive_seed(seed, {kSeedTagChain, static_cast<std::uint64_t>(l)}));
    SpinConfig x = random_config(n, rng);
    double logw = 0.0;
    double beta_prev = 0.0;
    for (std::uint64_t k = 1; k <= rungs; ++k) {
      double beta = k == rungs ? 1.0 : std::min(1.0, static_cast<double>(k) * step);
      logw += (beta - beta_prev) * log_potential(params, x);
      gibbs_sweep(params, x, beta, rng);
      beta_prev = beta;
    }
    log_weights[l] = logw;
    points.push_back(std::move(x));
  }

  double lmax = log_weights[0];
  for (double lw : log_weights) lmax = std::max(lmax, lw);
  double sum = 0.0;
  std::vector<double> weights(m);
  for (int l = 0; l < m; ++l) {
    weights[l] = std::exp(log_weights[l] - lmax);
    sum += weights[l];
  }

  AisResult out;
  out.log_z = static_cast<double>(n) * std::log(2.0) + lmax + std::log(sum) -
              std::log(static_cast<double>(m));
  out.samples = SampleSet(n, std::move(points), std::move(weights));
  out.log_weights = std::move(log_weights);
  return out;
}

}  // namespace smci
