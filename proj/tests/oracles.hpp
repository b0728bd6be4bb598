#pragma once

// Reference implementations used only by tests: written as plain loops over
// full configurations so they share no machinery with the library paths they
// check. All are exponential and meant for small instances.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "smci/estimators.hpp"
#include "smci/model.hpp"

namespace testutil {

using smci::PairwiseGraph;
using smci::PbmParams;
using smci::Region;
using smci::SampleSet;
using smci::Spin;
using smci::SpinConfig;

inline double direct_energy(const PbmParams& p, const SpinConfig& x) {
  double e = 0.0;
  for (int i = 0; i < p.num_vertices(); ++i)
    e += p.bias(i) * static_cast<double>(x[i]);
  for (int k = 0; k < p.graph().num_edges(); ++k) {
    const smci::Edge& ed = p.graph().edges()[k];
    e += p.coupling_at(k) * static_cast<double>(x[ed.u]) *
         static_cast<double>(x[ed.v]);
  }
  return e;
}

inline SpinConfig config_from_mask(int n, std::uint64_t mask) {
  SpinConfig x(n);
  for (int i = 0; i < n; ++i) x[i] = (mask >> i) & 1 ? Spin{1} : Spin{-1};
  return x;
}

// Full-model expectation of f(x_t) by plain enumeration in binary order.
inline double naive_expectation(const PbmParams& p,
                                const std::function<double(const SpinConfig&)>& f,
                                const Region& t) {
  const int n = p.num_vertices();
  std::vector<double> energies;
  energies.reserve(std::size_t{1} << n);
  double emax = -1e300;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double e = direct_energy(p, config_from_mask(n, mask));
    energies.push_back(e);
    emax = std::max(emax, e);
  }
  double num = 0.0, den = 0.0;
  SpinConfig xt(t.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    SpinConfig x = config_from_mask(n, mask);
    for (int q = 0; q < t.size(); ++q) xt[q] = x[t.members()[q]];
    double w = std::exp(energies[mask] - emax);
    num += f(xt) * w;
    den += w;
  }
  return num / den;
}

// Conditional expectation of f(x_t) over the spins of `a` given the other
// spins frozen to `outside`, by plain enumeration of the region states.
inline double naive_region_expectation(
    const PbmParams& p, const std::function<double(const SpinConfig&)>& f,
    const Region& t, const Region& a, const SpinConfig& outside) {
  const int k = a.size();
  std::vector<double> energies;
  energies.reserve(std::size_t{1} << k);
  double emax = -1e300;
  SpinConfig x = outside;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    for (int q = 0; q < k; ++q)
      x[a.members()[q]] = (mask >> q) & 1 ? Spin{1} : Spin{-1};
    double e = direct_energy(p, x);
    energies.push_back(e);
    emax = std::max(emax, e);
  }
  double num = 0.0, den = 0.0;
  SpinConfig xt(t.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    for (int q = 0; q < k; ++q)
      x[a.members()[q]] = (mask >> q) & 1 ? Spin{1} : Spin{-1};
    for (int q = 0; q < t.size(); ++q) xt[q] = x[t.members()[q]];
    double w = std::exp(energies[mask] - emax);
    num += f(xt) * w;
    den += w;
  }
  return num / den;
}

// Sample average of the conditional expectations above.
inline double naive_region_estimate(
    const PbmParams& p, const std::function<double(const SpinConfig&)>& f,
    const Region& t, const Region& a, const SampleSet& s) {
  double num = 0.0, den = 0.0;
  for (int l = 0; l < s.size(); ++l) {
    num += s.weight(l) * naive_region_expectation(p, f, t, a, s.points[l]);
    den += s.weight(l);
  }
  return num / den;
}

inline bool is_independent_in(const PairwiseGraph& g, const Region& set) {
  for (int u : set)
    for (int v : set)
      if (u < v && g.has_edge(u, v)) return false;
  return true;
}

// True when every candidate is either in the set or adjacent to a member.
inline bool is_maximal_in(const PairwiseGraph& g, const Region& candidates,
                          const Region& set) {
  for (int v : candidates) {
    if (set.contains(v)) continue;
    bool covered = false;
    for (int nb : g.neighbors(v))
      if (set.contains(nb)) covered = true;
    if (!covered) return false;
  }
  return true;
}

// Size of the largest independent subset of candidates, by subset scan.
inline int exhaustive_max_independent(const PairwiseGraph& g,
                                      const Region& candidates) {
  const int k = candidates.size();
  int best = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<int> sel;
    for (int q = 0; q < k; ++q)
      if ((mask >> q) & 1) sel.push_back(candidates.members()[q]);
    if (is_independent_in(g, Region(sel)))
      best = std::max(best, static_cast<int>(sel.size()));
  }
  return best;
}

// Exact sample set: every configuration of the model once, weighted by its
// probability. Estimator consistency checks use it to remove sampling noise.
inline SampleSet exhaustive_weighted_samples(const PbmParams& p) {
  const int n = p.num_vertices();
  std::vector<SpinConfig> points;
  std::vector<double> energies;
  double emax = -1e300;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    points.push_back(config_from_mask(n, mask));
    energies.push_back(direct_energy(p, points.back()));
    emax = std::max(emax, energies.back());
  }
  std::vector<double> weights(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i)
    weights[i] = std::exp(energies[i] - emax);
  return SampleSet(n, std::move(points), std::move(weights));
}

}  // namespace testutil
