#pragma once

// Internal Gray-code enumeration machinery shared by exact moments,
// conditional tables, region estimators and asymptotic variances. States are
// visited in Gray order (state(t) = t ^ (t >> 1)) so each step flips exactly
// one spin and energies update incrementally.

#include <bit>
#include <cstdint>
#include <vector>

#include "smci/errors.hpp"
#include "smci/model.hpp"

namespace smci::detail {

// Largest exponent range enumerated with plain products before switching to
// the log-domain path. Well inside exp()'s finite range so no intermediate
// can overflow or underflow.
inline constexpr double kProductRangeLimit = 600.0;

inline int flipped_bit(std::uint64_t t) { return std::countr_zero(t); }

// Structure of a region A inside a model: member list, edges internal to A
// (by bit position), couplings to the outside, and per-member base biases.
struct RegionSystem {
  struct InternalEdge {
    int a, b;  // bit positions in the member list
    double w;
  };
  struct ExternalLink {
    int vertex;  // neighbor outside A
    double w;
  };

  std::vector<int> members;  // sorted vertex ids
  std::vector<std::vector<std::pair<int, double>>> internal_adj;  // pos -> (pos, w)
  std::vector<InternalEdge> internal_edges;
  std::vector<std::vector<ExternalLink>> external;  // pos -> links
  std::vector<double> base_bias;                    // pos -> bias

  RegionSystem(const PbmParams& params, const Region& a, int cap);

  int size() const { return static_cast<int>(members.size()); }

  // Boundary fields for every member given outside spins read from x.
  void boundary_fields(const SpinConfig& x, std::vector<double>& beta) const {
    beta.resize(members.size());
    for (std::size_t p = 0; p < members.size(); ++p) {
      double b = base_bias[p];
      for (const ExternalLink& link : external[p])
        b += link.w * static_cast<double>(x[link.vertex]);
      beta[p] = b;
    }
  }
};

// Per-sample conditional expectation of f(x_t) under P(x_A | boundary).
// Construction precomputes the Gray walk over the internal-coupling part of
// the energy once; each rho() call then costs O(2^|A|) multiplications plus
// |A| exponentials. Falls back to a log-domain walk when the exponent range
// for a given sample is too wide for plain products.
class ConditionalEvaluator {
 public:
  ConditionalEvaluator(const PbmParams& params, const Region& t, const Region& a,
                       int cap);

  const Region& target() const { return target_; }
  const Region& region() const { return region_; }

  // fvals[p] = f on the target pattern p (bit q set means target member q is
  // +1). sample provides the boundary spins.
  double rho(const SpinConfig& sample, const std::vector<double>& fvals) const;

 private:
  double rho_log_domain(const std::vector<double>& beta,
                        const std::vector<double>& fvals) const;

  Region target_;
  Region region_;
  RegionSystem sys_;
  std::vector<std::uint32_t> pattern_flip_;  // pos -> xor mask on target pattern
  std::vector<double> cmult_;  // cmult_[t] = exp(C_t - C_{t-1}) along the walk
  double c0_ = 0.0;            // internal energy of the all -1 state
  double cmax_ = 0.0;
  double cmin_ = 0.0;
  bool products_ok_ = true;

  mutable std::vector<double> beta_;
  mutable std::vector<double> bexp_up_;
  mutable std::vector<double> bexp_down_;
};

// Evaluate f on every pattern of t (bit q of the pattern set means
// t.members()[q] is +1).
std::vector<double> tabulate_target_fn(
    const std::function<double(const SpinConfig&)>& f, const Region& t);

// Walks all 2^n states of the model in Gray order and calls
// visit(pattern, weight) with the normalized-by-max weight exp(E - Emax) and
// the current pattern of the tracked region. Returns the total weight. Used
// by the exact enumeration routines.
template <typename Visit>
double full_walk(const PbmParams& params, const Region& tracked, Visit&& visit) {
  const int n = params.num_vertices();
  std::vector<Spin> x(n, Spin{-1});
  std::vector<std::uint32_t> pat_flip(n, 0);
  for (int q = 0; q < tracked.size(); ++q)
    pat_flip[tracked.members()[q]] = 1u << q;

  double e0 = log_potential(params, x);
  // Pass 1: maximum energy.
  double e = e0;
  double emax = e;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t t = 1; t < total; ++t) {
    int b = flipped_bit(t);
    x[b] = static_cast<Spin>(-x[b]);
    e += 2.0 * static_cast<double>(x[b]) * local_field(params, b, x);
    if (e > emax) emax = e;
  }
  // Pass 2: visit every state. The walk ends where it started (all -1 state)
  // only for n = 1; rebuild the start state instead of assuming.
  std::fill(x.begin(), x.end(), Spin{-1});
  e = e0;
  std::uint32_t pattern = 0;
  double w = std::exp(e - emax);
  double total_w = w;
  visit(pattern, w);
  for (std::uint64_t t = 1; t < total; ++t) {
    int b = flipped_bit(t);
    x[b] = static_cast<Spin>(-x[b]);
    e += 2.0 * static_cast<double>(x[b]) * local_field(params, b, x);
    pattern ^= pat_flip[b];
    w = std::exp(e - emax);
    total_w += w;
    visit(pattern, w);
  }
  return total_w;
}

}  // namespace smci::detail
