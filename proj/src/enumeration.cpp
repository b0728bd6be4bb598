#include "enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smci::detail {

RegionSystem::RegionSystem(const PbmParams& params, const Region& a, int cap) {
  if (a.empty()) throw ArgumentError("region must be nonempty");
  if (a.size() > cap)
    throw CapacityError("sum region has " + std::to_string(a.size()) +
                        " members, exceeds enumeration cap " + std::to_string(cap));
  const PairwiseGraph& g = params.graph();
  for (int v : a)
    if (v < 0 || v >= g.num_vertices())
      throw ArgumentError("region contains vertex " + std::to_string(v) +
                          " out of range for n=" +
                          std::to_string(g.num_vertices()));
  members = a.members();
  const int k = size();
  std::vector<int> pos(g.num_vertices(), -1);
  for (int p = 0; p < k; ++p) pos[members[p]] = p;

  internal_adj.resize(k);
  external.resize(k);
  base_bias.resize(k);
  for (int p = 0; p < k; ++p) {
    int v = members[p];
    base_bias[p] = params.bias(v);
    for (const PbmParams::Nbr& nb : params.adjacency(v)) {
      double w = params.coupling_at(nb.edge);
      if (pos[nb.vertex] >= 0) {
        internal_adj[p].push_back({pos[nb.vertex], w});
        if (v < nb.vertex) internal_edges.push_back({p, pos[nb.vertex], w});
      } else {
        external[p].push_back({nb.vertex, w});
      }
    }
  }
}

ConditionalEvaluator::ConditionalEvaluator(const PbmParams& params, const Region& t,
                                           const Region& a, int cap)
    : target_(t), region_(a), sys_(params, a, cap) {
  if (t.empty()) throw ArgumentError("target region must be nonempty");
  if (!t.is_subset_of(a))
    throw ArgumentError("target region must be a subset of the sum region");
  const int k = sys_.size();

  pattern_flip_.assign(k, 0);
  for (int q = 0; q < t.size(); ++q) {
    auto it = std::lower_bound(sys_.members.begin(), sys_.members.end(),
                               t.members()[q]);
    pattern_flip_[it - sys_.members.begin()] = 1u << q;
  }

  // Walk the internal-coupling energy C once, recording per-step ratios.
  std::vector<Spin> s(k, Spin{-1});
  double c = 0.0;
  for (const RegionSystem::InternalEdge& e : sys_.internal_edges) c += e.w;
  c0_ = c;
  cmax_ = c;
  cmin_ = c;
  const std::uint64_t total = std::uint64_t{1} << k;
  std::vector<double> cvals;
  cvals.reserve(total);
  cvals.push_back(c);
  for (std::uint64_t t2 = 1; t2 < total; ++t2) {
    int b = flipped_bit(t2);
    s[b] = static_cast<Spin>(-s[b]);
    double dc = 0.0;
    for (const auto& [q, w] : sys_.internal_adj[b])
      dc += w * static_cast<double>(s[q]);
    dc *= 2.0 * static_cast<double>(s[b]);
    c += dc;
    cvals.push_back(c);
    if (c > cmax_) cmax_ = c;
    if (c < cmin_) cmin_ = c;
  }
  products_ok_ = (cmax_ - cmin_) <= kProductRangeLimit;
  if (products_ok_) {
    cmult_.resize(total);
    cmult_[0] = 1.0;
    for (std::uint64_t t2 = 1; t2 < total; ++t2)
      cmult_[t2] = std::exp(cvals[t2] - cvals[t2 - 1]);
  }
}

double ConditionalEvaluator::rho(const SpinConfig& sample,
                                 const std::vector<double>& fvals) const {
  const int k = sys_.size();
  sys_.boundary_fields(sample, beta_);
  double sum_abs_beta = 0.0;
  for (double b : beta_) sum_abs_beta += std::abs(b);
  if (!products_ok_ ||
      (cmax_ - cmin_) + 2.0 * sum_abs_beta > kProductRangeLimit)
    return rho_log_domain(beta_, fvals);

  bexp_up_.resize(k);
  bexp_down_.resize(k);
  double sum_beta = 0.0;
  for (int p = 0; p < k; ++p) {
    bexp_up_[p] = std::exp(2.0 * beta_[p]);
    bexp_down_[p] = 1.0 / bexp_up_[p];
    sum_beta += beta_[p];
  }
  // Weights are exp(E - bound) with bound an upper bound on E, so every
  // weight and every per-step ratio stays inside the finite double range.
  const double bound = cmax_ + sum_abs_beta;
  double w = std::exp(c0_ - sum_beta - bound);
  double total_w = w;
  double acc = fvals[0] * w;
  std::uint64_t mask = 0;
  std::uint32_t pattern = 0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t t = 1; t < total; ++t) {
    int b = flipped_bit(t);
    mask ^= std::uint64_t{1} << b;
    bool up = (mask >> b) & 1;
    w *= cmult_[t] * (up ? bexp_up_[b] : bexp_down_[b]);
    pattern ^= pattern_flip_[b];
    total_w += w;
    acc += fvals[pattern] * w;
  }
  return acc / total_w;
}

double ConditionalEvaluator::rho_log_domain(const std::vector<double>& beta,
                                            const std::vector<double>& fvals) const {
  const int k = sys_.size();
  std::vector<Spin> s(k, Spin{-1});
  double e = c0_;
  for (double b : beta) e -= b;
  // Streaming log-sum-exp: rescale both accumulators whenever a new maximum
  // energy appears.
  double emax = e;
  double total_w = 1.0;
  double acc = fvals[0];
  std::uint32_t pattern = 0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t t = 1; t < total; ++t) {
    int b = flipped_bit(t);
    s[b] = static_cast<Spin>(-s[b]);
    double de = beta[b];
    for (const auto& [q, w] : sys_.internal_adj[b])
      de += w * static_cast<double>(s[q]);
    e += 2.0 * static_cast<double>(s[b]) * de;
    pattern ^= pattern_flip_[b];
    if (e <= emax) {
      double w = std::exp(e - emax);
      total_w += w;
      acc += fvals[pattern] * w;
    } else {
      double r = std::exp(emax - e);
      total_w = total_w * r + 1.0;
      acc = acc * r + fvals[pattern];
      emax = e;
    }
  }
  return acc / total_w;
}

std::vector<double> tabulate_target_fn(
    const std::function<double(const SpinConfig&)>& f, const Region& t) {
  if (!f) throw ArgumentError("target function must be callable");
  if (t.size() > 26) throw CapacityError("target region too large to tabulate");
  const std::uint32_t total = std::uint32_t{1} << t.size();
  std::vector<double> vals(total);
  SpinConfig xt(t.size());
  for (std::uint32_t p = 0; p < total; ++p) {
    for (int q = 0; q < t.size(); ++q)
      xt[q] = (p >> q) & 1 ? Spin{1} : Spin{-1};
    vals[p] = f(xt);
  }
  return vals;
}

}  // namespace smci::detail
