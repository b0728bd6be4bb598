#include "smci/model.hpp"

#include <cmath>
#include <string>

#include "enumeration.hpp"
#include "smci/errors.hpp"

namespace smci {

SampleSet::SampleSet(int n_, std::vector<SpinConfig> points_,
                     std::vector<double> weights_)
    : n(n_), points(std::move(points_)), weights(std::move(weights_)) {
  if (n < 0) throw ArgumentError("sample dimension must be nonnegative");
  for (const SpinConfig& x : points) {
    if (static_cast<int>(x.size()) != n)
      throw ArgumentError("sample has " + std::to_string(x.size()) +
                          " spins, expected " + std::to_string(n));
    for (Spin s : x)
      if (s != 1 && s != -1)
        throw ArgumentError("spins must be +1 or -1");
  }
  if (!weights.empty()) {
    if (weights.size() != points.size())
      throw ArgumentError("weight count does not match sample count");
    for (double w : weights)
      if (!(w >= 0.0) || !std::isfinite(w))
        throw ArgumentError("weights must be finite and nonnegative");
  }
}

double SampleSet::total_weight() const {
  if (!weighted()) return static_cast<double>(points.size());
  double total = 0.0;
  for (double w : weights) total += w;
  return total;
}

PbmParams::PbmParams(PairwiseGraph g)
    : PbmParams(std::move(g), {}, {}) {}

PbmParams::PbmParams(PairwiseGraph g, std::vector<double> bias,
                     std::vector<double> coupling)
    : graph_(std::move(g)), bias_(std::move(bias)), coupling_(std::move(coupling)) {
  if (bias_.empty()) bias_.assign(graph_.num_vertices(), 0.0);
  if (coupling_.empty()) coupling_.assign(graph_.num_edges(), 0.0);
  if (static_cast<int>(bias_.size()) != graph_.num_vertices())
    throw ArgumentError("bias count does not match vertex count");
  if (static_cast<int>(coupling_.size()) != graph_.num_edges())
    throw ArgumentError("coupling count does not match edge count");
  adj_.resize(graph_.num_vertices());
  for (int e = 0; e < graph_.num_edges(); ++e) {
    const Edge& edge = graph_.edges()[e];
    adj_[edge.u].push_back({edge.v, e});
    adj_[edge.v].push_back({edge.u, e});
  }
}

double PbmParams::bias(int i) const {
  if (i < 0 || i >= num_vertices())
    throw ArgumentError("vertex " + std::to_string(i) + " out of range");
  return bias_[i];
}

void PbmParams::set_bias(int i, double value) {
  if (i < 0 || i >= num_vertices())
    throw ArgumentError("vertex " + std::to_string(i) + " out of range");
  bias_[i] = value;
}

double PbmParams::coupling(int i, int j) const {
  int e = graph_.edge_index(i, j);
  return e < 0 ? 0.0 : coupling_[e];
}

double PbmParams::coupling_at(int edge_idx) const {
  if (edge_idx < 0 || edge_idx >= graph_.num_edges())
    throw ArgumentError("edge index " + std::to_string(edge_idx) + " out of range");
  return coupling_[edge_idx];
}

void PbmParams::set_coupling_at(int edge_idx, double value) {
  if (edge_idx < 0 || edge_idx >= graph_.num_edges())
    throw ArgumentError("edge index " + std::to_string(edge_idx) + " out of range");
  coupling_[edge_idx] = value;
}

const std::vector<PbmParams::Nbr>& PbmParams::adjacency(int i) const {
  if (i < 0 || i >= num_vertices())
    throw ArgumentError("vertex " + std::to_string(i) + " out of range");
  return adj_[i];
}

namespace {

void check_config(const PbmParams& params, const SpinConfig& x) {
  if (static_cast<int>(x.size()) != params.num_vertices())
    throw ArgumentError("configuration has " + std::to_string(x.size()) +
                        " spins, expected " +
                        std::to_string(params.num_vertices()));
}

}  // namespace

double log_potential(const PbmParams& params, const SpinConfig& x) {
  check_config(params, x);
  double e = 0.0;
  const auto& bias = params.biases();
  for (int i = 0; i < params.num_vertices(); ++i)
    e += bias[i] * static_cast<double>(x[i]);
  const auto& edges = params.graph().edges();
  const auto& coupling = params.couplings();
  for (std::size_t k = 0; k < edges.size(); ++k)
    e += coupling[k] * static_cast<double>(x[edges[k].u]) *
         static_cast<double>(x[edges[k].v]);
  return e;
}

double local_field(const PbmParams& params, int i, const SpinConfig& x) {
  check_config(params, x);
  double field = params.bias(i);
  for (const PbmParams::Nbr& nb : params.adjacency(i))
    field += params.coupling_at(nb.edge) * static_cast<double>(x[nb.vertex]);
  return field;
}

double cavity_field(const PbmParams& params, int i, int j, const SpinConfig& x) {
  double field = local_field(params, i, x);
  int e = params.graph().edge_index(i, j);
  if (e >= 0) field -= params.coupling_at(e) * static_cast<double>(x[j]);
  return field;
}

double boundary_field(const PbmParams& params, int i, const Region& a,
                      const SpinConfig& x) {
  check_config(params, x);
  if (!a.contains(i))
    throw ArgumentError("vertex " + std::to_string(i) + " is not in the region");
  double field = params.bias(i);
  for (const PbmParams::Nbr& nb : params.adjacency(i))
    if (!a.contains(nb.vertex))
      field += params.coupling_at(nb.edge) * static_cast<double>(x[nb.vertex]);
  return field;
}

ConditionalTable conditional_on_region(const PbmParams& params, const Region& region,
                                       const SpinConfig& boundary_values, int cap) {
  check_config(params, boundary_values);
  detail::RegionSystem sys(params, region, cap);
  const int k = sys.size();
  std::vector<double> beta;
  sys.boundary_fields(boundary_values, beta);

  // Energies for every internal state, filled along a Gray walk.
  const std::uint64_t total = std::uint64_t{1} << k;
  std::vector<double> table(total);
  std::vector<Spin> s(k, Spin{-1});
  double e = 0.0;
  for (const auto& edge : sys.internal_edges) e += edge.w;
  for (double b : beta) e -= b;
  std::uint64_t mask = 0;
  table[0] = e;
  double emax = e;
  for (std::uint64_t t = 1; t < total; ++t) {
    int b = detail::flipped_bit(t);
    s[b] = static_cast<Spin>(-s[b]);
    mask ^= std::uint64_t{1} << b;
    double de = beta[b];
    for (const auto& [q, w] : sys.internal_adj[b])
      de += w * static_cast<double>(s[q]);
    e += 2.0 * static_cast<double>(s[b]) * de;
    table[mask] = e;
    if (e > emax) emax = e;
  }
  double norm = 0.0;
  for (double& v : table) {
    v = std::exp(v - emax);
    norm += v;
  }
  for (double& v : table) v /= norm;

  ConditionalTable out;
  out.region = region;
  out.prob = std::move(table);
  out.log_norm = emax + std::log(norm);
  return out;
}

namespace {

void check_exact_cap(const PbmParams& params, int cap) {
  if (params.num_vertices() > cap)
    throw CapacityError("model has " + std::to_string(params.num_vertices()) +
                        " vertices, exceeds enumeration cap " +
                        std::to_string(cap));
  if (params.num_vertices() < 1)
    throw ArgumentError("model must have at least one vertex");
}

}  // namespace

double exact_expectation(const PbmParams& params,
                         const std::function<double(const SpinConfig&)>& f,
                         const Region& t, int cap) {
  check_exact_cap(params, cap);
  if (t.empty()) throw ArgumentError("target region must be nonempty");
  for (int v : t)
    if (v < 0 || v >= params.num_vertices())
      throw ArgumentError("target vertex " + std::to_string(v) + " out of range");
  std::vector<double> fvals = detail::tabulate_target_fn(f, t);
  double acc = 0.0;
  double total = detail::full_walk(params, t, [&](std::uint32_t pattern, double w) {
    acc += fvals[pattern] * w;
  });
  return acc / total;
}

Moments exact_moments(const PbmParams& params, int cap) {
  check_exact_cap(params, cap);
  const int n = params.num_vertices();
  const auto& edges = params.graph().edges();
  const int ne = static_cast<int>(edges.size());
  const auto& bias = params.biases();
  const auto& coupling = params.couplings();

  std::vector<Spin> x(n, Spin{-1});
  double e0 = log_potential(params, x);

  // Pass 1: maximum energy, updating incrementally per Gray flip.
  double e = e0;
  double emax = e;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t t = 1; t < total; ++t) {
    int b = detail::flipped_bit(t);
    x[b] = static_cast<Spin>(-x[b]);
    double de = bias[b];
    for (const PbmParams::Nbr& nb : params.adjacency(b))
      de += coupling[nb.edge] * static_cast<double>(x[nb.vertex]);
    e += 2.0 * static_cast<double>(x[b]) * de;
    if (e > emax) emax = e;
  }

  // Pass 2: accumulate the weight of the x_i = +1 states per vertex and of
  // the x_i x_j = +1 states per edge. Instead of touching every vertex at
  // every state, close out a running segment of the cumulative weight each
  // time a sign flips.
  std::fill(x.begin(), x.end(), Spin{-1});
  e = e0;
  double cum = std::exp(e - emax);
  std::vector<double> vert_acc(n, 0.0), vert_mark(n, 0.0);
  std::vector<double> edge_acc(ne, 0.0), edge_mark(ne, 0.0);
  std::vector<Spin> edge_sign(ne);
  for (int k = 0; k < ne; ++k)
    edge_sign[k] = static_cast<Spin>(x[edges[k].u] * x[edges[k].v]);

  for (std::uint64_t t = 1; t < total; ++t) {
    int b = detail::flipped_bit(t);
    // Close segments that end at this flip (weights accumulated so far).
    if (x[b] > 0) vert_acc[b] += cum - vert_mark[b];
    vert_mark[b] = cum;
    for (const PbmParams::Nbr& nb : params.adjacency(b)) {
      if (edge_sign[nb.edge] > 0) edge_acc[nb.edge] += cum - edge_mark[nb.edge];
      edge_mark[nb.edge] = cum;
      edge_sign[nb.edge] = static_cast<Spin>(-edge_sign[nb.edge]);
    }
    x[b] = static_cast<Spin>(-x[b]);
    double de = bias[b];
    for (const PbmParams::Nbr& nb : params.adjacency(b))
      de += coupling[nb.edge] * static_cast<double>(x[nb.vertex]);
    e += 2.0 * static_cast<double>(x[b]) * de;
    cum += std::exp(e - emax);
  }
  for (int i = 0; i < n; ++i)
    if (x[i] > 0) vert_acc[i] += cum - vert_mark[i];
  for (int k = 0; k < ne; ++k)
    if (edge_sign[k] > 0) edge_acc[k] += cum - edge_mark[k];

  Moments m;
  m.mean.resize(n);
  m.pair.resize(ne);
  for (int i = 0; i < n; ++i) m.mean[i] = 2.0 * vert_acc[i] / cum - 1.0;
  for (int k = 0; k < ne; ++k) m.pair[k] = 2.0 * edge_acc[k] / cum - 1.0;
  return m;
}

std::vector<double> covariances_from_moments(const PairwiseGraph& g,
                                             const Moments& m) {
  if (static_cast<int>(m.mean.size()) != g.num_vertices() ||
      static_cast<int>(m.pair.size()) != g.num_edges())
    throw ArgumentError("moment table does not match the graph");
  std::vector<double> chi(g.num_edges());
  for (int k = 0; k < g.num_edges(); ++k) {
    const Edge& e = g.edges()[k];
    chi[k] = m.pair[k] - m.mean[e.u] * m.mean[e.v];
  }
  return chi;
}

double log_partition(const PbmParams& params, int cap) {
  check_exact_cap(params, cap);
  const int n = params.num_vertices();
  std::vector<Spin> x(n, Spin{-1});
  double e = log_potential(params, x);
  double emax = e;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t t = 1; t < total; ++t) {
    int b = detail::flipped_bit(t);
    x[b] = static_cast<Spin>(-x[b]);
    e += 2.0 * static_cast<double>(x[b]) * local_field(params, b, x);
    if (e > emax) emax = e;
  }
  std::fill(x.begin(), x.end(), Spin{-1});
  e = log_potential(params, x);
  double sum = std::exp(e - emax);
  for (std::uint64_t t = 1; t < total; ++t) {
    int b = detail::flipped_bit(t);
    x[b] = static_cast<Spin>(-x[b]);
    e += 2.0 * static_cast<double>(x[b]) * local_field(params, b, x);
    sum += std::exp(e - emax);
  }
  return emax + std::log(sum);
}

}  // namespace smci
