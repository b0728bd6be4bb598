#include "smci/estimators.hpp"

#include <atomic>
#include <cmath>
#include <string>

#include "enumeration.hpp"
#include "parse_util.hpp"
#include "smci/errors.hpp"

namespace smci {

namespace {

std::atomic<std::uint64_t> g_clamp_hits{0};

double safe_atanh(double v) {
  if (v > kTanhClampLimit) {
    v = kTanhClampLimit;
    g_clamp_hits.fetch_add(1, std::memory_order_relaxed);
  } else if (v < -kTanhClampLimit) {
    v = -kTanhClampLimit;
    g_clamp_hits.fetch_add(1, std::memory_order_relaxed);
  }
  return std::atanh(v);
}

// log(1 - p) for p a product of squared tanh values; clamps p below 1.
double log1m_sq(double p) {
  if (p > kTanhClampLimit) {
    p = kTanhClampLimit;
    g_clamp_hits.fetch_add(1, std::memory_order_relaxed);
  }
  return std::log1p(-p);
}

// tanh(a + b) from tanh(a) and tanh(b).
double tanh_add(double ta, double tb) { return (ta + tb) / (1.0 + ta * tb); }

void check_samples(const PbmParams& params, const SampleSet& s) {
  if (s.size() < 1) throw ArgumentError("sample set is empty");
  if (s.n != params.num_vertices())
    throw ArgumentError("sample set dimension " + std::to_string(s.n) +
                        " does not match model with " +
                        std::to_string(params.num_vertices()) + " vertices");
}

template <typename PerSample>
double weighted_average(const SampleSet& s, PerSample&& per) {
  double num = 0.0;
  double den = 0.0;
  for (int l = 0; l < s.size(); ++l) {
    double w = s.weight(l);
    if (w == 0.0) continue;
    num += w * per(s.points[l]);
    den += w;
  }
  if (!(den > 0.0)) throw ArgumentError("total sample weight must be positive");
  return num / den;
}

void check_target(const PbmParams& params, const Region& t) {
  if (t.empty()) throw ArgumentError("target region must be nonempty");
  for (int v : t)
    if (v < 0 || v >= params.num_vertices())
      throw ArgumentError("target vertex " + std::to_string(v) + " out of range");
}

void check_vertex_pair(const PbmParams& params, int i, int j) {
  if (i < 0 || i >= params.num_vertices() || j < 0 || j >= params.num_vertices())
    throw ArgumentError("vertex out of range");
  if (i == j) throw ArgumentError("pair estimator needs two distinct vertices");
}

}  // namespace

std::uint64_t clamp_hit_count() { return g_clamp_hits.load(std::memory_order_relaxed); }
void reset_clamp_hits() { g_clamp_hits.store(0, std::memory_order_relaxed); }

double mci_estimate(const TargetFn& f, const Region& t, const SampleSet& s) {
  if (!f) throw ArgumentError("target function must be callable");
  if (t.empty()) throw ArgumentError("target region must be nonempty");
  if (s.size() < 1) throw ArgumentError("sample set is empty");
  for (int v : t)
    if (v < 0 || v >= s.n)
      throw ArgumentError("target vertex " + std::to_string(v) + " out of range");
  SpinConfig xt(t.size());
  return weighted_average(s, [&](const SpinConfig& x) {
    for (int q = 0; q < t.size(); ++q) xt[q] = x[t.members()[q]];
    return f(xt);
  });
}

double gsmci_estimate(const PbmParams& params, const TargetFn& f, const Region& t,
                      const Region& a, const SampleSet& s, int cap) {
  check_target(params, t);
  check_samples(params, s);
  detail::ConditionalEvaluator ev(params, t, a, cap);
  std::vector<double> fvals = detail::tabulate_target_fn(f, t);
  return weighted_average(
      s, [&](const SpinConfig& x) { return ev.rho(x, fvals); });
}

double ksmci_estimate(const PbmParams& params, const TargetFn& f, const Region& t,
                      int k, const SampleSet& s, int cap) {
  if (k < 1) throw ArgumentError("estimator order must be at least 1");
  check_target(params, t);
  Region a = closed_region_k(params.graph(), t, k - 1);
  return gsmci_estimate(params, f, t, a, s, cap);
}

double smci1_mean(const PbmParams& params, int i, const SampleSet& s) {
  if (i < 0 || i >= params.num_vertices())
    throw ArgumentError("vertex out of range");
  check_samples(params, s);
  return weighted_average(s, [&](const SpinConfig& x) {
    return std::tanh(local_field(params, i, x));
  });
}

double smci1_pair(const PbmParams& params, int i, int j, const SampleSet& s) {
  check_vertex_pair(params, i, j);
  check_samples(params, s);
  const double w_ij = params.coupling(i, j);
  return weighted_average(s, [&](const SpinConfig& x) {
    double tij = std::tanh(cavity_field(params, i, j, x));
    double tji = std::tanh(cavity_field(params, j, i, x));
    return std::tanh(safe_atanh(tij * tji) + w_ij);
  });
}

Region s2_region(const PbmParams& params, const Region& t) {
  const PairwiseGraph& g = params.graph();
  Region shell = neighborhood_k(g, t, 1);
  if (shell.empty()) return t;
  // Tie weight: total coupling magnitude from the candidate into the target.
  auto weight = [&](int j) {
    double w = 0.0;
    for (const PbmParams::Nbr& nb : params.adjacency(j))
      if (t.contains(nb.vertex)) w += std::abs(params.coupling_at(nb.edge));
    return w;
  };
  Region chosen = greedy_independent_set(g, shell, weight);
  return t.unioned(chosen);
}

namespace {

// Members of a outside t, checked to be pairwise nonadjacent.
std::vector<int> independent_rest(const PbmParams& params, const Region& a,
                                  const Region& t) {
  if (!t.is_subset_of(a))
    throw ArgumentError("target region must be a subset of the sum region");
  Region rest = a.difference(t);
  for (int u : rest)
    for (const PbmParams::Nbr& nb : params.adjacency(u))
      if (nb.vertex > u && rest.contains(nb.vertex))
        throw ArgumentError("sum region minus target must be an independent set");
  return rest.members();
}

}  // namespace

double s2_mean(const PbmParams& params, int i, const Region& a, const SampleSet& s) {
  if (i < 0 || i >= params.num_vertices())
    throw ArgumentError("vertex out of range");
  check_samples(params, s);
  std::vector<int> rest = independent_rest(params, a, Region::single(i));
  std::vector<double> tw(rest.size());
  for (std::size_t q = 0; q < rest.size(); ++q)
    tw[q] = std::tanh(params.coupling(i, rest[q]));
  return weighted_average(s, [&](const SpinConfig& x) {
    double xi = boundary_field(params, i, a, x);
    for (std::size_t q = 0; q < rest.size(); ++q) {
      double tb = std::tanh(boundary_field(params, rest[q], a, x));
      xi += safe_atanh(tb * tw[q]);
    }
    return std::tanh(xi);
  });
}

double s2_pair(const PbmParams& params, int i, int j, const Region& a,
               const SampleSet& s) {
  check_vertex_pair(params, i, j);
  check_samples(params, s);
  std::vector<int> rest = independent_rest(params, a, Region({i, j}));
  const double w_ij = params.coupling(i, j);

  struct SideConst {
    double tw_i;   // tanh(coupling to i)
    double tw_j2;  // tanh^2(coupling to j)
  };
  // Per member k of the independent rest: constants for the i side, the j
  // side, and the coupling correction shared by both orders.
  std::vector<SideConst> side_i(rest.size()), side_j(rest.size());
  std::vector<double> at_pair(rest.size()), t2_sum(rest.size()), t2_dif(rest.size());
  for (std::size_t q = 0; q < rest.size(); ++q) {
    double w_ik = params.coupling(i, rest[q]);
    double w_jk = params.coupling(j, rest[q]);
    double twi = std::tanh(w_ik);
    double twj = std::tanh(w_jk);
    side_i[q] = {twi, twj * twj};
    side_j[q] = {twj, twi * twi};
    at_pair[q] = safe_atanh(twi * twj);
    double ts = std::tanh(w_ik + w_jk);
    double td = std::tanh(w_ik - w_jk);
    t2_sum[q] = ts * ts;
    t2_dif[q] = td * td;
  }

  // One side of the pair form: the effective field at `i` after summing out
  // every rest member, given tanh of the rest member's boundary field.
  auto side_term = [&](const SideConst& c, double tb) {
    double plus = tanh_add(tb, c.tw_i);
    double minus = tanh_add(tb, -c.tw_i);
    return safe_atanh(tb * c.tw_i) +
           0.25 * (log1m_sq(plus * plus * c.tw_j2) -
                   log1m_sq(minus * minus * c.tw_j2));
  };

  return weighted_average(s, [&](const SpinConfig& x) {
    double xi_ij = boundary_field(params, i, a, x);
    double xi_ji = boundary_field(params, j, a, x);
    double omega = w_ij;
    for (std::size_t q = 0; q < rest.size(); ++q) {
      double tb = std::tanh(boundary_field(params, rest[q], a, x));
      xi_ij += side_term(side_i[q], tb);
      xi_ji += side_term(side_j[q], tb);
      double tb2 = tb * tb;
      omega += at_pair[q] +
               0.25 * (log1m_sq(t2_sum[q] * tb2) - log1m_sq(t2_dif[q] * tb2));
    }
    double t1 = std::tanh(xi_ij);
    double t2 = std::tanh(xi_ji);
    return std::tanh(safe_atanh(t1 * t2) + omega);
  });
}

double asymptotic_variance(const PbmParams& params, const TargetFn& f,
                           const Region& t, const Region& a, int cap) {
  const int n = params.num_vertices();
  if (n > cap)
    throw CapacityError("model has " + std::to_string(n) +
                        " vertices, exceeds enumeration cap " + std::to_string(cap));
  check_target(params, t);
  detail::ConditionalEvaluator ev(params, t, a, cap);
  std::vector<double> fvals = detail::tabulate_target_fn(f, t);
  Region edge_of_a = boundary(params.graph(), a);
  if (edge_of_a.empty()) return 0.0;

  std::vector<double> marg(std::size_t{1} << edge_of_a.size(), 0.0);
  double total = detail::full_walk(
      params, edge_of_a,
      [&](std::uint32_t pattern, double w) { marg[pattern] += w; });

  SpinConfig cfg(n, Spin{-1});
  double acc1 = 0.0;
  double acc2 = 0.0;
  for (std::size_t p = 0; p < marg.size(); ++p) {
    if (marg[p] <= 0.0) continue;
    for (int q = 0; q < edge_of_a.size(); ++q)
      cfg[edge_of_a.members()[q]] = (p >> q) & 1 ? Spin{1} : Spin{-1};
    double rho = ev.rho(cfg, fvals);
    double mass = marg[p] / total;
    acc1 += mass * rho;
    acc2 += mass * rho * rho;
  }
  return acc2 - acc1 * acc1;
}

double mci_asymptotic_variance(const PbmParams& params, const TargetFn& f,
                               const Region& t, int cap) {
  check_target(params, t);
  if (params.num_vertices() > cap)
    throw CapacityError("model has " + std::to_string(params.num_vertices()) +
                        " vertices, exceeds enumeration cap " + std::to_string(cap));
  std::vector<double> fvals = detail::tabulate_target_fn(f, t);
  double acc1 = 0.0;
  double acc2 = 0.0;
  double total = detail::full_walk(params, t, [&](std::uint32_t pattern, double w) {
    acc1 += fvals[pattern] * w;
    acc2 += fvals[pattern] * fvals[pattern] * w;
  });
  acc1 /= total;
  acc2 /= total;
  return acc2 - acc1 * acc1;
}

namespace {

// One pass over the samples computing every mean and every edge pair moment
// with the plain or order-1 estimator.
Moments sweep_moments(const PbmParams& params, bool order1, const SampleSet& s) {
  check_samples(params, s);
  const int n = params.num_vertices();
  const auto& edges = params.graph().edges();
  const int ne = static_cast<int>(edges.size());
  const auto& bias = params.biases();
  const auto& coupling = params.couplings();

  std::vector<double> mean_acc(n, 0.0), pair_acc(ne, 0.0);
  std::vector<double> gamma(n);
  double den = 0.0;
  for (int l = 0; l < s.size(); ++l) {
    double wl = s.weight(l);
    if (wl == 0.0) continue;
    den += wl;
    const SpinConfig& x = s.points[l];
    if (!order1) {
      for (int i = 0; i < n; ++i)
        mean_acc[i] += wl * static_cast<double>(x[i]);
      for (int k = 0; k < ne; ++k)
        pair_acc[k] += wl * static_cast<double>(x[edges[k].u]) *
                       static_cast<double>(x[edges[k].v]);
      continue;
    }
    for (int i = 0; i < n; ++i) {
      double field = bias[i];
      for (const PbmParams::Nbr& nb : params.adjacency(i))
        field += coupling[nb.edge] * static_cast<double>(x[nb.vertex]);
      gamma[i] = field;
      mean_acc[i] += wl * std::tanh(field);
    }
    for (int k = 0; k < ne; ++k) {
      double w = coupling[k];
      double tij = std::tanh(gamma[edges[k].u] - w * static_cast<double>(x[edges[k].v]));
      double tji = std::tanh(gamma[edges[k].v] - w * static_cast<double>(x[edges[k].u]));
      pair_acc[k] += wl * std::tanh(safe_atanh(tij * tji) + w);
    }
  }
  if (!(den > 0.0)) throw ArgumentError("total sample weight must be positive");
  Moments m;
  m.mean.resize(n);
  m.pair.resize(ne);
  for (int i = 0; i < n; ++i) m.mean[i] = mean_acc[i] / den;
  for (int k = 0; k < ne; ++k) m.pair[k] = pair_acc[k] / den;
  return m;
}

}  // namespace

CovMethod CovMethod::parse(const std::string& token) {
  if (token == "exact") return CovMethod::exact();
  if (token == "mci") return CovMethod::mci();
  if (token == "smci1") return CovMethod::smci1();
  if (token == "smci-s2") return CovMethod::s2();
  if (token.rfind("smci", 0) == 0) {
    int k = detail::parse_positive_int(token.substr(4), "estimator order");
    if (k < 2)
      throw ArgumentError("order below 2 is spelled smci1, got '" + token + "'");
    return CovMethod::smci_k(k);
  }
  throw ArgumentError("unknown estimator token '" + token + "'");
}

std::string CovMethod::to_string() const {
  switch (kind) {
    case kExact:
      return "exact";
    case kMci:
      return "mci";
    case kSmci1:
      return "smci1";
    case kS2:
      return "smci-s2";
    case kSmciK:
      return "smci" + std::to_string(k);
  }
  return "";
}

Moments estimate_moments(const PbmParams& params, CovMethod method,
                         const SampleSet& s, int cap) {
  const auto& edges = params.graph().edges();
  switch (method.kind) {
    case CovMethod::kExact:
      return exact_moments(params);
    case CovMethod::kMci:
      return sweep_moments(params, false, s);
    case CovMethod::kSmci1:
      return sweep_moments(params, true, s);
    case CovMethod::kS2: {
      check_samples(params, s);
      Moments m;
      m.mean.resize(params.num_vertices());
      m.pair.resize(edges.size());
      for (int i = 0; i < params.num_vertices(); ++i) {
        Region t = Region::single(i);
        m.mean[i] = s2_mean(params, i, s2_region(params, t), s);
      }
      for (std::size_t k = 0; k < edges.size(); ++k) {
        Region t({edges[k].u, edges[k].v});
        m.pair[k] = s2_pair(params, edges[k].u, edges[k].v,
                            s2_region(params, t), s);
      }
      return m;
    }
    case CovMethod::kSmciK: {
      check_samples(params, s);
      TargetFn mean_fn = [](const SpinConfig& xt) {
        return static_cast<double>(xt[0]);
      };
      TargetFn pair_fn = [](const SpinConfig& xt) {
        return static_cast<double>(xt[0]) * static_cast<double>(xt[1]);
      };
      Moments m;
      m.mean.resize(params.num_vertices());
      m.pair.resize(edges.size());
      for (int i = 0; i < params.num_vertices(); ++i)
        m.mean[i] =
            ksmci_estimate(params, mean_fn, Region::single(i), method.k, s, cap);
      for (std::size_t k = 0; k < edges.size(); ++k)
        m.pair[k] = ksmci_estimate(params, pair_fn,
                                   Region({edges[k].u, edges[k].v}), method.k, s,
                                   cap);
      return m;
    }
  }
  throw ArgumentError("unknown estimator kind");
}

std::vector<double> covariance_table(const PbmParams& params, CovMethod method,
                                     const SampleSet& s, int cap) {
  Moments m = estimate_moments(params, method, s, cap);
  return covariances_from_moments(params.graph(), m);
}

}  // namespace smci
