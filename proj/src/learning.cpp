#include "smci/learning.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "smci/errors.hpp"

namespace smci {

namespace {

void check_data(const PairwiseGraph& g, const SampleSet& data) {
  if (data.size() < 1) throw ArgumentError("dataset is empty");
  if (data.n != g.num_vertices())
    throw ArgumentError("dataset dimension " + std::to_string(data.n) +
                        " does not match graph with " +
                        std::to_string(g.num_vertices()) + " vertices");
}

// Weighted data means and edge pair moments; computed once per dataset.
Moments data_moments(const PairwiseGraph& g, const SampleSet& data) {
  check_data(g, data);
  const int n = g.num_vertices();
  const auto& edges = g.edges();
  Moments m;
  m.mean.assign(n, 0.0);
  m.pair.assign(edges.size(), 0.0);
  double den = 0.0;
  for (int l = 0; l < data.size(); ++l) {
    double w = data.weight(l);
    if (w == 0.0) continue;
    den += w;
    const SpinConfig& x = data.points[l];
    for (int i = 0; i < n; ++i) m.mean[i] += w * static_cast<double>(x[i]);
    for (std::size_t k = 0; k < edges.size(); ++k)
      m.pair[k] += w * static_cast<double>(x[edges[k].u]) *
                   static_cast<double>(x[edges[k].v]);
  }
  if (!(den > 0.0)) throw ArgumentError("total data weight must be positive");
  for (double& v : m.mean) v /= den;
  for (double& v : m.pair) v /= den;
  return m;
}

Gradient gradient_from(const Moments& data, const Moments& model) {
  Gradient grad;
  grad.bias.resize(data.mean.size());
  grad.coupling.resize(data.pair.size());
  for (std::size_t i = 0; i < data.mean.size(); ++i)
    grad.bias[i] = data.mean[i] - model.mean[i];
  for (std::size_t k = 0; k < data.pair.size(); ++k)
    grad.coupling[k] = data.pair[k] - model.pair[k];
  return grad;
}

void apply_step(PbmParams& params, const Gradient& grad, double rate) {
  for (int i = 0; i < params.num_vertices(); ++i)
    params.set_bias(i, params.bias(i) + rate * grad.bias[i]);
  for (int k = 0; k < params.graph().num_edges(); ++k)
    params.set_coupling_at(k, params.coupling_at(k) + rate * grad.coupling[k]);
}

void check_learn_config(const LearnConfig& config) {
  if (!(config.learning_rate > 0.0))
    throw ArgumentError("learning rate must be positive");
  if (config.steps < 1) throw ArgumentError("step count must be positive");
  if (config.replicates < 1) throw ArgumentError("replicate count must be positive");
  if (config.kappa < 1) throw ArgumentError("chain update count must be positive");
  if (config.trace_stride < 1) throw ArgumentError("trace stride must be positive");
}

double reference_mae(const PbmParams& params, const PbmParams* reference) {
  if (!reference) return std::numeric_limits<double>::quiet_NaN();
  return coupling_mae(params, *reference);
}

}  // namespace

double Gradient::max_abs() const {
  double m = 0.0;
  for (double v : bias) m = std::max(m, std::abs(v));
  for (double v : coupling) m = std::max(m, std::abs(v));
  return m;
}

double log_likelihood(const PbmParams& params, const SampleSet& data, int cap) {
  check_data(params.graph(), data);
  double avg = 0.0;
  double den = 0.0;
  for (int l = 0; l < data.size(); ++l) {
    double w = data.weight(l);
    if (w == 0.0) continue;
    avg += w * log_potential(params, data.points[l]);
    den += w;
  }
  if (!(den > 0.0)) throw ArgumentError("total data weight must be positive");
  return avg / den - log_partition(params, cap);
}

Gradient exact_gradient(const PbmParams& params, const SampleSet& data, int cap) {
  Moments dm = data_moments(params.graph(), data);
  Moments mm = exact_moments(params, cap);
  return gradient_from(dm, mm);
}

Gradient approx_gradient(const PbmParams& params, const SampleSet& data,
                         const SampleSet& s, CovMethod method, int cap) {
  Moments dm = data_moments(params.graph(), data);
  Moments mm = estimate_moments(params, method, s, cap);
  return gradient_from(dm, mm);
}

PbmParams exact_mle(const PairwiseGraph& g, const SampleSet& data,
                    double learning_rate, double tol, long max_iter, int cap) {
  check_data(g, data);
  if (!(learning_rate > 0.0)) throw ArgumentError("learning rate must be positive");
  if (!(tol > 0.0)) throw ArgumentError("tolerance must be positive");
  Moments dm = data_moments(g, data);
  PbmParams params(g);
  // Each coordinate's step is scaled by the inverse variance of its
  // sufficient statistic (a diagonal Newton step): a data moment near +-1
  // flattens the likelihood along that coordinate and unscaled ascent
  // crawls. The floor bounds the amplification, and halving the working
  // rate whenever the gradient grows keeps any starting rate convergent
  // even though the scaling ignores cross-moment curvature.
  constexpr double kVarFloor = 0.02;
  double rate = learning_rate;
  double grad_max = 0.0;
  double prev_max = std::numeric_limits<double>::infinity();
  for (long iter = 0; iter < max_iter; ++iter) {
    Moments mm = exact_moments(params, cap);
    Gradient grad = gradient_from(dm, mm);
    grad_max = grad.max_abs();
    if (grad_max < tol) return params;
    if (grad_max > prev_max) rate *= 0.5;
    prev_max = grad_max;
    for (int i = 0; i < g.num_vertices(); ++i) {
      double var = std::max(1.0 - mm.mean[i] * mm.mean[i], kVarFloor);
      params.set_bias(i, params.bias(i) + rate * grad.bias[i] / var);
    }
    for (int k = 0; k < g.num_edges(); ++k) {
      double var = std::max(1.0 - mm.pair[k] * mm.pair[k], kVarFloor);
      params.set_coupling_at(k, params.coupling_at(k) + rate * grad.coupling[k] / var);
    }
  }
  throw Error("maximum-likelihood ascent did not converge in " +
              std::to_string(max_iter) + " steps (last gradient max " +
              std::to_string(grad_max) + ")");
}

namespace {

LearnTrace run_learning(const PairwiseGraph& g, const SampleSet& data,
                        const LearnConfig& config, const PbmParams* reference,
                        bool persistent) {
  check_data(g, data);
  check_learn_config(config);
  if (reference && reference->num_vertices() != g.num_vertices())
    throw ArgumentError("reference model does not match the graph");

  Moments dm = data_moments(g, data);
  PbmParams params(g);

  ChainState chains;
  if (persistent) {
    if (data.weighted())
      throw ArgumentError("persistent learning requires unweighted data");
    std::vector<SpinConfig> start;
    start.reserve(static_cast<std::size_t>(data.size()) * config.replicates);
    for (int c = 0; c < config.replicates; ++c)
      for (const SpinConfig& x : data.points) start.push_back(x);
    chains = ChainState::init(SampleSet(data.n, std::move(start)), config.seed);
  }

  LearnTrace trace{{}, params};
  for (int step = 1; step <= config.steps; ++step) {
    Moments mm =
        persistent
            ? estimate_moments(params, config.estimator,
                               chains.as_sample_set(data.n), config.cap)
            : estimate_moments(params, config.estimator, data, config.cap);
    Gradient grad = gradient_from(dm, mm);
    apply_step(params, grad, config.learning_rate);
    if (persistent) persistent_update(params, chains, config.kappa);
    if (step % config.trace_stride == 0 || step == config.steps)
      trace.rows.push_back({step, reference_mae(params, reference), grad.max_abs()});
  }
  trace.params = params;
  return trace;
}

}  // namespace

LearnTrace fixed_sample_learning(const PairwiseGraph& g, const SampleSet& data,
                                 const LearnConfig& config,
                                 const PbmParams* reference) {
  return run_learning(g, data, config, reference, false);
}

LearnTrace pcd_smci_learning(const PairwiseGraph& g, const SampleSet& data,
                             const LearnConfig& config,
                             const PbmParams* reference) {
  return run_learning(g, data, config, reference, true);
}

double coupling_mae(const PbmParams& a, const PbmParams& b) {
  if (!(a.graph().edges() == b.graph().edges()))
    throw ArgumentError("models live on different graphs");
  if (a.graph().num_edges() == 0) return 0.0;
  double acc = 0.0;
  for (int k = 0; k < a.graph().num_edges(); ++k)
    acc += std::abs(a.coupling_at(k) - b.coupling_at(k));
  return acc / static_cast<double>(a.graph().num_edges());
}

}  // namespace smci
