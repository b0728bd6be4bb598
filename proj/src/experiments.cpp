#include "smci/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "parse_util.hpp"
#include "smci/errors.hpp"
#include "smci/io.hpp"
#include "smci/random.hpp"

namespace smci {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// FNV-1a; stable hash used to give each method token its own seed lane.
std::uint64_t hash_token(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

using detail::parse_positive_int;

}  // namespace

GraphSpec GraphSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  GraphSpec spec;
  if (kind == "grid") {
    auto x = rest.find('x');
    if (x == std::string::npos)
      throw ArgumentError("grid spec must look like grid:4x5, got '" + text + "'");
    spec.kind = kGrid;
    spec.rows = parse_positive_int(rest.substr(0, x), "grid rows");
    spec.cols = parse_positive_int(rest.substr(x + 1), "grid cols");
  } else if (kind == "random") {
    auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw ArgumentError("random spec must look like random:20,0.2, got '" +
                          text + "'");
    spec.kind = kRandom;
    spec.n = parse_positive_int(rest.substr(0, comma), "vertex count");
    try {
      spec.p = std::stod(rest.substr(comma + 1));
    } catch (const std::exception&) {
      throw ArgumentError("invalid edge probability in '" + text + "'");
    }
    if (spec.p < 0.0 || spec.p > 1.0)
      throw ArgumentError("edge probability must be in [0,1]");
  } else if (kind == "complete") {
    spec.kind = kComplete;
    spec.n = parse_positive_int(rest, "vertex count");
  } else if (kind == "file") {
    if (rest.empty()) throw ArgumentError("file spec needs a path");
    spec.kind = kFile;
    spec.path = rest;
  } else {
    throw ArgumentError("unknown graph spec '" + text + "'");
  }
  return spec;
}

std::string GraphSpec::to_string() const {
  switch (kind) {
    case kGrid:
      return "grid:" + std::to_string(rows) + "x" + std::to_string(cols);
    case kRandom: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "random:%d,%.17g", n, p);
      return buf;
    }
    case kComplete:
      return "complete:" + std::to_string(n);
    case kFile:
      return "file:" + path;
  }
  return "";
}

PairwiseGraph GraphSpec::instantiate(std::uint64_t seed) const {
  switch (kind) {
    case kGrid:
      return PairwiseGraph::grid(rows, cols);
    case kRandom: {
      RandomStream rng(seed);
      return PairwiseGraph::random(n, p, rng);
    }
    case kComplete:
      return PairwiseGraph::complete(n);
    case kFile:
      return load_graph(path);
  }
  throw ArgumentError("unknown graph kind");
}

PbmParams generate_model(const PairwiseGraph& g, double bias_lo, double bias_hi,
                         double coup_lo, double coup_hi, std::uint64_t seed) {
  if (bias_lo > bias_hi || coup_lo > coup_hi)
    throw ArgumentError("parameter range is inverted");
  RandomStream rng(seed);
  std::vector<double> bias(g.num_vertices());
  for (double& b : bias) b = rng.uniform(bias_lo, bias_hi);
  std::vector<double> coupling(g.num_edges());
  for (double& w : coupling) w = rng.uniform(coup_lo, coup_hi);
  return PbmParams(g, std::move(bias), std::move(coupling));
}

double mae(const std::vector<double>& ref, const std::vector<double>& est) {
  if (ref.size() != est.size())
    throw ArgumentError("value tables have different sizes");
  if (ref.empty()) throw ArgumentError("value tables are empty");
  double acc = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) acc += std::abs(ref[i] - est[i]);
  return acc / static_cast<double>(ref.size());
}

double mae(const std::vector<std::pair<std::string, double>>& ref,
           const std::vector<std::pair<std::string, double>>& est) {
  auto sorted = [](std::vector<std::pair<std::string, double>> v) {
    std::sort(v.begin(), v.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  };
  auto r = sorted(ref);
  auto e = sorted(est);
  if (r.size() != e.size()) throw ArgumentError("keyed tables have different sizes");
  if (r.empty()) throw ArgumentError("keyed tables are empty");
  double acc = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i].first != e[i].first)
      throw ArgumentError("keyed tables disagree on key '" + r[i].first + "' vs '" +
                          e[i].first + "'");
    acc += std::abs(r[i].second - e[i].second);
  }
  return acc / static_cast<double>(r.size());
}

std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows) {
  // Keys in sorted order for a stable, input-order-independent summary.
  std::map<std::pair<std::string, long>, std::vector<double>> groups;
  for (const ResultRow& r : rows) {
    auto& values = groups[{r.method, r.param}];
    if (std::isfinite(r.value)) values.push_back(r.value);
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, values] : groups) {
    AggregateRow agg;
    agg.method = key.first;
    agg.param = key.second;
    agg.count = static_cast<int>(values.size());
    if (agg.count > 0) {
      double sum = 0.0;
      for (double v : values) sum += v;
      agg.mean = sum / agg.count;
      double ss = 0.0;
      for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
      agg.se = agg.count > 1 ? std::sqrt(ss / (agg.count - 1) / agg.count) : 0.0;
    } else {
      agg.mean = kNan;
      agg.se = kNan;
    }
    out.push_back(agg);
  }
  return out;
}

std::vector<ResultRow> run_inference_trial(const InferenceConfig& config, int trial) {
  const std::uint64_t master = config.seed;
  const std::uint64_t trial_tag = static_cast<std::uint64_t>(trial);
  PairwiseGraph g = config.graph.instantiate(
      derive_seed(master, {trial_tag, kSeedTagGraph}));
  PbmParams params =
      generate_model(g, config.bias_lo, config.bias_hi, config.coup_lo,
                     config.coup_hi, derive_seed(master, {trial_tag, kSeedTagModel}));
  std::vector<double> exact_chi =
      covariances_from_moments(g, exact_moments(params));

  std::vector<ResultRow> rows;
  bool want_ais = false;
  for (int m : config.sample_sizes) {
    if (m < 1) throw ArgumentError("sample sizes must be positive");
    SampleSet s = draw_sample_set(
        params, m, config.schedule,
        derive_seed(master, {trial_tag, kSeedTagSamples, static_cast<std::uint64_t>(m)}));
    for (const std::string& token : config.methods) {
      if (token == "ais") {
        want_ais = true;
        continue;
      }
      CovMethod method = CovMethod::parse(token);
      ResultRow row{config.scenario, trial, token, m, 0.0, ""};
      try {
        row.value = mae(exact_chi, covariance_table(params, method, s,
                                                    config.region_cap));
      } catch (const CapacityError& err) {
        row.value = kNan;
        row.note = err.what();
      }
      rows.push_back(std::move(row));
    }
  }
  if (want_ais) {
    // One ladder per sample size (chain count following it), or a single
    // ladder with a fixed chain count.
    std::vector<int> chain_counts;
    if (config.ais_chains > 0)
      chain_counts.push_back(config.ais_chains);
    else
      chain_counts = config.sample_sizes;
    for (int m : chain_counts) {
      AisResult ais = ais_estimate(
          params, m, config.ais_step,
          derive_seed(master, {trial_tag, kSeedTagAis, static_cast<std::uint64_t>(m)}));
      double value =
          mae(exact_chi, covariance_table(params, CovMethod::mci(), ais.samples));
      rows.push_back({config.scenario, trial, "ais", m, value, ""});
    }
  }
  return rows;
}

ResultTable run_inference_experiment(const InferenceConfig& config) {
  if (config.trials < 1) throw ArgumentError("trial count must be positive");
  ResultTable table;
  for (int trial = 0; trial < config.trials; ++trial) {
    std::vector<ResultRow> rows = run_inference_trial(config, trial);
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }
  table.aggregates = aggregate_rows(table.rows);
  return table;
}

LearnMethodSpec LearnMethodSpec::parse(const std::string& token) {
  LearnMethodSpec spec;
  spec.token = token;
  std::string head = token;
  auto colon = token.find(':');
  if (colon != std::string::npos) {
    head = token.substr(0, colon);
    std::string tail = token.substr(colon + 1);
    if (tail.rfind("e=", 0) != 0)
      throw ArgumentError("unknown learning method option '" + tail + "'");
    spec.replicates = parse_positive_int(tail.substr(2), "replication factor");
  }
  std::string estimator;
  if (head.rfind("fixed-", 0) == 0) {
    spec.persistent = false;
    estimator = head.substr(6);
    if (colon != std::string::npos)
      throw ArgumentError("replication only applies to persistent learning");
  } else if (head.rfind("pcd-", 0) == 0) {
    spec.persistent = true;
    estimator = head.substr(4);
  } else {
    throw ArgumentError("unknown learning method '" + token + "'");
  }
  if (estimator == "smci1")
    spec.estimator = CovMethod::smci1();
  else if (estimator == "s2")
    spec.estimator = CovMethod::s2();
  else if (estimator == "exact")
    spec.estimator = CovMethod::exact();
  else
    throw ArgumentError("unknown estimator '" + estimator + "' in learning method");
  return spec;
}

std::vector<ResultRow> run_learning_trial(const LearningConfig& config, int trial) {
  const std::uint64_t master = config.seed;
  const std::uint64_t trial_tag = static_cast<std::uint64_t>(trial);
  PairwiseGraph gen_graph = config.generator.instantiate(
      derive_seed(master, {trial_tag, kSeedTagGraph, 1}));
  PairwiseGraph learn_graph = config.learner.instantiate(
      derive_seed(master, {trial_tag, kSeedTagGraph, 2}));
  if (gen_graph.num_vertices() != learn_graph.num_vertices())
    throw ArgumentError("generator and learner graphs must share a vertex count");

  PbmParams gen_params = generate_model(
      gen_graph, config.bias_lo, config.bias_hi, config.coup_lo, config.coup_hi,
      derive_seed(master, {trial_tag, kSeedTagModel}));
  SampleSet data =
      draw_sample_set(gen_params, config.data_count, config.schedule,
                      derive_seed(master, {trial_tag, kSeedTagData}));
  // With few data points and a strongly correlated generator the empirical
  // moments can land on the boundary of the achievable set, putting the
  // maximum-likelihood optimum at infinity. Such trials have no reference to
  // compare against, so they are recorded as skipped rather than aborting
  // the whole experiment.
  PbmParams reference(learn_graph);
  try {
    reference = exact_mle(learn_graph, data, config.mle_rate, config.mle_tol,
                          config.mle_max_iter);
  } catch (const ArgumentError&) {
    throw;
  } catch (const Error& err) {
    std::vector<ResultRow> rows;
    for (const std::string& token : config.methods) {
      LearnMethodSpec::parse(token);
      rows.push_back({config.scenario, trial, token,
                      static_cast<long>(config.steps), kNan, err.what()});
    }
    return rows;
  }

  std::vector<ResultRow> rows;
  for (const std::string& token : config.methods) {
    LearnMethodSpec spec = LearnMethodSpec::parse(token);
    LearnConfig lc;
    lc.estimator = spec.estimator;
    lc.learning_rate = config.learning_rate;
    lc.steps = config.steps;
    lc.replicates = spec.replicates;
    lc.kappa = config.kappa;
    lc.trace_stride = config.trace_stride;
    lc.seed = derive_seed(master, {trial_tag, kSeedTagLearn, hash_token(token)});
    LearnTrace trace =
        spec.persistent ? pcd_smci_learning(learn_graph, data, lc, &reference)
                        : fixed_sample_learning(learn_graph, data, lc, &reference);
    for (const LearnTraceRow& r : trace.rows)
      rows.push_back({config.scenario, trial, token, r.step, r.mae, ""});
  }
  return rows;
}

ResultTable run_learning_experiment(const LearningConfig& config) {
  if (config.trials < 1) throw ArgumentError("trial count must be positive");
  ResultTable table;
  for (int trial = 0; trial < config.trials; ++trial) {
    std::vector<ResultRow> rows = run_learning_trial(config, trial);
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
  }
  table.aggregates = aggregate_rows(table.rows);
  return table;
}

}  // namespace smci
