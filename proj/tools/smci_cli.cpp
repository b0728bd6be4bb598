#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smci/errors.hpp"
#include "smci/estimators.hpp"
#include "smci/experiments.hpp"
#include "smci/io.hpp"
#include "smci/learning.hpp"
#include "smci/model.hpp"
#include "smci/random.hpp"
#include "smci/sampling.hpp"

namespace {

using nlohmann::json;

// JSON config files mirror a subcommand's long flags: scalars for plain
// options, arrays for vector options, nested objects for nested subcommands.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    return app_to_json(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j = json::parse(input, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw smci::Error("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    flatten(j, {}, items);
    return items;
  }

 private:
  static json app_to_json(const CLI::App* app, bool default_also) {
    json out = json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_configurable()) continue;
      std::string name = opt->get_single_name();
      if (opt->count() > 0) {
        std::vector<std::string> results = opt->results();
        if (results.size() == 1)
          out[name] = results.front();
        else
          out[name] = results;
      } else if (default_also && !opt->get_default_str().empty()) {
        out[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      json child = app_to_json(sub, default_also);
      if (!child.empty()) out[sub->get_name()] = std::move(child);
    }
    return out;
  }

  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_unsigned())
      return std::to_string(v.get<unsigned long long>());
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_float()) return smci::fmt_double(v.get<double>());
    throw smci::Error("config values must be scalars or arrays of scalars");
  }

  static void flatten(const json& j, std::vector<std::string> parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        std::vector<std::string> deeper = parents;
        deeper.push_back(key);
        flatten(value, std::move(deeper), items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array())
        for (const json& v : value) item.inputs.push_back(scalar(v));
      else
        item.inputs.push_back(scalar(value));
      items.push_back(std::move(item));
    }
  }
};

// Config files are processed by the root app only, so subcommands let
// unmatched options (like --config given after the subcommand name) fall
// through to the root.
void attach_config(CLI::App* sub) { sub->fallthrough(); }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw smci::Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw smci::Error("write to '" + path + "' failed");
}

std::vector<int> parse_vertex_list(const std::string& text) {
  const char sep = text.find(':') != std::string::npos ? ':' : ',';
  std::vector<int> out;
  std::string cell;
  std::istringstream in(text);
  while (std::getline(in, cell, sep)) {
    try {
      std::size_t used = 0;
      int v = std::stoi(cell, &used);
      if (used != cell.size() || v < 0) throw std::invalid_argument(cell);
      out.push_back(v);
    } catch (const std::exception&) {
      throw smci::ArgumentError("invalid vertex '" + cell + "' in '" + text +
                                "'");
    }
  }
  if (out.empty()) throw smci::ArgumentError("empty vertex list '" + text + "'");
  return out;
}

// ---------------------------------------------------------------------------
// gen-model

struct GenModelOpts {
  std::string graph = "grid:4x5";
  double bias_lo = -0.2, bias_hi = 0.2;
  double coup_lo = -0.3, coup_hi = 0.3;
  std::uint64_t seed = 0;
  std::string out;
};

void run_gen_model(const GenModelOpts& o) {
  smci::GraphSpec spec = smci::GraphSpec::parse(o.graph);
  smci::PairwiseGraph g =
      spec.instantiate(smci::derive_seed(o.seed, {smci::kSeedTagGraph}));
  smci::PbmParams params =
      smci::generate_model(g, o.bias_lo, o.bias_hi, o.coup_lo, o.coup_hi,
                           smci::derive_seed(o.seed, {smci::kSeedTagModel}));
  write_text(o.out, smci::model_to_json(params));
}

void setup_gen_model(CLI::App& app) {
  auto o = std::make_shared<GenModelOpts>();
  CLI::App* sub = app.add_subcommand(
      "gen-model", "Draw a random model on a graph and write it as JSON");
  sub->add_option("--graph", o->graph,
                  "Graph spec: grid:RxC, random:N,P, complete:N or file:PATH")
      ->capture_default_str();
  sub->add_option("--bias-lo", o->bias_lo, "Lower bias bound")
      ->capture_default_str();
  sub->add_option("--bias-hi", o->bias_hi, "Upper bias bound")
      ->capture_default_str();
  sub->add_option("--coup-lo", o->coup_lo, "Lower coupling bound")
      ->capture_default_str();
  sub->add_option("--coup-hi", o->coup_hi, "Upper coupling bound")
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "Master seed")->capture_default_str();
  sub->add_option("--out", o->out, "Output model JSON path (stdout if empty)");
  attach_config(sub);
  sub->callback([o] { run_gen_model(*o); });
}

// ---------------------------------------------------------------------------
// sample

struct SampleOpts {
  std::string model;
  int num = 100;
  int anneal_sweeps = 1000;
  int equil_sweeps = 100;
  std::uint64_t seed = 0;
  std::string out;
};

void run_sample(const SampleOpts& o) {
  smci::PbmParams params = smci::load_model(o.model);
  smci::SampleSet s = smci::draw_sample_set(
      params, o.num, smci::AnnealSchedule::linear(o.anneal_sweeps, o.equil_sweeps),
      o.seed);
  smci::save_samples(o.out, s, o.seed);
}

void setup_sample(CLI::App& app) {
  auto o = std::make_shared<SampleOpts>();
  CLI::App* sub = app.add_subcommand(
      "sample", "Draw Gibbs samples from a model with an annealed warm-up");
  sub->add_option("--model", o->model, "Model JSON path")->required();
  sub->add_option("--num", o->num, "Number of sample points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--anneal-sweeps", o->anneal_sweeps,
                  "Sweeps spent ramping the inverse temperature to 1")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--equil-sweeps", o->equil_sweeps,
                  "Extra sweeps at inverse temperature 1")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "Master seed")->capture_default_str();
  sub->add_option("--out", o->out, "Output sample CSV path")->required();
  attach_config(sub);
  sub->callback([o] { run_sample(*o); });
}

// ---------------------------------------------------------------------------
// estimate

struct EstimateOpts {
  std::string model;
  std::string samples;
  std::string method = "smci1";
  std::vector<std::string> targets;
  std::string region;
  int cap = smci::kDefaultRegionCap;
  std::string out;
};

smci::TargetFn spin_product() {
  return [](const smci::SpinConfig& xt) {
    double p = 1.0;
    for (smci::Spin s : xt) p *= static_cast<double>(s);
    return p;
  };
}

double estimate_one(const smci::PbmParams& params, const EstimateOpts& o,
                    const smci::Region& t, const smci::SampleSet& s) {
  smci::TargetFn f = spin_product();
  if (o.method == "gsmci") {
    if (o.region.empty())
      throw smci::ArgumentError("method gsmci needs --region");
    smci::Region a(parse_vertex_list(o.region));
    return smci::gsmci_estimate(params, f, t, a, s, o.cap);
  }
  smci::CovMethod m = smci::CovMethod::parse(o.method);
  switch (m.kind) {
    case smci::CovMethod::kExact:
      return smci::exact_expectation(params, f, t);
    case smci::CovMethod::kMci:
      return smci::mci_estimate(f, t, s);
    case smci::CovMethod::kSmci1:
      if (t.size() == 1) return smci::smci1_mean(params, t.members()[0], s);
      if (t.size() == 2)
        return smci::smci1_pair(params, t.members()[0], t.members()[1], s);
      throw smci::ArgumentError(
          "smci1 closed forms cover single vertices and pairs");
    case smci::CovMethod::kS2: {
      smci::Region a = smci::s2_region(params, t);
      if (t.size() == 1) return smci::s2_mean(params, t.members()[0], a, s);
      if (t.size() == 2)
        return smci::s2_pair(params, t.members()[0], t.members()[1], a, s);
      throw smci::ArgumentError(
          "smci-s2 closed forms cover single vertices and pairs");
    }
    case smci::CovMethod::kSmciK:
      return smci::ksmci_estimate(params, f, t, m.k, s, o.cap);
  }
  throw smci::ArgumentError("unknown estimator kind");
}

void run_estimate(const EstimateOpts& o) {
  smci::PbmParams params = smci::load_model(o.model);
  smci::SampleSet s = smci::load_samples(o.samples);
  std::ostringstream out;
  out << "target,method,M,estimate\n";
  for (const std::string& target : o.targets) {
    std::vector<int> vertices = parse_vertex_list(target);
    smci::Region t(vertices);
    double value = estimate_one(params, o, t, s);
    std::string label;
    for (std::size_t q = 0; q < t.members().size(); ++q) {
      if (q) label += ':';
      label += std::to_string(t.members()[q]);
    }
    out << label << ',' << o.method << ',' << s.size() << ','
        << smci::fmt_double(value) << '\n';
  }
  write_text(o.out, out.str());
}

void setup_estimate(CLI::App& app) {
  auto o = std::make_shared<EstimateOpts>();
  CLI::App* sub = app.add_subcommand(
      "estimate", "Estimate target expectations from a sample set");
  sub->add_option("--model", o->model, "Model JSON path")->required();
  sub->add_option("--samples", o->samples, "Sample CSV path")->required();
  sub->add_option("--method", o->method,
                  "mci, smci1, smci-s2, smci<k>, gsmci or exact")
      ->capture_default_str();
  sub->add_option("--target", o->targets,
                  "Target vertices, e.g. 4 or 4,9 (repeatable)")
      ->required();
  sub->add_option("--region", o->region,
                  "Sum region for gsmci as a vertex list, e.g. 1,4,7");
  sub->add_option("--cap", o->cap, "Region enumeration cap (log2 of states)")
      ->capture_default_str();
  sub->add_option("--out", o->out, "Output CSV path (stdout if empty)");
  attach_config(sub);
  sub->callback([o] { run_estimate(*o); });
}

// ---------------------------------------------------------------------------
// exact

struct ExactOpts {
  std::string model;
  int cap = smci::kDefaultExactCap;
  bool log_z = false;
  std::string out;
};

void run_exact(const ExactOpts& o) {
  smci::PbmParams params = smci::load_model(o.model);
  std::ostringstream out;
  if (o.log_z) {
    out << smci::fmt_double(smci::log_partition(params, o.cap)) << '\n';
  } else {
    smci::Moments m = smci::exact_moments(params, o.cap);
    out << "i,j,value\n";
    for (int i = 0; i < params.num_vertices(); ++i)
      out << i << ",," << smci::fmt_double(m.mean[i]) << '\n';
    const auto& edges = params.graph().edges();
    for (std::size_t k = 0; k < edges.size(); ++k)
      out << edges[k].u << ',' << edges[k].v << ','
          << smci::fmt_double(m.pair[k]) << '\n';
  }
  write_text(o.out, out.str());
}

void setup_exact(CLI::App& app) {
  auto o = std::make_shared<ExactOpts>();
  CLI::App* sub = app.add_subcommand(
      "exact", "Exact moments (or log partition) by full enumeration");
  sub->add_option("--model", o->model, "Model JSON path")->required();
  sub->add_option("--cap", o->cap, "Enumeration cap (log2 of states)")
      ->capture_default_str();
  sub->add_flag("--log-z", o->log_z, "Print the log partition function only");
  sub->add_option("--out", o->out, "Output path (stdout if empty)");
  attach_config(sub);
  sub->callback([o] { run_exact(*o); });
}

// ---------------------------------------------------------------------------
// learn

struct LearnOpts {
  std::string graph;
  std::string data;
  std::string method = "fixed-smci1";
  int e = 0;  // 0 keeps the method token's replication factor
  int kappa = 1;
  double lr = 0.02;
  int steps = 5000;
  int trace_stride = 1;
  int cap = smci::kDefaultRegionCap;
  std::string ref;
  double mle_rate = 0.5;
  double mle_tol = 1e-8;
  long mle_iters = 20000;
  std::uint64_t seed = 0;
  std::string trace;
  std::string out;
};

void run_learn(const LearnOpts& o) {
  smci::GraphSpec spec = smci::GraphSpec::parse(o.graph);
  smci::PairwiseGraph g =
      spec.instantiate(smci::derive_seed(o.seed, {smci::kSeedTagGraph}));
  smci::SampleSet data = smci::load_samples(o.data);

  smci::LearnMethodSpec method = smci::LearnMethodSpec::parse(o.method);
  if (o.e > 0) {
    if (!method.persistent)
      throw smci::ArgumentError("--e only applies to persistent methods");
    method.replicates = o.e;
  }

  std::unique_ptr<smci::PbmParams> reference;
  if (o.ref == "exact")
    reference = std::make_unique<smci::PbmParams>(
        smci::exact_mle(g, data, o.mle_rate, o.mle_tol, o.mle_iters));
  else if (!o.ref.empty())
    reference = std::make_unique<smci::PbmParams>(smci::load_model(o.ref));

  smci::LearnConfig lc;
  lc.estimator = method.estimator;
  lc.learning_rate = o.lr;
  lc.steps = o.steps;
  lc.replicates = method.replicates;
  lc.kappa = o.kappa;
  lc.seed = smci::derive_seed(o.seed, {smci::kSeedTagLearn});
  lc.trace_stride = o.trace_stride;
  lc.cap = o.cap;

  smci::LearnTrace trace =
      method.persistent
          ? smci::pcd_smci_learning(g, data, lc, reference.get())
          : smci::fixed_sample_learning(g, data, lc, reference.get());

  if (!o.out.empty()) write_text(o.out, smci::model_to_json(trace.params));
  if (!o.trace.empty()) {
    smci::save_trace_csv(o.trace, trace.rows);
  } else if (o.out.empty()) {
    std::ostringstream text;
    text << "step,mae,grad_norm\n";
    for (const smci::LearnTraceRow& r : trace.rows)
      text << r.step << ',' << smci::fmt_double(r.mae) << ','
           << smci::fmt_double(r.grad_max) << '\n';
    std::cout << text.str();
  }
}

void setup_learn(CLI::App& app) {
  auto o = std::make_shared<LearnOpts>();
  CLI::App* sub = app.add_subcommand(
      "learn", "Fit a model to a dataset by approximate likelihood ascent");
  sub->add_option("--graph", o->graph, "Graph spec for the fitted model")
      ->required();
  sub->add_option("--data", o->data, "Training sample CSV path")->required();
  sub->add_option("--method", o->method,
                  "fixed-<est> or pcd-<est>[:e=<r>] with est one of smci1, "
                  "s2, exact")
      ->capture_default_str();
  sub->add_option("--e", o->e,
                  "Persistent chain replicates per data point (overrides the "
                  "method token)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--kappa", o->kappa, "Chain sweeps per update")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--lr", o->lr, "Learning rate")->capture_default_str();
  sub->add_option("--steps", o->steps, "Update steps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--trace-stride", o->trace_stride,
                  "Record every stride-th step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--cap", o->cap, "Region enumeration cap")
      ->capture_default_str();
  sub->add_option("--ref", o->ref,
                  "MAE reference: 'exact' for the exact MLE of the data, or "
                  "a model JSON path");
  sub->add_option("--mle-rate", o->mle_rate, "Reference MLE learning rate")
      ->capture_default_str();
  sub->add_option("--mle-tol", o->mle_tol, "Reference MLE gradient tolerance")
      ->capture_default_str();
  sub->add_option("--mle-iters", o->mle_iters, "Reference MLE iteration cap")
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "Master seed")->capture_default_str();
  sub->add_option("--trace", o->trace, "Trace CSV path (stdout if no --out)");
  sub->add_option("--out", o->out, "Fitted model JSON path");
  attach_config(sub);
  sub->callback([o] { run_learn(*o); });
}

// ---------------------------------------------------------------------------
// experiment inference / learning

struct InferenceOpts {
  std::string graph = "grid:4x5";
  int trials = 200;
  std::vector<int> sizes = {10, 100, 1000};
  std::vector<std::string> methods = {"mci", "smci1", "smci-s2", "smci2"};
  double bias_lo = -0.2, bias_hi = 0.2;
  double coup_lo = -0.3, coup_hi = 0.3;
  int anneal_sweeps = 1000;
  int equil_sweeps = 100;
  int region_cap = smci::kDefaultRegionCap;
  int ais_chains = 100;
  double ais_step = 1e-4;
  std::uint64_t seed = 0;
  std::string out;
  std::string summary;
};

json inference_config_json(const smci::InferenceConfig& c, const InferenceOpts& o) {
  return json{{"scenario", c.scenario},
              {"graph", c.graph.to_string()},
              {"trials", c.trials},
              {"sample_sizes", c.sample_sizes},
              {"methods", c.methods},
              {"bias_lo", c.bias_lo},
              {"bias_hi", c.bias_hi},
              {"coup_lo", c.coup_lo},
              {"coup_hi", c.coup_hi},
              {"anneal_sweeps", o.anneal_sweeps},
              {"equil_sweeps", o.equil_sweeps},
              {"region_cap", c.region_cap},
              {"ais_chains", c.ais_chains},
              {"ais_step", c.ais_step},
              {"seed", c.seed}};
}

void run_experiment_inference(const InferenceOpts& o) {
  smci::InferenceConfig config;
  config.graph = smci::GraphSpec::parse(o.graph);
  config.trials = o.trials;
  config.sample_sizes = o.sizes;
  config.methods = o.methods;
  config.bias_lo = o.bias_lo;
  config.bias_hi = o.bias_hi;
  config.coup_lo = o.coup_lo;
  config.coup_hi = o.coup_hi;
  config.schedule = smci::AnnealSchedule::linear(o.anneal_sweeps, o.equil_sweeps);
  config.region_cap = o.region_cap;
  config.ais_chains = o.ais_chains;
  config.ais_step = o.ais_step;
  config.seed = o.seed;

  smci::ResultTable table = smci::run_inference_experiment(config);
  smci::save_results_csv(o.out, table.rows);
  if (!o.summary.empty())
    smci::save_summary_json(o.summary, inference_config_json(config, o).dump(),
                            table.aggregates);
}

void setup_experiment_inference(CLI::App& experiment) {
  auto o = std::make_shared<InferenceOpts>();
  CLI::App* sub = experiment.add_subcommand(
      "inference", "Estimator accuracy versus the exact covariances");
  sub->add_option("--graph", o->graph, "Graph spec")->capture_default_str();
  sub->add_option("--trials", o->trials, "Independent trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--sizes", o->sizes, "Sample sizes")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--methods", o->methods,
                  "Estimators: mci, smci1, smci-s2, smci<k>, ais")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--bias-lo", o->bias_lo, "Lower bias bound")
      ->capture_default_str();
  sub->add_option("--bias-hi", o->bias_hi, "Upper bias bound")
      ->capture_default_str();
  sub->add_option("--coup-lo", o->coup_lo, "Lower coupling bound")
      ->capture_default_str();
  sub->add_option("--coup-hi", o->coup_hi, "Upper coupling bound")
      ->capture_default_str();
  sub->add_option("--anneal-sweeps", o->anneal_sweeps, "Annealing ramp sweeps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--equil-sweeps", o->equil_sweeps,
                  "Equilibration sweeps after the ramp")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--region-cap", o->region_cap, "Region enumeration cap")
      ->capture_default_str();
  sub->add_option("--ais-chains", o->ais_chains,
                  "Chains per importance ladder (0 follows the sample sizes)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--ais-step", o->ais_step, "Inverse-temperature step")
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "Master seed")->capture_default_str();
  sub->add_option("--out", o->out, "Results CSV path")->required();
  sub->add_option("--summary", o->summary, "Aggregate summary JSON path");
  attach_config(sub);
  sub->callback([o] { run_experiment_inference(*o); });
}

struct LearnExpOpts {
  std::string generator = "grid:4x5";
  std::string learner = "grid:4x5";
  int trials = 50;
  int data_count = 50;
  std::vector<std::string> methods = {"fixed-smci1", "pcd-smci1"};
  double bias_lo = -0.2, bias_hi = 0.2;
  double coup_lo = -0.3, coup_hi = 0.3;
  double lr = 0.02;
  int steps = 5000;
  int kappa = 1;
  int trace_stride = 50;
  int anneal_sweeps = 1000;
  int equil_sweeps = 100;
  double mle_rate = 0.5;
  double mle_tol = 1e-8;
  long mle_iters = 20000;
  std::uint64_t seed = 0;
  std::string out;
  std::string summary;
};

json learning_config_json(const smci::LearningConfig& c, const LearnExpOpts& o) {
  return json{{"scenario", c.scenario},
              {"generator", c.generator.to_string()},
              {"learner", c.learner.to_string()},
              {"trials", c.trials},
              {"data_count", c.data_count},
              {"methods", c.methods},
              {"bias_lo", c.bias_lo},
              {"bias_hi", c.bias_hi},
              {"coup_lo", c.coup_lo},
              {"coup_hi", c.coup_hi},
              {"learning_rate", c.learning_rate},
              {"steps", c.steps},
              {"kappa", c.kappa},
              {"trace_stride", c.trace_stride},
              {"anneal_sweeps", o.anneal_sweeps},
              {"equil_sweeps", o.equil_sweeps},
              {"mle_rate", c.mle_rate},
              {"mle_tol", c.mle_tol},
              {"mle_max_iter", c.mle_max_iter},
              {"seed", c.seed}};
}

void run_experiment_learning(const LearnExpOpts& o) {
  smci::LearningConfig config;
  config.generator = smci::GraphSpec::parse(o.generator);
  config.learner = smci::GraphSpec::parse(o.learner);
  config.trials = o.trials;
  config.data_count = o.data_count;
  config.methods = o.methods;
  config.bias_lo = o.bias_lo;
  config.bias_hi = o.bias_hi;
  config.coup_lo = o.coup_lo;
  config.coup_hi = o.coup_hi;
  config.learning_rate = o.lr;
  config.steps = o.steps;
  config.kappa = o.kappa;
  config.trace_stride = o.trace_stride;
  config.schedule = smci::AnnealSchedule::linear(o.anneal_sweeps, o.equil_sweeps);
  config.mle_rate = o.mle_rate;
  config.mle_tol = o.mle_tol;
  config.mle_max_iter = o.mle_iters;
  config.seed = o.seed;

  smci::ResultTable table = smci::run_learning_experiment(config);
  smci::save_results_csv(o.out, table.rows);
  if (!o.summary.empty())
    smci::save_summary_json(o.summary, learning_config_json(config, o).dump(),
                            table.aggregates);
}

void setup_experiment_learning(CLI::App& experiment) {
  auto o = std::make_shared<LearnExpOpts>();
  CLI::App* sub = experiment.add_subcommand(
      "learning", "Learner accuracy versus the exact maximum likelihood");
  sub->add_option("--generator", o->generator, "Data-generating graph spec")
      ->capture_default_str();
  sub->add_option("--learner", o->learner, "Fitted-model graph spec")
      ->capture_default_str();
  sub->add_option("--trials", o->trials, "Independent trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--data-count", o->data_count, "Training points per trial")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--methods", o->methods,
                  "Learners: fixed-<est> or pcd-<est>[:e=<r>]")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--bias-lo", o->bias_lo, "Lower bias bound")
      ->capture_default_str();
  sub->add_option("--bias-hi", o->bias_hi, "Upper bias bound")
      ->capture_default_str();
  sub->add_option("--coup-lo", o->coup_lo, "Lower coupling bound")
      ->capture_default_str();
  sub->add_option("--coup-hi", o->coup_hi, "Upper coupling bound")
      ->capture_default_str();
  sub->add_option("--lr", o->lr, "Learning rate")->capture_default_str();
  sub->add_option("--steps", o->steps, "Update steps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--kappa", o->kappa, "Chain sweeps per update")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--trace-stride", o->trace_stride,
                  "Record every stride-th step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--anneal-sweeps", o->anneal_sweeps, "Annealing ramp sweeps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--equil-sweeps", o->equil_sweeps,
                  "Equilibration sweeps after the ramp")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--mle-rate", o->mle_rate, "Reference MLE learning rate")
      ->capture_default_str();
  sub->add_option("--mle-tol", o->mle_tol, "Reference MLE gradient tolerance")
      ->capture_default_str();
  sub->add_option("--mle-iters", o->mle_iters, "Reference MLE iteration cap")
      ->capture_default_str();
  sub->add_option("--seed", o->seed, "Master seed")->capture_default_str();
  sub->add_option("--out", o->out, "Results CSV path")->required();
  sub->add_option("--summary", o->summary, "Aggregate summary JSON path");
  attach_config(sub);
  sub->callback([o] { run_experiment_learning(*o); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial Monte Carlo estimators for pairwise Boltzmann machines"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "",
                 "JSON config file with one section per subcommand, e.g. "
                 "{\"experiment\": {\"inference\": {\"trials\": 5}}}; "
                 "command-line values win");
  app.allow_config_extras(CLI::config_extras_mode::error);

  setup_gen_model(app);
  setup_sample(app);
  setup_estimate(app);
  setup_exact(app);
  setup_learn(app);

  CLI::App* experiment =
      app.add_subcommand("experiment", "Batch accuracy experiments");
  experiment->require_subcommand(1);
  experiment->fallthrough();
  setup_experiment_inference(*experiment);
  setup_experiment_learning(*experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const smci::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
