#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smci/experiments.hpp"
#include "smci/graph.hpp"
#include "smci/model.hpp"

namespace smci {

// Shortest decimal form that round-trips the exact double ("%.17g" trimmed
// by the printf shortest-width rules is not available pre-C++23, so plain
// "%.17g" is used). NaN prints as "nan" regardless of sign.
std::string fmt_double(double v);

// Graph JSON: {"n": <int>, "edges": [[u, v], ...]} with u < v, sorted
// lexicographically.
std::string graph_to_json(const PairwiseGraph& g);
PairwiseGraph graph_from_json(const std::string& text);
void save_graph(const std::string& path, const PairwiseGraph& g);
PairwiseGraph load_graph(const std::string& path);

// Model JSON: {"n": <int>, "bias": [...], "edges": [[u, v, w], ...]}.
std::string model_to_json(const PbmParams& params);
PbmParams model_from_json(const std::string& text);
void save_model(const std::string& path, const PbmParams& params);
PbmParams load_model(const std::string& path);

// Sample CSV: a "# n=<n> m=<m> seed=<seed>" header line, then one
// comma-separated row of +1/-1 per configuration. Weighted sets have no CSV
// form and are rejected.
void save_samples(const std::string& path, const SampleSet& s, std::uint64_t seed);
SampleSet load_samples(const std::string& path);

// Long-format experiment rows: header scenario,trial,method,param,value,note.
void save_results_csv(const std::string& path, const std::vector<ResultRow>& rows);

// Aggregate summary with the generating configuration echoed alongside.
// config_json must be a serialized JSON object.
void save_summary_json(const std::string& path, const std::string& config_json,
                       const std::vector<AggregateRow>& aggregates);

// Learning trace CSV: header step,mae,grad_norm.
void save_trace_csv(const std::string& path, const std::vector<LearnTraceRow>& rows);

}  // namespace smci
