#pragma once

#include <functional>
#include <initializer_list>
#include <vector>

#include "smci/random.hpp"

namespace smci {

// Undirected edge with endpoints stored as u < v.
struct Edge {
  int u = 0;
  int v = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Simple undirected graph on vertices 0..n-1. Edges are stored sorted
// lexicographically with u < v; no self loops, no duplicates.
class PairwiseGraph {
 public:
  PairwiseGraph(int n, std::vector<Edge> edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  // Neighbors of i in ascending order.
  const std::vector<int>& neighbors(int i) const;
  int degree(int i) const { return static_cast<int>(neighbors(i).size()); }

  bool has_edge(int i, int j) const { return edge_index(i, j) >= 0; }
  // Index of {i,j} into edges(), or -1 if absent. Order of i, j is ignored.
  int edge_index(int i, int j) const;

  // rows x cols lattice with nearest-neighbor edges; vertex (r, c) has id
  // r * cols + c.
  static PairwiseGraph grid(int rows, int cols);
  // Erdos-Renyi graph: each pair, scanned in lexicographic order, is an edge
  // with probability p. Same stream state, same graph.
  static PairwiseGraph random(int n, double p, RandomStream& rng);
  static PairwiseGraph complete(int n);

 private:
  void check_vertex(int i) const;

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
};

// Canonical vertex subset: members sorted ascending, no duplicates.
class Region {
 public:
  Region() = default;
  explicit Region(std::vector<int> members);
  Region(std::initializer_list<int> members);
  static Region single(int i) { return Region({i}); }

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool empty() const { return members_.empty(); }
  bool contains(int v) const;
  bool is_subset_of(const Region& other) const;

  Region unioned(const Region& other) const;
  Region difference(const Region& other) const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  friend bool operator==(const Region&, const Region&) = default;

 private:
  std::vector<int> members_;
};

// k-th neighborhood shell of t: vertices first reached after exactly k hops.
// k = 0 returns t itself.
Region neighborhood_k(const PairwiseGraph& g, const Region& t, int k);

// Union of shells 0..k around t (all vertices within k hops).
Region closed_region_k(const PairwiseGraph& g, const Region& t, int k);

// Vertices outside a with at least one neighbor inside a.
Region boundary(const PairwiseGraph& g, const Region& a);

// Greedy maximal independent set over `candidates` in the subgraph they
// induce: repeatedly take a vertex of minimum remaining induced degree,
// remove it and its neighbors. Ties at nonzero degree are broken by the
// larger tie_weight, remaining ties by the smaller vertex id. Ties at zero
// degree take the smaller id (all zero-degree candidates end up in the set
// regardless of order). tie_weight must be defined for every candidate.
Region greedy_independent_set(const PairwiseGraph& g, const Region& candidates,
                              const std::function<double(int)>& tie_weight);

namespace detail {
// Same algorithm with the zero-degree tie order flipped (larger id first).
// Exists only so tests can assert the result does not depend on that order.
Region greedy_independent_set_opts(const PairwiseGraph& g, const Region& candidates,
                                   const std::function<double(int)>& tie_weight,
                                   bool zero_tie_largest_id);
}  // namespace detail

}  // namespace smci
