#include "smci/graph.hpp"

#include <algorithm>
#include <limits>

#include "smci/errors.hpp"

namespace smci {

PairwiseGraph::PairwiseGraph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 0) throw ArgumentError("vertex count must be nonnegative");
  for (Edge& e : edges) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v)
      throw ArgumentError("self loop at vertex " + std::to_string(e.u));
    if (e.u < 0 || e.v >= n)
      throw ArgumentError("edge (" + std::to_string(e.u) + "," +
                          std::to_string(e.v) + ") out of range for n=" +
                          std::to_string(n));
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) {
              return a.u != b.u ? a.u < b.u : a.v < b.v;
            });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] == edges[i - 1])
      throw ArgumentError("duplicate edge (" + std::to_string(edges[i].u) +
                          "," + std::to_string(edges[i].v) + ")");
  }
  edges_ = std::move(edges);
  adj_.resize(n_);
  for (const Edge& e : edges_) {
    adj_[e.u].push_back(e.v);
    adj_[e.v].push_back(e.u);
  }
  // Lexicographic edge order yields ascending adjacency lists already, but
  // sort defensively so the invariant never depends on that argument.
  for (auto& nbrs : adj_) std::sort(nbrs.begin(), nbrs.end());
}

void PairwiseGraph::check_vertex(int i) const {
  if (i < 0 || i >= n_)
    throw ArgumentError("vertex " + std::to_string(i) + " out of range for n=" +
                        std::to_string(n_));
}

const std::vector<int>& PairwiseGraph::neighbors(int i) const {
  check_vertex(i);
  return adj_[i];
}

int PairwiseGraph::edge_index(int i, int j) const {
  check_vertex(i);
  check_vertex(j);
  if (i == j) return -1;
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{i, j},
                             [](const Edge& a, const Edge& b) {
                               return a.u != b.u ? a.u < b.u : a.v < b.v;
                             });
  if (it == edges_.end() || !(*it == Edge{i, j})) return -1;
  return static_cast<int>(it - edges_.begin());
}

PairwiseGraph PairwiseGraph::grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw ArgumentError("grid dimensions must be positive");
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int id = r * cols + c;
      if (c + 1 < cols) edges.push_back({id, id + 1});
      if (r + 1 < rows) edges.push_back({id, id + cols});
    }
  }
  return PairwiseGraph(rows * cols, std::move(edges));
}

PairwiseGraph PairwiseGraph::random(int n, double p, RandomStream& rng) {
  if (p < 0.0 || p > 1.0) throw ArgumentError("edge probability must be in [0,1]");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.u01() < p) edges.push_back({i, j});
  return PairwiseGraph(n, std::move(edges));
}

PairwiseGraph PairwiseGraph::complete(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  return PairwiseGraph(n, std::move(edges));
}

Region::Region(std::vector<int> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Region::Region(std::initializer_list<int> members)
    : Region(std::vector<int>(members)) {}

bool Region::contains(int v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

bool Region::is_subset_of(const Region& other) const {
  return std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

Region Region::unioned(const Region& other) const {
  std::vector<int> out;
  out.reserve(members_.size() + other.members_.size());
  std::set_union(members_.begin(), members_.end(), other.members_.begin(),
                 other.members_.end(), std::back_inserter(out));
  return Region(std::move(out));
}

Region Region::difference(const Region& other) const {
  std::vector<int> out;
  std::set_difference(members_.begin(), members_.end(), other.members_.begin(),
                      other.members_.end(), std::back_inserter(out));
  return Region(std::move(out));
}

namespace {

void check_region_in_graph(const PairwiseGraph& g, const Region& r,
                           const char* what) {
  for (int v : r) {
    if (v < 0 || v >= g.num_vertices())
      throw ArgumentError(std::string(what) + " contains vertex " +
                          std::to_string(v) + " out of range for n=" +
                          std::to_string(g.num_vertices()));
  }
}

}  // namespace

Region neighborhood_k(const PairwiseGraph& g, const Region& t, int k) {
  check_region_in_graph(g, t, "target region");
  if (k < 0) throw ArgumentError("neighborhood order must be nonnegative");
  if (k == 0) return t;
  std::vector<char> reached(g.num_vertices(), 0);
  for (int v : t) reached[v] = 1;
  std::vector<int> frontier(t.members());
  std::vector<int> next;
  for (int step = 0; step < k; ++step) {
    next.clear();
    for (int v : frontier) {
      for (int nb : g.neighbors(v)) {
        if (!reached[nb]) {
          reached[nb] = 1;
          next.push_back(nb);
        }
      }
    }
    frontier = next;
    if (frontier.empty()) break;
  }
  return Region(std::move(frontier));
}

Region closed_region_k(const PairwiseGraph& g, const Region& t, int k) {
  check_region_in_graph(g, t, "target region");
  if (k < 0) throw ArgumentError("neighborhood order must be nonnegative");
  std::vector<char> reached(g.num_vertices(), 0);
  std::vector<int> all(t.members());
  for (int v : all) reached[v] = 1;
  std::vector<int> frontier(t.members());
  std::vector<int> next;
  for (int step = 0; step < k && !frontier.empty(); ++step) {
    next.clear();
    for (int v : frontier) {
      for (int nb : g.neighbors(v)) {
        if (!reached[nb]) {
          reached[nb] = 1;
          next.push_back(nb);
          all.push_back(nb);
        }
      }
    }
    frontier = next;
  }
  return Region(std::move(all));
}

Region boundary(const PairwiseGraph& g, const Region& a) {
  check_region_in_graph(g, a, "region");
  std::vector<char> inside(g.num_vertices(), 0);
  for (int v : a) inside[v] = 1;
  std::vector<char> seen(g.num_vertices(), 0);
  std::vector<int> out;
  for (int v : a) {
    for (int nb : g.neighbors(v)) {
      if (!inside[nb] && !seen[nb]) {
        seen[nb] = 1;
        out.push_back(nb);
      }
    }
  }
  return Region(std::move(out));
}

namespace detail {

Region greedy_independent_set_opts(const PairwiseGraph& g, const Region& candidates,
                                   const std::function<double(int)>& tie_weight,
                                   bool zero_tie_largest_id) {
  check_region_in_graph(g, candidates, "candidate region");
  if (!tie_weight) throw ArgumentError("tie_weight must be callable");
  const std::vector<int>& members = candidates.members();
  std::vector<char> active(g.num_vertices(), 0);
  for (int v : members) active[v] = 1;
  std::vector<int> deg(g.num_vertices(), 0);
  for (int v : members)
    for (int nb : g.neighbors(v))
      if (active[nb]) ++deg[v];

  std::size_t remaining = members.size();
  std::vector<int> picked;
  std::vector<int> dropped;
  while (remaining > 0) {
    int best = -1;
    int best_deg = std::numeric_limits<int>::max();
    double best_w = 0.0;
    for (int v : members) {
      if (!active[v]) continue;
      int d = deg[v];
      if (d < best_deg) {
        best = v;
        best_deg = d;
        best_w = tie_weight(v);
      } else if (d == best_deg) {
        if (d > 0) {
          double w = tie_weight(v);
          if (w > best_w) {
            best = v;
            best_w = w;
          }
        } else if (zero_tie_largest_id) {
          best = v;
        }
      }
    }
    picked.push_back(best);
    dropped.clear();
    dropped.push_back(best);
    for (int nb : g.neighbors(best))
      if (active[nb]) dropped.push_back(nb);
    for (int v : dropped) {
      active[v] = 0;
      --remaining;
    }
    for (int v : dropped)
      for (int nb : g.neighbors(v))
        if (active[nb]) --deg[nb];
  }
  return Region(std::move(picked));
}

}  // namespace detail

Region greedy_independent_set(const PairwiseGraph& g, const Region& candidates,
                              const std::function<double(int)>& tie_weight) {
  return detail::greedy_independent_set_opts(g, candidates, tie_weight, false);
}

}  // namespace smci
