#pragma once

#include <cstddef>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "isomat/gf2.hpp"

namespace isomat {

/// Simple graph with a symmetric, zero-diagonal GF(2) adjacency matrix.
/// Forests are the subclass with edge count = n - #components; operations
/// that only make sense for forests check is_forest() explicitly.
class Graph {
 public:
  explicit Graph(std::size_t n) : n_(n), adj_(n, n) {}

  std::size_t vertex_count() const { return n_; }

  void add_edge(std::size_t u, std::size_t v) {
    if (u >= n_ || v >= n_) throw std::invalid_argument("add_edge: vertex out of range");
    if (u == v) throw std::invalid_argument("add_edge: self-loop rejected");
    if (adj_.get(u, v)) throw std::invalid_argument("add_edge: duplicate edge rejected");
    adj_.set(u, v, true);
    adj_.set(v, u, true);
  }

  bool adjacent(std::size_t u, std::size_t v) const { return adj_.get(u, v); }

  const BitMatrix& adjacency() const { return adj_; }

  std::size_t degree(std::size_t v) const {
    std::size_t d = 0;
    for (std::size_t u = 0; u < n_; ++u)
      if (adj_.get(v, u)) ++d;
    return d;
  }

  std::vector<std::size_t> neighbors(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < n_; ++u)
      if (adj_.get(v, u)) out.push_back(u);
    return out;
  }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (std::size_t u = 0; u < n_; ++u)
      for (std::size_t v = u + 1; v < n_; ++v)
        if (adj_.get(u, v)) ++m;
    return m;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 0; u < n_; ++u)
      for (std::size_t v = u + 1; v < n_; ++v)
        if (adj_.get(u, v)) out.emplace_back(u, v);
    return out;
  }

  /// Connected-component index per vertex, components numbered by their
  /// lowest vertex in increasing order.
  std::vector<std::size_t> component_ids() const {
    std::vector<std::size_t> id(n_, SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t s = 0; s < n_; ++s) {
      if (id[s] != SIZE_MAX) continue;
      std::vector<std::size_t> stack{s};
      id[s] = next;
      while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t u = 0; u < n_; ++u)
          if (adj_.get(v, u) && id[u] == SIZE_MAX) {
            id[u] = next;
            stack.push_back(u);
          }
      }
      ++next;
    }
    return id;
  }

  std::size_t component_count() const {
    auto ids = component_ids();
    std::size_t mx = 0;
    for (std::size_t i : ids) mx = std::max(mx, i + 1);
    return n_ == 0 ? 0 : mx;
  }

  bool is_forest() const { return edge_count() + component_count() == n_; }

  bool is_leaf(std::size_t v) const { return degree(v) == 1; }

  /// BFS distances from v; SIZE_MAX for unreachable vertices.
  std::vector<std::size_t> distances_from(std::size_t v) const {
    std::vector<std::size_t> d(n_, SIZE_MAX);
    std::vector<std::size_t> queue{v};
    d[v] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::size_t x = queue[qi];
      for (std::size_t u = 0; u < n_; ++u)
        if (adj_.get(x, u) && d[u] == SIZE_MAX) {
          d[u] = d[x] + 1;
          queue.push_back(u);
        }
    }
    return d;
  }

  /// Induced subgraph on the kept vertices (in increasing original order).
  /// old_ids[i] gives the original index of new vertex i.
  Graph induced(const std::vector<std::size_t>& keep, std::vector<std::size_t>* old_ids = nullptr) const {
    Graph out(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
      for (std::size_t j = i + 1; j < keep.size(); ++j)
        if (adj_.get(keep[i], keep[j])) out.add_edge(i, j);
    if (old_ids) *old_ids = keep;
    return out;
  }

  Graph remove_vertex(std::size_t v, std::vector<std::size_t>* old_ids = nullptr) const {
    std::vector<std::size_t> keep;
    for (std::size_t u = 0; u < n_; ++u)
      if (u != v) keep.push_back(u);
    return induced(keep, old_ids);
  }

  bool operator==(const Graph& o) const { return n_ == o.n_ && adj_ == o.adj_; }

  // Common small graphs, for fixtures and tests.
  static Graph path(std::size_t n) {
    Graph g(n);
    for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
  }
  static Graph cycle(std::size_t n) {
    Graph g = path(n);
    if (n >= 3) g.add_edge(n - 1, 0);
    return g;
  }
  static Graph star(std::size_t leaves) {
    Graph g(leaves + 1);
    for (std::size_t i = 1; i <= leaves; ++i) g.add_edge(0, i);
    return g;
  }

 private:
  std::size_t n_;
  BitMatrix adj_;
};

// --- graph file format: "n m", then m lines "u v", '#' starts a comment ---

inline Graph parse_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_data_line = [&](std::string& out) -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) {
        out = line;
        return true;
      }
    }
    return false;
  };
  std::string header;
  if (!next_data_line(header)) throw std::invalid_argument("parse_graph: empty input");
  std::istringstream hs(header);
  std::size_t n, m;
  if (!(hs >> n >> m))
    throw std::invalid_argument("parse_graph: bad header at line " + std::to_string(lineno));
  Graph g(n);
  for (std::size_t e = 0; e < m; ++e) {
    std::string el;
    if (!next_data_line(el))
      throw std::invalid_argument("parse_graph: expected " + std::to_string(m) + " edges");
    std::istringstream es(el);
    std::size_t u, v;
    if (!(es >> u >> v))
      throw std::invalid_argument("parse_graph: bad edge at line " + std::to_string(lineno));
    try {
      g.add_edge(u, v);
    } catch (const std::invalid_argument& ex) {
      throw std::invalid_argument(std::string(ex.what()) + " at line " + std::to_string(lineno));
    }
  }
  return g;
}

inline Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

inline std::string format_graph(const Graph& g) {
  std::ostringstream out;
  auto es = g.edges();
  out << g.vertex_count() << ' ' << es.size() << '\n';
  for (auto [u, v] : es) out << u << ' ' << v << '\n';
  return out.str();
}

}  // namespace isomat
