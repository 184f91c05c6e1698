#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "isomat/graph.hpp"
#include "isomat/isotropic.hpp"
#include "isomat/reconstruct.hpp"

namespace isomat {

// ---------------------------------------------------------------------------
// Canonical forms (AHU with centroid rooting).
// ---------------------------------------------------------------------------

namespace detail {

/// AHU code of the subtree at v, entered from parent.
inline std::string ahu_code(const Graph& g, const std::vector<std::size_t>& comp, std::size_t v,
                            std::size_t parent) {
  std::vector<std::string> child_codes;
  for (std::size_t u : g.neighbors(v))
    if (u != parent) child_codes.push_back(ahu_code(g, comp, u, v));
  std::sort(child_codes.begin(), child_codes.end());
  std::string out = "(";
  for (const auto& c : child_codes) out += c;
  out += ")";
  return out;
}

/// Centroid(s) of the tree spanned by comp: vertices minimizing the largest
/// subtree after removal. A tree has one or two centroids.
inline std::vector<std::size_t> centroids(const Graph& g, const std::vector<std::size_t>& comp) {
  std::size_t n = comp.size();
  std::vector<std::size_t> best;
  std::size_t best_score = SIZE_MAX;
  for (std::size_t v : comp) {
    // Largest piece of comp minus v.
    std::size_t worst = 0;
    std::vector<bool> seen(g.vertex_count(), false);
    seen[v] = true;
    for (std::size_t s : g.neighbors(v)) {
      if (seen[s]) continue;
      std::size_t size = 0;
      std::vector<std::size_t> q{s};
      seen[s] = true;
      while (!q.empty()) {
        std::size_t x = q.back();
        q.pop_back();
        ++size;
        for (std::size_t u : g.neighbors(x))
          if (!seen[u]) {
            seen[u] = true;
            q.push_back(u);
          }
      }
      worst = std::max(worst, size);
    }
    (void)n;
    if (worst < best_score) {
      best_score = worst;
      best = {v};
    } else if (worst == best_score) {
      best.push_back(v);
    }
  }
  return best;
}

}  // namespace detail

/// Canonical form of a forest: the sorted multiset of per-tree AHU codes,
/// each tree rooted at its centroid (lexicographic minimum over the one or
/// two centroids).
struct CanonicalForm {
  std::vector<std::string> tree_codes;  // sorted

  friend bool operator==(const CanonicalForm& a, const CanonicalForm& b) {
    return a.tree_codes == b.tree_codes;
  }
  friend bool operator<(const CanonicalForm& a, const CanonicalForm& b) {
    return a.tree_codes < b.tree_codes;
  }
  std::string str() const {
    std::string out;
    for (const auto& c : tree_codes) out += c + "|";
    return out;
  }
};

inline CanonicalForm canonical_form(const Graph& f) {
  require_forest(f, "canonical_form");
  CanonicalForm out;
  auto ids = f.component_ids();
  std::size_t nc = f.vertex_count() == 0 ? 0 : f.component_count();
  for (std::size_t c = 0; c < nc; ++c) {
    std::vector<std::size_t> comp;
    for (std::size_t v = 0; v < f.vertex_count(); ++v)
      if (ids[v] == c) comp.push_back(v);
    std::string best;
    for (std::size_t root : detail::centroids(f, comp)) {
      std::string code = detail::ahu_code(f, comp, root, SIZE_MAX);
      if (best.empty() || code < best) best = code;
    }
    out.tree_codes.push_back(best);
  }
  std::sort(out.tree_codes.begin(), out.tree_codes.end());
  return out;
}

inline bool forests_isomorphic(const Graph& a, const Graph& b) {
  return canonical_form(a) == canonical_form(b);
}

// ---------------------------------------------------------------------------
// Enumeration of unlabeled trees and forests.
// ---------------------------------------------------------------------------

/// All unlabeled trees on n vertices (one representative per isomorphism
/// class), grown by leaf addition with canonical-form deduplication.
/// Deterministic order: sorted by canonical code.
inline std::vector<Graph> enumerate_trees(std::size_t n) {
  if (n < 1 || n > 8) throw std::invalid_argument("enumerate_trees: n must be in [1, 8]");
  std::vector<Graph> current{Graph(1)};
  for (std::size_t k = 2; k <= n; ++k) {
    std::map<CanonicalForm, Graph> next;
    for (const auto& t : current) {
      for (std::size_t v = 0; v < t.vertex_count(); ++v) {
        Graph grown(t.vertex_count() + 1);
        for (const auto& [a, b] : t.edges()) grown.add_edge(a, b);
        grown.add_edge(v, t.vertex_count());
        next.emplace(canonical_form(grown), grown);
      }
    }
    current.clear();
    for (auto& [code, g] : next) current.push_back(std::move(g));
  }
  return current;
}

/// All unlabeled forests on n vertices, assembled from integer partitions of
/// n and multisets of trees of each part size.
inline std::vector<Graph> enumerate_forests(std::size_t n) {
  if (n < 1 || n > 8) throw std::invalid_argument("enumerate_forests: n must be in [1, 8]");
  std::vector<std::vector<Graph>> trees_by_size(n + 1);
  for (std::size_t k = 1; k <= n; ++k) trees_by_size[k] = enumerate_trees(k);

  std::map<CanonicalForm, Graph> out;
  // parts: non-increasing sequence of (size, tree index) choices; to dedup
  // multisets we require (size, index) pairs to be non-increasing too.
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  auto build = [&] {
    std::size_t total = 0;
    for (const auto& [s, i] : chosen) total += s;
    Graph f(total);
    std::size_t base = 0;
    for (const auto& [s, i] : chosen) {
      const Graph& t = trees_by_size[s][i];
      for (const auto& [a, b] : t.edges()) f.add_edge(base + a, base + b);
      base += s;
    }
    out.emplace(canonical_form(f), f);
  };
  auto rec = [&](auto&& self, std::size_t remaining) -> void {
    if (remaining == 0) {
      build();
      return;
    }
    std::size_t max_size = chosen.empty() ? remaining : std::min(remaining, chosen.back().first);
    for (std::size_t s = max_size; s >= 1; --s) {
      std::size_t max_idx = trees_by_size[s].size();
      if (!chosen.empty() && chosen.back().first == s) max_idx = chosen.back().second + 1;
      for (std::size_t i = 0; i < max_idx; ++i) {
        chosen.emplace_back(s, i);
        self(self, remaining - s);
        chosen.pop_back();
      }
    }
  };
  rec(rec, n);
  std::vector<Graph> result;
  for (auto& [code, g] : out) result.push_back(std::move(g));
  return result;
}

/// Uniform-ish random forest on n vertices: a random labeled forest obtained
/// by adding each vertex either isolated or attached to a random earlier
/// vertex, then shuffling labels.
inline Graph random_forest(std::size_t n, std::mt19937& rng) {
  if (n < 1) throw std::invalid_argument("random_forest: n must be >= 1");
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  Graph f(n);
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> attach(0, v);  // v means isolated
    std::size_t target = attach(rng);
    if (target < v) f.add_edge(perm[v], perm[target]);
  }
  return f;
}

// ---------------------------------------------------------------------------
// The exhaustive sweep.
// ---------------------------------------------------------------------------

struct SweepRecord {
  std::size_t n = 0;
  std::size_t id_a = 0;
  std::size_t id_b = 0;
  bool forest_iso = false;
  bool ia_iso = false;
  bool ias_iso = false;
  bool reconstructed = false;
  bool certified = false;
  long long millis = 0;
};

struct SweepReport {
  std::vector<SweepRecord> records;
  bool all_consistent = true;  // the three isomorphism notions agreed everywhere

  std::string str() const {
    std::string out;
    for (const auto& r : records) {
      std::ostringstream line;
      line << r.n << ", " << r.id_a << ", " << r.id_b << ", " << (r.forest_iso ? "yes" : "no")
           << ", " << (r.ia_iso ? "yes" : "no") << ", " << (r.ias_iso ? "yes" : "no") << ", "
           << (r.reconstructed ? "yes" : "no") << ", " << (r.certified ? "yes" : "no") << ", "
           << r.millis << "\n";
      out += line.str();
    }
    return out;
  }
};

/// Checks one pair of forests: graph isomorphism (canonical form), matroid
/// isomorphism for both IA and IAS, and — when isomorphic — reconstruction
/// of a certified graph isomorphism from each matroid isomorphism.
inline SweepRecord sweep_pair(const Graph& a, const Graph& b, std::size_t n, std::size_t id_a,
                              std::size_t id_b) {
  auto start = std::chrono::steady_clock::now();
  SweepRecord rec;
  rec.n = n;
  rec.id_a = id_a;
  rec.id_b = id_b;
  rec.forest_iso = forests_isomorphic(a, b);
  auto fia = find_isomorphism(ia_matroid(a), ia_matroid(b));
  auto fias = find_isomorphism(ias_matroid(a), ias_matroid(b));
  rec.ia_iso = fia.has_value();
  rec.ias_iso = fias.has_value();
  if (fia && fias) {
    VertexMap g1 = reconstruct_forest_iso_ia(a, b, *fia);
    IasReconstruction r2 = reconstruct_forest_iso_ias(a, b, *fias);
    rec.reconstructed = true;
    rec.certified = g1.certified && r2.g.certified && is_graph_isomorphism(a, b, g1) &&
                    is_graph_isomorphism(a, b, r2.g);
  }
  rec.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
                   .count();
  return rec;
}

/// Sweeps all unordered pairs of unlabeled forests with up to n_max vertices.
/// The theorem predicts forest_iso == ia_iso == ias_iso on every pair, with
/// certified reconstructions on the isomorphic ones.
inline SweepReport verify_theorem_main(std::size_t n_max) {
  if (n_max < 1 || n_max > 7)
    throw std::invalid_argument("verify_theorem_main: n_max must be in [1, 7]");
  SweepReport report;
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto forests = enumerate_forests(n);
    for (std::size_t i = 0; i < forests.size(); ++i)
      for (std::size_t j = i; j < forests.size(); ++j) {
        SweepRecord rec = sweep_pair(forests[i], forests[j], n, i, j);
        bool consistent = rec.forest_iso == rec.ia_iso && rec.ia_iso == rec.ias_iso &&
                          (!rec.forest_iso || rec.certified);
        report.all_consistent = report.all_consistent && consistent;
        report.records.push_back(rec);
      }
  }
  return report;
}

/// Same sweep restricted to trees (connected forests), which reach one
/// vertex further at the same cost.
inline SweepReport verify_theorem_main_trees(std::size_t n_max) {
  if (n_max < 1 || n_max > 8)
    throw std::invalid_argument("verify_theorem_main_trees: n_max must be in [1, 8]");
  SweepReport report;
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto trees = enumerate_trees(n);
    for (std::size_t i = 0; i < trees.size(); ++i)
      for (std::size_t j = i; j < trees.size(); ++j) {
        SweepRecord rec = sweep_pair(trees[i], trees[j], n, i, j);
        bool consistent = rec.forest_iso == rec.ia_iso && rec.ia_iso == rec.ias_iso &&
                          (!rec.forest_iso || rec.certified);
        report.all_consistent = report.all_consistent && consistent;
        report.records.push_back(rec);
      }
  }
  return report;
}

}  // namespace isomat
