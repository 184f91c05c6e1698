#pragma once

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "isomat/isotropic.hpp"
#include "isomat/matroid.hpp"

namespace isomat {

using Triple = std::array<ElementLabel, 3>;

inline Triple make_triple(ElementLabel a, ElementLabel b, ElementLabel c) {
  Triple t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

/// Partition of an isotropic matroid's ground set into dependent 3-sets.
struct Triangulation {
  std::vector<Triple> triples;  // each sorted, list sorted: canonical form

  void normalize() {
    for (auto& t : triples) std::sort(t.begin(), t.end());
    std::sort(triples.begin(), triples.end());
  }

  bool contains_triple(const Triple& t) const {
    Triple s = t;
    std::sort(s.begin(), s.end());
    return std::find(triples.begin(), triples.end(), s) != triples.end();
  }

  /// The triple holding a given element.
  const Triple& triple_of(const ElementLabel& l) const {
    for (const auto& t : triples)
      if (std::find(t.begin(), t.end(), l) != t.end()) return t;
    throw std::invalid_argument("Triangulation: element not covered: " + format_label(l));
  }

  friend bool operator==(const Triangulation&, const Triangulation&) = default;
  friend bool operator<(const Triangulation& a, const Triangulation& b) {
    return a.triples < b.triples;
  }
};

enum class TripleShape {
  NotValid,            // independent, or dependent but not covered by its circuits
  Circuit,             // the 3-set itself is a circuit
  UnionOfTwoCircuits,  // e.g. a loop plus a parallel pair
  OtherCovered,        // covered by its circuits but not by two of them
};

/// Shape of a 3-set per the triangulation definition: a triple must be a
/// circuit or a union of two circuits. OtherCovered is flagged for inputs
/// outside the forest cases (it never occurs for forests).
inline TripleShape triple_shape(const BinaryMatroid& m, const Triple& t) {
  std::array<std::uint64_t, 3> col;
  for (int i = 0; i < 3; ++i) col[i] = m.matrix().column_mask(m.ordinal_of(t[i]));
  // Circuits inside a 3-set are loops, parallel pairs, or the whole set.
  std::vector<std::array<bool, 3>> circuits;
  for (int i = 0; i < 3; ++i)
    if (col[i] == 0) {
      std::array<bool, 3> c{};
      c[i] = true;
      circuits.push_back(c);
    }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (col[i] != 0 && col[i] == col[j]) {
        std::array<bool, 3> c{};
        c[i] = c[j] = true;
        circuits.push_back(c);
      }
  if (circuits.empty()) {
    if ((col[0] ^ col[1] ^ col[2]) == 0) return TripleShape::Circuit;
    return TripleShape::NotValid;
  }
  for (std::size_t i = 0; i < circuits.size(); ++i)
    for (std::size_t j = i + 1; j < circuits.size(); ++j) {
      bool all = true;
      for (int k = 0; k < 3; ++k) all = all && (circuits[i][k] || circuits[j][k]);
      if (all) return TripleShape::UnionOfTwoCircuits;
    }
  // Covered by three loop circuits, say. Dependent, but an unexpected shape.
  bool covered = true;
  for (int k = 0; k < 3; ++k) {
    bool hit = false;
    for (const auto& c : circuits) hit = hit || c[k];
    covered = covered && hit;
  }
  return covered ? TripleShape::OtherCovered : TripleShape::NotValid;
}

inline bool triple_is_valid(const BinaryMatroid& m, const Triple& t) {
  return triple_shape(m, t) != TripleShape::NotValid;
}

inline Triangulation vertex_triangulation(const Graph& g) {
  Triangulation out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    auto vt = vertex_triple(v);
    out.triples.push_back(make_triple(vt[0], vt[1], vt[2]));
  }
  out.normalize();
  return out;
}

constexpr std::size_t kDefaultTriangulationBound = 18;

/// Every partition of the ground set into valid triples, each emitted once.
/// Backtracks on the lowest uncovered ordinal, so the order is deterministic.
inline void enumerate_triangulations(const BinaryMatroid& m,
                                     const std::function<bool(const Triangulation&)>& emit,
                                     std::size_t bound = kDefaultTriangulationBound) {
  const std::size_t n = m.size();
  if (n > bound)
    throw ResourceLimitError("enumerate_triangulations: ground set of " + std::to_string(n) +
                             " exceeds bound " + std::to_string(bound));
  if (n % 3 != 0) return;
  // All valid triples by ordinal, grouped by their lowest ordinal.
  std::vector<std::vector<std::array<std::size_t, 3>>> by_low(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        if (triple_is_valid(m, make_triple(m.label_at(a), m.label_at(b), m.label_at(c))))
          by_low[a].push_back({a, b, c});

  std::vector<bool> covered(n, false);
  std::vector<std::array<std::size_t, 3>> chosen;
  bool stop = false;
  auto rec = [&](auto&& self) -> void {
    if (stop) return;
    std::size_t low = 0;
    while (low < n && covered[low]) ++low;
    if (low == n) {
      Triangulation t;
      for (const auto& c : chosen)
        t.triples.push_back(make_triple(m.label_at(c[0]), m.label_at(c[1]), m.label_at(c[2])));
      t.normalize();
      if (!emit(t)) stop = true;
      return;
    }
    for (const auto& c : by_low[low]) {
      if (covered[c[1]] || covered[c[2]]) continue;
      covered[c[0]] = covered[c[1]] = covered[c[2]] = true;
      chosen.push_back(c);
      self(self);
      chosen.pop_back();
      covered[c[0]] = covered[c[1]] = covered[c[2]] = false;
      if (stop) return;
    }
  };
  rec(rec);
}

inline std::vector<Triangulation> all_triangulations(const BinaryMatroid& m,
                                                     std::size_t bound = kDefaultTriangulationBound) {
  std::vector<Triangulation> out;
  enumerate_triangulations(m, [&](const Triangulation& t) {
    out.push_back(t);
    return true;
  }, bound);
  return out;
}

// ---------------------------------------------------------------------------
// Parallel swaps and ps-equivalence.
// ---------------------------------------------------------------------------

inline bool are_parallel(const BinaryMatroid& m, const ElementLabel& x, const ElementLabel& y) {
  if (x == y) return false;
  std::uint64_t cx = m.matrix().column_mask(m.ordinal_of(x));
  std::uint64_t cy = m.matrix().column_mask(m.ordinal_of(y));
  return cx != 0 && cx == cy;
}

inline std::vector<std::pair<ElementLabel, ElementLabel>> parallel_pairs(const BinaryMatroid& m) {
  std::vector<std::pair<ElementLabel, ElementLabel>> out;
  for (const auto& cls : parallel_classes(m))
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j) out.emplace_back(cls[i], cls[j]);
  return out;
}

/// Image of a triangulation under the transposition (xy) of a parallel pair.
inline Triangulation parallel_swap(const BinaryMatroid& m, const Triangulation& t,
                                   const ElementLabel& x, const ElementLabel& y) {
  if (!are_parallel(m, x, y))
    throw std::invalid_argument("parallel_swap: " + format_label(x) + " and " + format_label(y) +
                                " are not parallel");
  Triangulation out;
  for (const auto& tr : t.triples) {
    Triple img = tr;
    for (auto& l : img) {
      if (l == x)
        l = y;
      else if (l == y)
        l = x;
    }
    out.triples.push_back(make_triple(img[0], img[1], img[2]));
  }
  out.normalize();
  return out;
}

constexpr std::size_t kDefaultOrbitCap = 1000000;

struct PsResult {
  enum class Status { Equivalent, NotEquivalent, OrbitCapExceeded } status;
  std::vector<std::pair<ElementLabel, ElementLabel>> swaps;  // witness, in application order
  bool equivalent() const { return status == Status::Equivalent; }
};

/// Breadth-first search over the parallel-swap orbit of `from`. A cap
/// overflow is reported as a distinct status, not as "not equivalent".
inline PsResult ps_equivalent(const BinaryMatroid& m, const Triangulation& from,
                              const Triangulation& to, std::size_t orbit_cap = kDefaultOrbitCap) {
  Triangulation start = from, goal = to;
  start.normalize();
  goal.normalize();
  auto pairs = parallel_pairs(m);
  std::map<Triangulation, std::pair<std::size_t, std::size_t>> seen;  // -> (parent orbit idx, swap idx)
  std::vector<Triangulation> orbit{start};
  seen[start] = {SIZE_MAX, SIZE_MAX};
  auto witness = [&](const Triangulation& t) {
    std::vector<std::pair<ElementLabel, ElementLabel>> swaps;
    Triangulation cur = t;
    while (true) {
      auto [parent, swap_idx] = seen[cur];
      if (parent == SIZE_MAX) break;
      swaps.push_back(pairs[swap_idx]);
      cur = orbit[parent];
    }
    std::reverse(swaps.begin(), swaps.end());
    return swaps;
  };
  if (start == goal) return {PsResult::Status::Equivalent, {}};
  for (std::size_t qi = 0; qi < orbit.size(); ++qi) {
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      Triangulation next = parallel_swap(m, orbit[qi], pairs[pi].first, pairs[pi].second);
      if (seen.count(next)) continue;
      seen[next] = {qi, pi};
      if (next == goal) return {PsResult::Status::Equivalent, witness(next)};
      if (orbit.size() >= orbit_cap) return {PsResult::Status::OrbitCapExceeded, {}};
      orbit.push_back(next);
    }
  }
  return {PsResult::Status::NotEquivalent, {}};
}

/// Full parallel-swap orbit of a triangulation (used to group enumerations
/// into ps-classes without repeating BFS per pair).
inline std::set<Triangulation> ps_orbit(const BinaryMatroid& m, const Triangulation& from,
                                        std::size_t orbit_cap = kDefaultOrbitCap) {
  Triangulation start = from;
  start.normalize();
  auto pairs = parallel_pairs(m);
  std::set<Triangulation> seen{start};
  std::deque<Triangulation> queue{start};
  while (!queue.empty()) {
    Triangulation cur = queue.front();
    queue.pop_front();
    for (const auto& [x, y] : pairs) {
      Triangulation next = parallel_swap(m, cur, x, y);
      if (seen.insert(next).second) {
        if (seen.size() > orbit_cap) throw ResourceLimitError("ps_orbit: orbit cap exceeded");
        queue.push_back(next);
      }
    }
  }
  return seen;
}

// ---------------------------------------------------------------------------
// Full equivalence (automorphism-witnessed).
// ---------------------------------------------------------------------------

/// Searches for a matroid automorphism carrying one triple set onto the
/// other. Backtracks triple-to-triple, with the same element-signature and
/// linear-relation pruning as the general isomorphism search.
inline std::optional<GroundMap> equivalent(const BinaryMatroid& m, const Triangulation& t1,
                                           const Triangulation& t2) {
  if (t1.triples.size() != t2.triples.size()) return std::nullopt;
  const std::size_t k = t1.triples.size();
  auto sig = detail::element_signatures(m);
  auto ordinal = [&](const ElementLabel& l) { return m.ordinal_of(l); };
  auto cols = m.matrix().column_masks();

  std::vector<bool> used(k, false);
  std::vector<std::size_t> triple_img(k, SIZE_MAX);
  GroundMap map;
  std::optional<GroundMap> found;

  auto rec = [&](auto&& self, std::size_t depth, detail::RelationTracker src,
                 detail::RelationTracker tgt) -> void {
    if (found) return;
    if (depth == k) {
      found = map;
      return;
    }
    const Triple& s = t1.triples[depth];
    for (std::size_t ti = 0; ti < k && !found; ++ti) {
      if (used[ti]) continue;
      const Triple& t = t2.triples[ti];
      std::array<std::size_t, 3> perm{0, 1, 2};
      std::sort(perm.begin(), perm.end());
      do {
        detail::RelationTracker src2 = src, tgt2 = tgt;
        bool ok = true;
        for (int e = 0; e < 3 && ok; ++e) {
          std::size_t so = ordinal(s[e]), to = ordinal(t[perm[e]]);
          if (!(sig[so] == sig[to])) {
            ok = false;
            break;
          }
          auto rs = src2.push(cols[so]);
          auto rt = tgt2.push(cols[to]);
          ok = rs.independent == rt.independent &&
               (rs.independent || rs.relation == rt.relation);
        }
        if (!ok) continue;
        used[ti] = true;
        for (int e = 0; e < 3; ++e) map.set(s[e], t[perm[e]]);
        self(self, depth + 1, src2, tgt2);
        used[ti] = false;
      } while (std::next_permutation(perm.begin(), perm.end()) && !found);
    }
  };
  rec(rec, 0, detail::RelationTracker{}, detail::RelationTracker{});
  return found;
}

// ---------------------------------------------------------------------------
// Classification of stubborn 3-circuits (trees with >= 4 vertices).
// ---------------------------------------------------------------------------

struct CircuitTripleClassification {
  enum class Status { PreconditionViolated, Classified } status;
  // When PreconditionViolated: the vertex triple the input swaps into.
  std::optional<Triple> reached_vertex_triple;
  // When Classified:
  enum class Form { PhiPhiChi, PsiPhiPsi } form = Form::PhiPhiChi;
  std::size_t x = 0, y = 0, z = 0;  // z is the degree-2 vertex, x,y its neighbors
  Triple normal_form{};
  std::vector<std::pair<ElementLabel, ElementLabel>> swaps;
};

/// For a 3-circuit of M[IAS(T)] not swap-reachable to a vertex triple: finds
/// the degree-2 vertex z and the swap sequence carrying the circuit to
/// {phi(x),phi(y),chi(z)} or {psi(x),phi(y),psi(z)} (the latter with x a leaf).
inline CircuitTripleClassification classify_nonvertex_circuit_triple(const Graph& tree,
                                                                     const Triple& tau) {
  require_forest(tree, "classify_nonvertex_circuit_triple");
  if (tree.vertex_count() < 4)
    throw std::invalid_argument("classify_nonvertex_circuit_triple: need at least 4 vertices");
  BinaryMatroid m = ias_matroid(tree);
  {
    std::vector<ElementLabel> ls(tau.begin(), tau.end());
    BinaryMatroid r = restrict_to(m, ls);
    if (triple_shape(m, tau) != TripleShape::Circuit)
      throw std::invalid_argument("classify_nonvertex_circuit_triple: input is not a 3-circuit");
  }
  auto pairs = parallel_pairs(m);
  auto is_vertex_triple = [](const Triple& t) {
    return t[0].vertex == t[1].vertex && t[1].vertex == t[2].vertex;
  };
  // BFS over swap images of the 3-set.
  Triple start = make_triple(tau[0], tau[1], tau[2]);
  std::map<Triple, std::pair<std::size_t, std::size_t>> seen;  // -> (parent idx, swap idx)
  std::vector<Triple> order{start};
  seen[start] = {SIZE_MAX, SIZE_MAX};
  auto witness = [&](Triple t) {
    std::vector<std::pair<ElementLabel, ElementLabel>> swaps;
    while (true) {
      auto [parent, si] = seen[t];
      if (parent == SIZE_MAX) break;
      swaps.push_back(pairs[si]);
      t = order[parent];
    }
    std::reverse(swaps.begin(), swaps.end());
    return swaps;
  };
  for (std::size_t qi = 0; qi < order.size(); ++qi) {
    Triple cur = order[qi];
    if (is_vertex_triple(cur)) {
      CircuitTripleClassification out;
      out.status = CircuitTripleClassification::Status::PreconditionViolated;
      out.reached_vertex_triple = cur;
      out.swaps = witness(cur);
      return out;
    }
    for (std::size_t pi = 0; pi < pairs.size(); ++pi) {
      const auto& [x, y] = pairs[pi];
      bool has_x = std::find(cur.begin(), cur.end(), x) != cur.end();
      bool has_y = std::find(cur.begin(), cur.end(), y) != cur.end();
      if (has_x == has_y) continue;
      Triple next = cur;
      for (auto& l : next) {
        if (l == x) l = y;
        else if (l == y) l = x;
      }
      std::sort(next.begin(), next.end());
      if (!seen.count(next)) {
        seen[next] = {qi, pi};
        order.push_back(next);
      }
    }
  }
  // No vertex triple reachable: scan the orbit for the lemma's normal forms.
  auto kinds_of = [](const Triple& t) {
    std::array<LabelKind, 3> ks;
    for (int i = 0; i < 3; ++i) ks[i] = t[i].kind;
    return ks;
  };
  for (const auto& cur : order) {
    auto ks = kinds_of(cur);
    // {phi(x), phi(y), chi(z)}: z degree 2 with neighbors x and y.
    std::vector<std::size_t> phis, psis, chis;
    for (int i = 0; i < 3; ++i) {
      if (ks[i] == LabelKind::Phi) phis.push_back(i);
      if (ks[i] == LabelKind::Psi) psis.push_back(i);
      if (ks[i] == LabelKind::Chi) chis.push_back(i);
    }
    if (phis.size() == 2 && chis.size() == 1) {
      std::size_t x = cur[phis[0]].vertex, y = cur[phis[1]].vertex, z = cur[chis[0]].vertex;
      if (tree.degree(z) == 2 && tree.adjacent(z, x) && tree.adjacent(z, y)) {
        CircuitTripleClassification out;
        out.status = CircuitTripleClassification::Status::Classified;
        out.form = CircuitTripleClassification::Form::PhiPhiChi;
        out.x = x;
        out.y = y;
        out.z = z;
        out.normal_form = cur;
        out.swaps = witness(cur);
        return out;
      }
    }
    if (psis.size() == 2 && phis.size() == 1) {
      // {psi(x), phi(y), psi(z)}: z degree 2 adjacent to x and y, x a leaf.
      for (int a = 0; a < 2; ++a) {
        std::size_t x = cur[psis[a]].vertex, z = cur[psis[1 - a]].vertex, y = cur[phis[0]].vertex;
        if (tree.degree(z) == 2 && tree.adjacent(z, x) && tree.adjacent(z, y) && tree.is_leaf(x)) {
          CircuitTripleClassification out;
          out.status = CircuitTripleClassification::Status::Classified;
          out.form = CircuitTripleClassification::Form::PsiPhiPsi;
          out.x = x;
          out.y = y;
          out.z = z;
          out.normal_form = cur;
          out.swaps = witness(cur);
          return out;
        }
      }
    }
  }
  throw std::logic_error("classify_nonvertex_circuit_triple: no normal form reachable");
}

// --- triangulation text format: one triple per line, labels comma-separated ---

inline std::string format_triangulation(const Triangulation& t) {
  std::string out;
  for (const auto& tr : t.triples)
    out += format_label(tr[0]) + "," + format_label(tr[1]) + "," + format_label(tr[2]) + "\n";
  return out;
}

inline Triangulation parse_triangulation(std::istream& in) {
  Triangulation t;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<ElementLabel> labels;
    std::string tok;
    while (std::getline(ls, tok, ',')) {
      tok.erase(0, tok.find_first_not_of(" \t"));
      tok.erase(tok.find_last_not_of(" \t\r") + 1);
      labels.push_back(parse_label(tok));
    }
    if (labels.size() != 3)
      throw std::invalid_argument("parse_triangulation: expected 3 labels per line: " + line);
    t.triples.push_back(make_triple(labels[0], labels[1], labels[2]));
  }
  t.normalize();
  return t;
}

inline Triangulation parse_triangulation(const std::string& text) {
  std::istringstream in(text);
  return parse_triangulation(in);
}

}  // namespace isomat
