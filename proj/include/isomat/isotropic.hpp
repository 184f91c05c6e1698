#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "isomat/graph.hpp"
#include "isomat/matroid.hpp"

namespace isomat {

/// M[IA(G)]: matroid of [I | A(G)], phi labels on the identity block and chi
/// labels on the adjacency block, both in vertex order.
inline BinaryMatroid ia_matroid(const Graph& g) {
  const std::size_t n = g.vertex_count();
  BitMatrix m(n, 2 * n);
  std::vector<ElementLabel> labels;
  for (std::size_t v = 0; v < n; ++v) {
    m.set(v, v, true);
    labels.push_back(ElementLabel::phi(v));
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u)
      if (g.adjacency().get(u, v)) m.set(u, n + v, true);
    labels.push_back(ElementLabel::chi(v));
  }
  return BinaryMatroid(std::move(m), std::move(labels));
}

/// M[IAS(G)]: matroid of [I | A(G) | I+A(G)], phi/chi/psi per block.
inline BinaryMatroid ias_matroid(const Graph& g) {
  const std::size_t n = g.vertex_count();
  BitMatrix m(n, 3 * n);
  std::vector<ElementLabel> labels;
  for (std::size_t v = 0; v < n; ++v) {
    m.set(v, v, true);
    labels.push_back(ElementLabel::phi(v));
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u)
      if (g.adjacency().get(u, v)) m.set(u, n + v, true);
    labels.push_back(ElementLabel::chi(v));
  }
  for (std::size_t v = 0; v < n; ++v) {
    m.set(v, 2 * n + v, true);
    for (std::size_t u = 0; u < n; ++u)
      if (g.adjacency().get(u, v)) m.set(u, 2 * n + v, !m.get(u, 2 * n + v));
    labels.push_back(ElementLabel::psi(v));
  }
  return BinaryMatroid(std::move(m), std::move(labels));
}

inline std::vector<ElementLabel> vertex_triple(std::size_t v) {
  return {ElementLabel::phi(v), ElementLabel::chi(v), ElementLabel::psi(v)};
}

/// {chi(v)} plus phi(w) for each neighbor w. A circuit of M[IA(F)] when F is
/// a forest.
inline std::vector<ElementLabel> neighborhood_circuit(const Graph& f, std::size_t v) {
  if (v >= f.vertex_count()) throw std::invalid_argument("neighborhood_circuit: vertex out of range");
  std::vector<ElementLabel> out{ElementLabel::chi(v)};
  for (std::size_t w : f.neighbors(v)) out.push_back(ElementLabel::phi(w));
  return out;
}

inline void require_forest(const Graph& g, const char* who) {
  if (!g.is_forest()) throw std::invalid_argument(std::string(who) + ": input is not a forest");
}

// ---------------------------------------------------------------------------
// Parallel classification for M[IAS(F)] of a forest.
// ---------------------------------------------------------------------------

enum class ParallelCase {
  IsolatedPhiPsi,   // phi(v) ~ psi(v), v isolated
  LeafChiPhi,       // chi(v) ~ phi(w), v a leaf at w
  SharedLeafChiChi, // chi(v1) ~ chi(v2), leaves sharing a neighbor
  EdgePsiPsi,       // psi(v) ~ psi(w), two-vertex connected component
};

inline const char* parallel_case_name(ParallelCase c) {
  switch (c) {
    case ParallelCase::IsolatedPhiPsi: return "isolated-phi-psi";
    case ParallelCase::LeafChiPhi: return "leaf-chi-phi";
    case ParallelCase::SharedLeafChiChi: return "shared-leaf-chi-chi";
    default: return "edge-psi-psi";
  }
}

struct ClassifiedParallel {
  ElementLabel a, b;
  ParallelCase which;
};

struct ParallelReport {
  std::vector<ClassifiedParallel> classified;
  std::vector<std::pair<ElementLabel, ElementLabel>> unclassified;
  bool complete() const { return unclassified.empty(); }
};

/// Assigns every parallel pair of M[IAS(F)] to one of the four structural
/// cases. An unclassified pair would falsify the classification, so it is
/// reported rather than dropped.
inline ParallelReport classify_parallels(const Graph& f) {
  require_forest(f, "classify_parallels");
  ParallelReport report;
  BinaryMatroid m = ias_matroid(f);
  auto try_classify = [&](const ElementLabel& a,
                          const ElementLabel& b) -> std::optional<ParallelCase> {
    // Normalize so the case tests see a fixed kind order.
    ElementLabel x = a, y = b;
    if (static_cast<int>(y.kind) < static_cast<int>(x.kind)) std::swap(x, y);
    if (x.kind == LabelKind::Phi && y.kind == LabelKind::Psi && x.vertex == y.vertex &&
        f.degree(x.vertex) == 0)
      return ParallelCase::IsolatedPhiPsi;
    if (x.kind == LabelKind::Phi && y.kind == LabelKind::Chi && f.is_leaf(y.vertex) &&
        f.adjacent(y.vertex, x.vertex))
      return ParallelCase::LeafChiPhi;
    if (x.kind == LabelKind::Chi && y.kind == LabelKind::Chi && f.is_leaf(x.vertex) &&
        f.is_leaf(y.vertex)) {
      auto na = f.neighbors(x.vertex), nb = f.neighbors(y.vertex);
      if (na.size() == 1 && na == nb) return ParallelCase::SharedLeafChiChi;
    }
    if (x.kind == LabelKind::Psi && y.kind == LabelKind::Psi && f.adjacent(x.vertex, y.vertex) &&
        f.degree(x.vertex) == 1 && f.degree(y.vertex) == 1)
      return ParallelCase::EdgePsiPsi;
    return std::nullopt;
  };
  for (const auto& cls : parallel_classes(m)) {
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j) {
        if (auto c = try_classify(cls[i], cls[j]))
          report.classified.push_back({cls[i], cls[j], *c});
        else
          report.unclassified.emplace_back(cls[i], cls[j]);
      }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Component structure of M[IA(F)] for a forest.
// ---------------------------------------------------------------------------

struct IaComponentPair {
  std::vector<std::size_t> vertices;       // the connected component of F
  std::vector<ElementLabel> phi_side;      // contains phi(v) for the base vertex
  std::vector<ElementLabel> chi_side;      // the complementary matroid component
  GroundMap duality_witness;               // phi_side element at v -> chi_side element at v
};

/// For each connected component C of a forest: the two matroid components of
/// M[IA(F)] living over C (split by distance parity from C's lowest vertex)
/// and the vertex-indexed bijection under which they are duals.
inline std::vector<IaComponentPair> ia_component_structure(const Graph& f) {
  require_forest(f, "ia_component_structure");
  std::vector<IaComponentPair> out;
  auto comp_ids = f.component_ids();
  std::size_t comp_count = f.vertex_count() == 0 ? 0 : *std::max_element(comp_ids.begin(), comp_ids.end()) + 1;
  for (std::size_t c = 0; c < comp_count; ++c) {
    IaComponentPair pair;
    for (std::size_t v = 0; v < f.vertex_count(); ++v)
      if (comp_ids[v] == c) pair.vertices.push_back(v);
    std::size_t base = pair.vertices.front();
    auto dist = f.distances_from(base);
    for (std::size_t v : pair.vertices) {
      bool even = dist[v] % 2 == 0;
      // phi side: phi at even distance, chi at odd. chi side: the other way.
      ElementLabel on_phi_side = even ? ElementLabel::phi(v) : ElementLabel::chi(v);
      ElementLabel on_chi_side = even ? ElementLabel::chi(v) : ElementLabel::phi(v);
      pair.phi_side.push_back(on_phi_side);
      pair.chi_side.push_back(on_chi_side);
      pair.duality_witness.add(on_phi_side, on_chi_side);
    }
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace isomat
