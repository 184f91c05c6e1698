#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "isomat/gf2.hpp"

namespace isomat {

/// Thrown when a search exceeds a configured bound (orbit caps, automorphism
/// caps). Distinct from invalid_argument so callers can map it to the
/// resource-cap exit code.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LabelKind { Phi, Chi, Psi, Plain };

/// Ground-set element of a labeled binary matroid. Identity is (kind, vertex);
/// for Plain labels the vertex slot holds the originating column index.
/// The ordinal is the element's current column in its matroid's matrix.
struct ElementLabel {
  LabelKind kind = LabelKind::Plain;
  std::size_t vertex = 0;
  std::size_t ordinal = 0;

  static ElementLabel phi(std::size_t v) { return {LabelKind::Phi, v, 0}; }
  static ElementLabel chi(std::size_t v) { return {LabelKind::Chi, v, 0}; }
  static ElementLabel psi(std::size_t v) { return {LabelKind::Psi, v, 0}; }
  static ElementLabel plain(std::size_t col) { return {LabelKind::Plain, col, 0}; }

  friend bool operator==(const ElementLabel& a, const ElementLabel& b) {
    return a.kind == b.kind && a.vertex == b.vertex;
  }
  friend bool operator!=(const ElementLabel& a, const ElementLabel& b) { return !(a == b); }
  friend bool operator<(const ElementLabel& a, const ElementLabel& b) {
    return std::tie(a.kind, a.vertex) < std::tie(b.kind, b.vertex);
  }
};

inline std::string format_label(const ElementLabel& l) {
  switch (l.kind) {
    case LabelKind::Phi: return "phi:" + std::to_string(l.vertex);
    case LabelKind::Chi: return "chi:" + std::to_string(l.vertex);
    case LabelKind::Psi: return "psi:" + std::to_string(l.vertex);
    default: return "col:" + std::to_string(l.vertex);
  }
}

inline ElementLabel parse_label(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("parse_label: missing ':' in " + s);
  std::string kind = s.substr(0, colon);
  std::size_t v = 0;
  try {
    v = std::stoul(s.substr(colon + 1));
  } catch (...) {
    throw std::invalid_argument("parse_label: bad index in " + s);
  }
  if (kind == "phi") return ElementLabel::phi(v);
  if (kind == "chi") return ElementLabel::chi(v);
  if (kind == "psi") return ElementLabel::psi(v);
  if (kind == "col") return ElementLabel::plain(v);
  throw std::invalid_argument("parse_label: unknown kind " + kind);
}

/// A binary matroid: a GF(2) matrix plus one label per column. All
/// dependence queries route through the columns.
class BinaryMatroid {
 public:
  BinaryMatroid() = default;

  BinaryMatroid(BitMatrix matrix, std::vector<ElementLabel> labels)
      : matrix_(std::move(matrix)), labels_(std::move(labels)) {
    if (labels_.size() != matrix_.cols())
      throw std::invalid_argument("BinaryMatroid: label count != column count");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      labels_[i].ordinal = i;
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j])
          throw std::invalid_argument("BinaryMatroid: duplicate label " + format_label(labels_[i]));
    }
  }

  /// All labels taken as-is from the columns, as plain column elements.
  static BinaryMatroid from_matrix(BitMatrix matrix) {
    std::vector<ElementLabel> labels;
    for (std::size_t j = 0; j < matrix.cols(); ++j) labels.push_back(ElementLabel::plain(j));
    return BinaryMatroid(std::move(matrix), std::move(labels));
  }

  std::size_t size() const { return labels_.size(); }
  const BitMatrix& matrix() const { return matrix_; }
  const std::vector<ElementLabel>& ground() const { return labels_; }
  const ElementLabel& label_at(std::size_t ordinal) const { return labels_.at(ordinal); }

  std::size_t ordinal_of(const ElementLabel& l) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == l) return i;
    throw std::invalid_argument("unknown label " + format_label(l));
  }

  bool contains(const ElementLabel& l) const {
    for (const auto& x : labels_)
      if (x == l) return true;
    return false;
  }

  bool dependent(const std::vector<ElementLabel>& subset) const {
    std::vector<std::size_t> idx;
    for (const auto& l : subset) idx.push_back(ordinal_of(l));
    return is_dependent_columns(matrix_, idx);
  }

 private:
  BitMatrix matrix_;
  std::vector<ElementLabel> labels_;
};

/// Bijection between ground sets, the currency of isomorphism and
/// automorphism results.
class GroundMap {
 public:
  GroundMap() = default;

  static GroundMap identity_on(const BinaryMatroid& m) {
    GroundMap f;
    for (const auto& l : m.ground()) f.add(l, l);
    return f;
  }

  void add(const ElementLabel& from, const ElementLabel& to) {
    if (fwd_.count(from)) throw std::invalid_argument("GroundMap: duplicate source " + format_label(from));
    for (const auto& [s, t] : fwd_)
      if (t == to) throw std::invalid_argument("GroundMap: duplicate target " + format_label(to));
    fwd_[from] = to;
  }

  void set(const ElementLabel& from, const ElementLabel& to) { fwd_[from] = to; }

  std::size_t size() const { return fwd_.size(); }

  bool defined_on(const ElementLabel& l) const { return fwd_.count(l) != 0; }

  const ElementLabel& apply(const ElementLabel& l) const {
    auto it = fwd_.find(l);
    if (it == fwd_.end()) throw std::invalid_argument("GroundMap: undefined on " + format_label(l));
    return it->second;
  }

  std::optional<ElementLabel> preimage(const ElementLabel& l) const {
    for (const auto& [s, t] : fwd_)
      if (t == l) return s;
    return std::nullopt;
  }

  GroundMap inverse() const {
    GroundMap out;
    for (const auto& [s, t] : fwd_) out.add(t, s);
    return out;
  }

  /// (outer ∘ *this): x -> outer(this(x)).
  GroundMap then(const GroundMap& outer) const {
    GroundMap out;
    for (const auto& [s, t] : fwd_) out.add(s, outer.apply(t));
    return out;
  }

  GroundMap restricted_to(const std::vector<ElementLabel>& domain) const {
    GroundMap out;
    for (const auto& l : domain) out.add(l, apply(l));
    return out;
  }

  const std::map<ElementLabel, ElementLabel>& pairs() const { return fwd_; }

  bool is_bijection_between(const BinaryMatroid& a, const BinaryMatroid& b) const {
    if (fwd_.size() != a.size() || a.size() != b.size()) return false;
    std::vector<bool> hit(b.size(), false);
    for (const auto& l : a.ground()) {
      auto it = fwd_.find(l);
      if (it == fwd_.end() || !b.contains(it->second)) return false;
      std::size_t t = b.ordinal_of(it->second);
      if (hit[t]) return false;
      hit[t] = true;
    }
    return true;
  }

 private:
  std::map<ElementLabel, ElementLabel> fwd_;
};

inline std::string format_ground_map(const GroundMap& f) {
  std::string out;
  for (const auto& [s, t] : f.pairs()) out += format_label(s) + " -> " + format_label(t) + "\n";
  return out;
}

inline GroundMap parse_ground_map(std::istream& in) {
  GroundMap f;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string a, arrow, b;
    if (!(ls >> a)) continue;
    if (!(ls >> arrow >> b) || arrow != "->")
      throw std::invalid_argument("parse_ground_map: expected '<label> -> <label>', got: " + line);
    f.add(parse_label(a), parse_label(b));
  }
  return f;
}

inline GroundMap parse_ground_map(const std::string& text) {
  std::istringstream in(text);
  return parse_ground_map(in);
}

// ---------------------------------------------------------------------------
// Dependence oracle: precomputed independence of every subset (desk scale).
// ---------------------------------------------------------------------------

constexpr std::size_t kOracleMaxElements = 26;

class DependenceOracle {
 public:
  explicit DependenceOracle(const BinaryMatroid& m) : n_(m.size()) {
    if (n_ > kOracleMaxElements)
      throw ResourceLimitError("DependenceOracle: ground set larger than " +
                               std::to_string(kOracleMaxElements));
    cols_ = m.matrix().column_masks();
    independent_.assign(std::size_t{1} << n_, false);
    Eliminator e;
    grow(0, e, 0);
  }

  std::size_t size() const { return n_; }
  bool independent(std::uint32_t mask) const { return independent_[mask]; }
  bool dependent(std::uint32_t mask) const { return mask != 0 && !independent_[mask]; }
  const std::vector<std::uint32_t>& independent_sets() const { return sets_; }

  bool is_circuit(std::uint32_t mask) const {
    if (!dependent(mask)) return false;
    for (std::uint32_t m = mask; m;) {
      std::uint32_t bit = m & (~m + 1);
      if (!independent_[mask ^ bit]) return false;
      m ^= bit;
    }
    return true;
  }

 private:
  void grow(std::size_t next, Eliminator& e, std::uint32_t mask) {
    independent_[mask] = true;
    sets_.push_back(mask);
    for (std::size_t j = next; j < n_; ++j) {
      Eliminator saved = e;
      if (e.insert(cols_[j]))
        grow(j + 1, e, mask | (std::uint32_t{1} << j));
      e = saved;
    }
  }

  std::size_t n_;
  std::vector<std::uint64_t> cols_;
  std::vector<bool> independent_;
  std::vector<std::uint32_t> sets_;
};

// ---------------------------------------------------------------------------
// Structural queries.
// ---------------------------------------------------------------------------

inline std::vector<ElementLabel> loops(const BinaryMatroid& m) {
  std::vector<ElementLabel> out;
  auto cols = m.matrix().column_masks();
  for (std::size_t j = 0; j < m.size(); ++j)
    if (cols[j] == 0) out.push_back(m.label_at(j));
  return out;
}

inline std::vector<ElementLabel> coloops(const BinaryMatroid& m) {
  std::vector<ElementLabel> out;
  auto cols = m.matrix().column_masks();
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (cols[j] == 0) continue;
    Eliminator e;
    for (std::size_t k = 0; k < m.size(); ++k)
      if (k != j) e.insert(cols[k]);
    if (e.reduce(cols[j]) != 0) out.push_back(m.label_at(j));
  }
  return out;
}

/// Groups equal nonzero columns. Singleton classes are included, so the
/// classes partition the non-loop elements.
inline std::vector<std::vector<ElementLabel>> parallel_classes(const BinaryMatroid& m) {
  auto cols = m.matrix().column_masks();
  std::map<std::uint64_t, std::vector<ElementLabel>> groups;
  for (std::size_t j = 0; j < m.size(); ++j)
    if (cols[j] != 0) groups[cols[j]].push_back(m.label_at(j));
  std::vector<std::vector<ElementLabel>> out;
  for (auto& [mask, g] : groups)
    if (g.size() >= 2) out.push_back(std::move(g));  // a parallel class has at least two elements
  // Deterministic order: by lowest ordinal in the class.
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return m.ordinal_of(a.front()) < m.ordinal_of(b.front());
  });
  return out;
}

/// All circuits of size <= k, each as a sorted list of ordinals.
inline std::vector<std::vector<std::size_t>> circuit_ordinals_up_to(const BinaryMatroid& m,
                                                                   std::size_t k) {
  if (k < 1) throw std::invalid_argument("circuits_up_to: k must be >= 1");
  DependenceOracle oracle(m);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> pick;
  auto rec = [&](auto&& self, std::size_t next, std::uint32_t mask) -> void {
    if (!pick.empty() && oracle.dependent(mask)) {
      if (oracle.is_circuit(mask)) out.push_back(pick);
      return;  // supersets of a dependent set are never circuits
    }
    if (pick.size() == k) return;
    for (std::size_t j = next; j < m.size(); ++j) {
      pick.push_back(j);
      self(self, j + 1, mask | (std::uint32_t{1} << j));
      pick.pop_back();
    }
  };
  rec(rec, 0, 0);
  return out;
}

inline std::vector<std::vector<ElementLabel>> circuits_up_to(const BinaryMatroid& m, std::size_t k) {
  std::vector<std::vector<ElementLabel>> out;
  for (const auto& c : circuit_ordinals_up_to(m, k)) {
    std::vector<ElementLabel> labels;
    for (std::size_t j : c) labels.push_back(m.label_at(j));
    out.push_back(std::move(labels));
  }
  return out;
}

/// Component id per ordinal, via fundamental circuits of the greedy basis:
/// x ~ y when some circuit contains both, and the transitive closure over
/// fundamental circuits of any one basis reaches exactly the components.
inline std::vector<std::size_t> component_ids_by_ordinal(const BinaryMatroid& m) {
  const std::size_t n = m.size();
  auto cols = m.matrix().column_masks();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };

  // Greedy basis with coefficient tracking over basis member ordinals.
  struct BVec {
    std::uint64_t vec;
    std::uint64_t members;  // bitmask of ordinals whose columns sum to vec
  };
  std::vector<BVec> basis;
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t v = cols[j];
    std::uint64_t mem = std::uint64_t{1} << j;
    for (const auto& b : basis) {
      std::uint64_t p = b.vec & (~b.vec + 1);
      if (v & p) {
        v ^= b.vec;
        mem ^= b.members;
      }
    }
    if (v != 0) {
      // Echelon-normalize so reduction above is a single pass.
      std::uint64_t p = v & (~v + 1);
      for (auto& b : basis)
        if (b.vec & p) {
          b.vec ^= v;
          b.members ^= mem;
        }
      basis.push_back({v, mem});
    } else {
      // Fundamental circuit: j together with the basis members used.
      for (std::size_t t = 0; t < n; ++t)
        if ((mem >> t) & 1) unite(j, t);
    }
  }
  std::vector<std::size_t> comp(n, SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t r = find(j);
    if (comp[r] == SIZE_MAX) comp[r] = next++;
    comp[j] = comp[r];
  }
  return comp;
}

inline std::vector<std::vector<ElementLabel>> components(const BinaryMatroid& m) {
  auto ids = component_ids_by_ordinal(m);
  std::size_t count = 0;
  for (std::size_t i : ids) count = std::max(count, i + 1);
  std::vector<std::vector<ElementLabel>> out(count);
  for (std::size_t j = 0; j < m.size(); ++j) out[ids[j]].push_back(m.label_at(j));
  return out;
}

// ---------------------------------------------------------------------------
// Minors and duality.
// ---------------------------------------------------------------------------

inline BinaryMatroid restrict_to(const BinaryMatroid& m, const std::vector<ElementLabel>& keep) {
  std::vector<std::size_t> idx;
  for (const auto& l : keep) idx.push_back(m.ordinal_of(l));
  std::sort(idx.begin(), idx.end());
  std::vector<ElementLabel> labels;
  for (std::size_t j : idx) labels.push_back(m.label_at(j));
  return BinaryMatroid(m.matrix().select_columns(idx), std::move(labels));
}

inline BinaryMatroid delete_elements(const BinaryMatroid& m, const std::vector<ElementLabel>& drop) {
  std::vector<bool> gone(m.size(), false);
  for (const auto& l : drop) gone[m.ordinal_of(l)] = true;
  std::vector<ElementLabel> keep;
  for (std::size_t j = 0; j < m.size(); ++j)
    if (!gone[j]) keep.push_back(m.label_at(j));
  return restrict_to(m, keep);
}

/// Contraction M/x. Loops are just dropped; otherwise the x column is pivoted
/// to a single 1 (a matroid-preserving column transform) and its row and
/// column removed.
inline BinaryMatroid contract(const BinaryMatroid& m, const ElementLabel& x) {
  std::size_t j = m.ordinal_of(x);
  std::uint64_t col = m.matrix().column_mask(j);
  if (col == 0) return delete_elements(m, {x});

  std::size_t pivot_row = 0;
  while (!((col >> pivot_row) & 1)) ++pivot_row;
  std::vector<bool> kappa(m.matrix().rows(), false);
  for (std::size_t i = 0; i < m.matrix().rows(); ++i)
    if (i != pivot_row && ((col >> i) & 1)) kappa[i] = true;
  BitMatrix pivoted = m.matrix();
  bool kappa_zero = std::none_of(kappa.begin(), kappa.end(), [](bool b) { return b; });
  if (!kappa_zero) pivoted = column_add_transform(m.matrix(), pivot_row, kappa);

  std::vector<std::size_t> keep_cols;
  std::vector<ElementLabel> labels;
  for (std::size_t k = 0; k < m.size(); ++k)
    if (k != j) {
      keep_cols.push_back(k);
      labels.push_back(m.label_at(k));
    }
  return BinaryMatroid(pivoted.select_columns(keep_cols).remove_row(pivot_row), std::move(labels));
}

/// Dual via the standard representation: [I_r | A] -> [A^T | I_{n-r}], with
/// labels carried through the standardization permutation.
inline BinaryMatroid dual(const BinaryMatroid& m) {
  const std::size_t n = m.size();
  StandardRep rep = standard_representation(m.matrix());
  std::vector<ElementLabel> labels;
  for (std::size_t k = 0; k < n; ++k) labels.push_back(m.label_at(rep.column_order[k]));
  const std::size_t r = isomat::rank(rep.matrix);
  if (r == 0) return BinaryMatroid(BitMatrix::identity(n), std::move(labels));
  if (r == n) return BinaryMatroid(BitMatrix::zero(n), std::move(labels));
  BitMatrix d(n - r, n);
  for (std::size_t i = 0; i < n - r; ++i) {
    for (std::size_t k = 0; k < r; ++k)
      if (rep.matrix.get(k, r + i)) d.set(i, k, true);  // A^T block
    d.set(i, r + i, true);                              // identity block
  }
  return BinaryMatroid(std::move(d), std::move(labels));
}

// ---------------------------------------------------------------------------
// Isomorphism verification and search.
// ---------------------------------------------------------------------------

/// Full dependence-preservation check: f(S) is independent exactly when S is,
/// for every subset S. Throws on non-bijective maps.
inline bool verify_map(const BinaryMatroid& a, const BinaryMatroid& b, const GroundMap& f) {
  if (!f.is_bijection_between(a, b))
    throw std::invalid_argument("verify_map: map is not a bijection between the ground sets");
  DependenceOracle oa(a), ob(b);
  if (oa.independent_sets().size() != ob.independent_sets().size()) return false;
  std::vector<std::size_t> target(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) target[j] = b.ordinal_of(f.apply(a.label_at(j)));
  for (std::uint32_t mask : oa.independent_sets()) {
    std::uint32_t img = 0;
    for (std::uint32_t m = mask; m;) {
      std::uint32_t bit = m & (~m + 1);
      img |= std::uint32_t{1} << target[std::countr_zero(bit)];
      m ^= bit;
    }
    if (!ob.independent(img)) return false;
  }
  return true;
}

namespace detail {

/// Incremental elimination with relation tracking. Columns are pushed one at
/// a time; independent representations over a common push order are unique,
/// so two matroids match linear relations exactly when the push results agree
/// step by step.
class RelationTracker {
 public:
  struct Result {
    bool independent;
    std::uint64_t relation;  // push-index mask summing to zero (when dependent)
  };

  Result push(std::uint64_t col) {
    std::uint64_t v = col;
    std::uint64_t repr = std::uint64_t{1} << steps_;
    for (const auto& b : basis_) {
      std::uint64_t p = b.vec & (~b.vec + 1);
      if (v & p) {
        v ^= b.vec;
        repr ^= b.repr;
      }
    }
    ++steps_;
    if (v == 0) return {false, repr};
    std::uint64_t p = v & (~v + 1);
    for (auto& b : basis_)
      if (b.vec & p) {
        b.vec ^= v;
        b.repr ^= repr;
      }
    basis_.push_back({v, repr});
    return {true, 0};
  }

 private:
  struct BVec {
    std::uint64_t vec, repr;
  };
  std::vector<BVec> basis_;
  std::size_t steps_ = 0;
};

struct ElementSignature {
  bool loop = false;
  bool coloop = false;
  std::size_t parallel_class = 0;
  std::size_t component_size = 0;
  std::array<std::size_t, 3> circuits = {0, 0, 0};  // membership counts, sizes 2..4

  friend bool operator==(const ElementSignature&, const ElementSignature&) = default;
  friend auto operator<=>(const ElementSignature& a, const ElementSignature& b) {
    return std::tie(a.loop, a.coloop, a.parallel_class, a.component_size, a.circuits) <=>
           std::tie(b.loop, b.coloop, b.parallel_class, b.component_size, b.circuits);
  }
};

inline std::vector<ElementSignature> element_signatures(const BinaryMatroid& m) {
  const std::size_t n = m.size();
  std::vector<ElementSignature> sig(n);
  auto cols = m.matrix().column_masks();
  std::map<std::uint64_t, std::size_t> class_size;
  for (std::size_t j = 0; j < n; ++j)
    if (cols[j] != 0) ++class_size[cols[j]];
  for (const auto& l : coloops(m)) sig[m.ordinal_of(l)].coloop = true;
  auto comp = component_ids_by_ordinal(m);
  std::vector<std::size_t> comp_size;
  for (std::size_t j = 0; j < n; ++j) {
    comp_size.resize(std::max(comp_size.size(), comp[j] + 1), 0);
    ++comp_size[comp[j]];
  }
  for (std::size_t j = 0; j < n; ++j) {
    sig[j].loop = cols[j] == 0;
    sig[j].parallel_class = cols[j] == 0 ? 0 : class_size[cols[j]];
    sig[j].component_size = comp_size[comp[j]];
  }
  for (const auto& c : circuit_ordinals_up_to(m, 4))
    if (c.size() >= 2)
      for (std::size_t j : c) ++sig[j].circuits[c.size() - 2];
  return sig;
}

/// Backtracking search for dependence-preserving bijections. Candidates must
/// match element signatures and respect a component-to-component assignment;
/// linear-relation consistency is enforced incrementally, so a completed
/// assignment is already a certified isomorphism.
class IsoSearch {
 public:
  IsoSearch(const BinaryMatroid& a, const BinaryMatroid& b) : a_(a), b_(b) {
    feasible_ = a.size() == b.size();
    if (!feasible_) return;
    sig_a_ = element_signatures(a);
    sig_b_ = element_signatures(b);
    auto sa = sig_a_, sb = sig_b_;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    feasible_ = sa == sb;
    comp_a_ = component_ids_by_ordinal(a);
    comp_b_ = component_ids_by_ordinal(b);
    cols_a_ = a.matrix().column_masks();
    cols_b_ = b.matrix().column_masks();
  }

  /// Runs the search. on_found gets each complete assignment (target ordinal
  /// per source ordinal) and returns true to keep searching.
  void run(const std::function<bool(const std::vector<std::size_t>&)>& on_found) {
    if (!feasible_) return;
    const std::size_t n = a_.size();
    assign_.assign(n, SIZE_MAX);
    used_.assign(n, false);
    std::size_t comp_count_a = 0, comp_count_b = 0;
    for (std::size_t c : comp_a_) comp_count_a = std::max(comp_count_a, c + 1);
    for (std::size_t c : comp_b_) comp_count_b = std::max(comp_count_b, c + 1);
    if (comp_count_a != comp_count_b) return;
    comp_map_.assign(comp_count_a, SIZE_MAX);
    comp_map_rev_.assign(comp_count_b, SIZE_MAX);
    stop_ = false;
    extend(0, RelationTracker{}, RelationTracker{}, on_found);
  }

 private:
  void extend(std::size_t depth, RelationTracker src, RelationTracker tgt,
              const std::function<bool(const std::vector<std::size_t>&)>& on_found) {
    if (stop_) return;
    const std::size_t n = a_.size();
    if (depth == n) {
      if (!on_found(assign_)) stop_ = true;
      return;
    }
    auto sres = src.push(cols_a_[depth]);
    std::size_t ca = comp_a_[depth];
    for (std::size_t t = 0; t < n && !stop_; ++t) {
      if (used_[t]) continue;
      if (!(sig_a_[depth] == sig_b_[t])) continue;
      std::size_t cb = comp_b_[t];
      if (comp_map_[ca] != SIZE_MAX && comp_map_[ca] != cb) continue;
      if (comp_map_rev_[cb] != SIZE_MAX && comp_map_rev_[cb] != ca) continue;
      RelationTracker tgt2 = tgt;
      auto tres = tgt2.push(cols_b_[t]);
      if (tres.independent != sres.independent) continue;
      if (!sres.independent && tres.relation != sres.relation) continue;
      bool comp_new = comp_map_[ca] == SIZE_MAX;
      if (comp_new) {
        comp_map_[ca] = cb;
        comp_map_rev_[cb] = ca;
      }
      used_[t] = true;
      assign_[depth] = t;
      extend(depth + 1, src, tgt2, on_found);
      assign_[depth] = SIZE_MAX;
      used_[t] = false;
      if (comp_new) {
        comp_map_[ca] = SIZE_MAX;
        comp_map_rev_[cb] = SIZE_MAX;
      }
    }
  }

  const BinaryMatroid& a_;
  const BinaryMatroid& b_;
  bool feasible_ = false;
  bool stop_ = false;
  std::vector<ElementSignature> sig_a_, sig_b_;
  std::vector<std::size_t> comp_a_, comp_b_;
  std::vector<std::uint64_t> cols_a_, cols_b_;
  std::vector<std::size_t> assign_;
  std::vector<bool> used_;
  std::vector<std::size_t> comp_map_, comp_map_rev_;
};

inline GroundMap assignment_to_map(const BinaryMatroid& a, const BinaryMatroid& b,
                                   const std::vector<std::size_t>& assign) {
  GroundMap f;
  for (std::size_t j = 0; j < assign.size(); ++j) f.add(a.label_at(j), b.label_at(assign[j]));
  return f;
}

}  // namespace detail

inline std::optional<GroundMap> find_isomorphism(const BinaryMatroid& a, const BinaryMatroid& b) {
  if (a.size() != b.size()) return std::nullopt;
  std::optional<GroundMap> result;
  detail::IsoSearch search(a, b);
  search.run([&](const std::vector<std::size_t>& assign) {
    result = detail::assignment_to_map(a, b, assign);
    return false;  // first witness suffices
  });
  return result;
}

constexpr std::size_t kDefaultAutomorphismBound = 1000;

/// Full list of automorphisms; desk scale only. Throws ResourceLimitError if
/// the group has more than `bound` elements.
inline std::vector<GroundMap> automorphisms(const BinaryMatroid& m,
                                            std::size_t bound = kDefaultAutomorphismBound) {
  std::vector<GroundMap> out;
  bool exceeded = false;
  detail::IsoSearch search(m, m);
  search.run([&](const std::vector<std::size_t>& assign) {
    if (out.size() >= bound) {
      exceeded = true;
      return false;
    }
    out.push_back(detail::assignment_to_map(m, m, assign));
    return true;
  });
  if (exceeded)
    throw ResourceLimitError("automorphisms: more than " + std::to_string(bound) +
                             " automorphisms");
  return out;
}

}  // namespace isomat
