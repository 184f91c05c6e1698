// Acceptance checks, one line of output per criterion. Exits nonzero if any
// criterion fails. argv[1] = path to the CLI binary, argv[2] = fixtures dir.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "isomat/forestgen.hpp"
#include "isomat/reconstruct.hpp"
#include "isomat/triangulate.hpp"

using namespace isomat;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what, long long ms) {
  std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL") << " — " << what
            << " (" << ms << " ms)\n";
  if (!ok) ++g_failures;
}

long long ms_since(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string run_capture(const std::string& cmd) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
  pclose(pipe);
  return out;
}

std::string matrix_section(const std::string& cli_output) {
  auto blank = cli_output.find("\n\n");
  return blank == std::string::npos ? cli_output : cli_output.substr(0, blank + 1);
}

std::vector<bool> to_kappa(const BitMatrix& m, std::size_t col) {
  std::vector<bool> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m.get(i, col);
  return out;
}

bool same_column_multiset(const BitMatrix& a, const BitMatrix& b) {
  auto ca = a.column_masks(), cb = b.column_masks();
  std::sort(ca.begin(), ca.end());
  std::sort(cb.begin(), cb.end());
  return ca == cb;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: test_acceptance <cli-binary> <fixtures-dir>\n";
    return 2;
  }
  const std::string cli = argv[1], fx = argv[2];

  // 1. Golden matrices via the CLI, byte-exact against the published displays.
  {
    auto start = Clock::now();
    bool ok = true;
    const std::pair<const char*, const char*> cases[] = {
        {"c3.graph --which ias", "ias_c3.matrix"},
        {"p3.graph --which ias", "ias_p3.matrix"},
        {"p4.graph --which ia", "ia_p4.matrix"},
        {"c4.graph --which ia", "ia_c4.matrix"},
        {"p4.graph --which ias", "ias_p4.matrix"},
    };
    for (const auto& [args, fixture] : cases) {
      std::string got = matrix_section(run_capture(cli + " build " + fx + "/" + args));
      ok = ok && got == slurp(fx + "/" + fixture);
    }
    long long ms = ms_since(start);
    report(1, ok && ms < 1000, "golden matrices byte-exact via CLI", ms);
  }

  // 2. Counterexample isomorphisms, plus the kappa column-addition route.
  {
    auto start = Clock::now();
    Graph c3 = Graph::cycle(3), p3 = Graph::path(3), p4 = Graph::path(4), c4 = Graph::cycle(4);
    bool ok = find_isomorphism(ias_matroid(c3), ias_matroid(p3)).has_value();
    ok = ok && find_isomorphism(ia_matroid(p4), ia_matroid(c4)).has_value();
    // Second derivation: adding kappa = (1,0,1)^T to the columns of IAS(C3)
    // hitting row 2 gives a matrix whose columns are those of IAS(P3).
    BitMatrix b1 = column_add_transform(ias_matroid(c3).matrix(), 1, {true, false, true});
    ok = ok && b1 == parse_matrix(slurp(fx + "/b_c3_kappa.matrix"));
    ok = ok && same_column_multiset(b1, ias_matroid(p3).matrix());
    // And for IA(P4): kappa_1 on row 3, then kappa_4 on row 2.
    BitMatrix ia = ia_matroid(p4).matrix();
    BitMatrix b2 = column_add_transform(ia, 2, to_kappa(ia, 0));
    b2 = column_add_transform(b2, 1, to_kappa(ia, 3));
    ok = ok && b2 == parse_matrix(slurp(fx + "/b_p4_kappa.matrix"));
    ok = ok && same_column_multiset(b2, ia_matroid(c4).matrix());
    long long ms = ms_since(start);
    report(2, ok && ms < 10000, "counterexample isomorphisms and kappa transforms", ms);
  }

  // 3. The published automorphism table verifies; |Aut(M[IA(P3)])| = 36.
  {
    auto start = Clock::now();
    Graph p4 = Graph::path(4);
    GroundMap strange = parse_ground_map(slurp(fx + "/strange_automorphism_p4.map"));
    bool ok = verify_map(ias_matroid(p4), ias_matroid(p4), strange);
    ok = ok && automorphisms(ia_matroid(Graph::path(3)), 100).size() == 36;
    long long ms = ms_since(start);
    report(3, ok && ms < 30000, "automorphism table and |Aut(M[IA(P3)])| = 36", ms);
  }

  // 4 & 6. The exhaustive sweep: forests to 6 vertices, trees to 7. The three
  // isomorphism notions must coincide on every pair, and every isomorphic pair
  // must reconstruct to a certified graph isomorphism via both routes.
  {
    auto start = Clock::now();
    SweepReport forests = verify_theorem_main(6);
    SweepReport trees = verify_theorem_main_trees(7);
    bool ok = forests.all_consistent && trees.all_consistent;
    long long ms = ms_since(start);
    report(4, ok && ms < 600000, "three-way equivalence on all forests n<=6, trees n<=7", ms);

    std::size_t iso_pairs = 0;
    bool rec_ok = true;
    for (const auto* rep : {&forests, &trees})
      for (const auto& r : rep->records)
        if (r.forest_iso) {
          ++iso_pairs;
          rec_ok = rec_ok && r.reconstructed && r.certified;
        }
    report(6, rec_ok && iso_pairs > 0,
           "certified reconstructions for all " + std::to_string(iso_pairs) + " isomorphic pairs",
           ms_since(start) - ms);
  }

  // 5. Triangulations: full enumeration for trees n<=5, all equivalent to the
  // vertex triangulation; ps-equivalence holds through n=3 and first fails at
  // P4, with the published witness triple reachable in the enumeration.
  {
    auto start = Clock::now();
    bool ok = true;
    for (std::size_t n = 2; n <= 5 && ok; ++n) {
      for (const auto& t : enumerate_trees(n)) {
        BinaryMatroid m = ias_matroid(t);
        Triangulation vt = vertex_triangulation(t);
        for (const auto& tr : all_triangulations(m)) {
          ok = ok && equivalent(m, tr, vt).has_value();
          if (n <= 3)
            ok = ok && ps_equivalent(m, tr, vt).status == PsResult::Status::Equivalent;
        }
      }
    }
    Graph p4 = Graph::path(4);
    BinaryMatroid m = ias_matroid(p4);
    Triangulation vt = vertex_triangulation(p4);
    Triple tau = make_triple(ElementLabel::phi(0), ElementLabel::chi(1), ElementLabel::chi(3));
    bool witnessed = false;
    for (const auto& tr : all_triangulations(m))
      if (tr.contains_triple(tau) &&
          ps_equivalent(m, tr, vt).status == PsResult::Status::NotEquivalent)
        witnessed = true;
    ok = ok && witnessed;
    report(5, ok, "triangulation equivalence for trees n<=5; ps-equivalence boundary at P4",
           ms_since(start));
  }

  // 7. Structural property suites.
  {
    auto start = Clock::now();
    bool ok = true;
    std::mt19937 rng(20260826);
    // Parallel classification and component duality on 200 random forests.
    for (int t = 0; t < 200 && ok; ++t) {
      Graph f = random_forest(1 + rng() % 10, rng);
      ok = ok && classify_parallels(f).complete();
      BinaryMatroid m = ia_matroid(f);
      auto ids = component_ids_by_ordinal(m);
      auto parts = ia_component_structure(f);
      std::set<std::size_t> seen_ids;
      for (const auto& p : parts) {
        for (const auto& side : {p.phi_side, p.chi_side}) {
          for (const auto& l : side)
            ok = ok && ids[m.ordinal_of(l)] == ids[m.ordinal_of(side.front())];
          seen_ids.insert(ids[m.ordinal_of(side.front())]);
        }
        ok = ok && verify_map(dual(restrict_to(m, p.phi_side)), restrict_to(m, p.chi_side),
                              p.duality_witness);
      }
      ok = ok && seen_ids.size() == 2 * parts.size();
    }
    // treeminor for every (forest, vertex) pair with n <= 6.
    for (std::size_t n = 2; n <= 6 && ok; ++n)
      for (const auto& f : enumerate_forests(n))
        for (std::size_t v = 0; v < n && ok; ++v) {
          BinaryMatroid reduced =
              contract(delete_elements(ias_matroid(f), {ElementLabel::chi(v), ElementLabel::psi(v)}),
                       ElementLabel::phi(v));
          std::vector<std::size_t> old_ids;
          Graph smaller = f.remove_vertex(v, &old_ids);
          GroundMap natural;
          for (const auto& l : reduced.ground()) {
            std::size_t nv =
                std::find(old_ids.begin(), old_ids.end(), l.vertex) - old_ids.begin();
            natural.add(l, ElementLabel{l.kind, nv, 0});
          }
          ok = ok && verify_map(reduced, ias_matroid(smaller), natural);
        }
    // Contract / dual / deletion defining properties, brute force, ground <= 10.
    auto dep = [](const BitMatrix& b, std::uint32_t mask) {
      std::vector<std::size_t> subset;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (mask & (1u << j)) subset.push_back(j);
      return is_dependent_columns(b, subset);
    };
    for (int t = 0; t < 40 && ok; ++t) {
      std::size_t rows = 1 + rng() % 4, cols = 2 + rng() % 9;  // up to 10 elements
      BitMatrix b(rows, cols);
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) b.set(i, j, rng() % 2);
      BinaryMatroid m = BinaryMatroid::from_matrix(b);
      // dual: bases <-> complements of bases
      BinaryMatroid d = dual(m);
      std::size_t r = rank(b);
      for (std::uint32_t mask = 0; mask < (1u << cols); ++mask) {
        std::uint32_t comp = 0;
        for (std::size_t j = 0; j < cols; ++j)
          if (!((mask >> j) & 1)) comp |= 1u << d.ordinal_of(m.label_at(j));
        bool basis_m = std::popcount(mask) == r && !dep(b, mask);
        bool basis_d = std::popcount(comp) == cols - r && !dep(d.matrix(), comp);
        ok = ok && basis_m == basis_d;
      }
      // contraction by a non-loop element x: D dependent in M/x iff D+x dependent in M
      std::size_t x = rng() % cols;
      BinaryMatroid c = contract(m, m.label_at(x));
      bool x_loop = b.column_mask(x) == 0;
      for (std::uint32_t mask = 1; mask < (1u << c.size()); ++mask) {
        std::uint32_t orig = 0;
        for (std::size_t j = 0; j < c.size(); ++j)
          if (mask & (1u << j)) orig |= 1u << m.ordinal_of(c.label_at(j));
        bool expected = x_loop ? dep(b, orig) : dep(b, orig | (1u << x));
        ok = ok && dep(c.matrix(), mask) == expected;
      }
      // deletion: restriction to the complement
      std::vector<ElementLabel> drop{m.label_at(rng() % cols)};
      BinaryMatroid del = delete_elements(m, drop);
      for (std::uint32_t mask = 1; mask < (1u << del.size()); ++mask) {
        std::uint32_t orig = 0;
        for (std::size_t j = 0; j < del.size(); ++j)
          if (mask & (1u << j)) orig |= 1u << m.ordinal_of(del.label_at(j));
        ok = ok && dep(del.matrix(), mask) == dep(b, orig);
      }
    }
    report(7, ok, "parallel/component/duality/treeminor/minor property suites", ms_since(start));
  }

  return g_failures == 0 ? 0 : 1;
}
