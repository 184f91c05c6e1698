// Command-line front end: builds isotropic matroid matrices from graph files,
// searches for matroid isomorphisms, reconstructs graph isomorphisms from
// them, and runs the exhaustive verification sweeps.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "isomat/forestgen.hpp"
#include "isomat/isotropic.hpp"
#include "isomat/reconstruct.hpp"
#include "isomat/triangulate.hpp"

using namespace isomat;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitCertification = 3;
constexpr int kExitResource = 4;

int g_verbosity = 1;  // 0 quiet, 1 normal, 2 debug

void say(const std::string& line, int level = 1) {
  if (g_verbosity >= level) std::cout << line << "\n";
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file: " + path);
  return parse_graph(in);
}

GroundMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open map file: " + path);
  return parse_ground_map(in);
}

void write_out(const std::optional<std::string>& out_path, const std::string& content) {
  if (out_path) {
    std::ofstream out(*out_path);
    if (!out) throw std::invalid_argument("cannot open output file: " + *out_path);
    out << content;
  } else {
    std::cout << content;
  }
}

BinaryMatroid build_matroid(const Graph& g, const std::string& which) {
  if (which == "ia") return ia_matroid(g);
  if (which == "ias") return ias_matroid(g);
  throw std::invalid_argument("--which must be ia or ias");
}

int cmd_build(const std::string& graph_file, const std::string& which,
              const std::optional<std::string>& out) {
  BinaryMatroid m = build_matroid(load_graph(graph_file), which);
  std::string text = format_matrix(m.matrix()) + "\n";
  for (std::size_t i = 0; i < m.size(); ++i)
    text += std::to_string(i) + ": " + format_label(m.label_at(i)) + "\n";
  write_out(out, text);
  return kExitOk;
}

int cmd_check_iso(const std::string& file_a, const std::string& file_b, const std::string& which,
                  const std::optional<std::string>& out) {
  BinaryMatroid ma = build_matroid(load_graph(file_a), which);
  BinaryMatroid mb = build_matroid(load_graph(file_b), which);
  auto f = find_isomorphism(ma, mb);
  if (!f) {
    say("not isomorphic");
    return kExitNegative;
  }
  say("isomorphic");
  if (out) write_out(out, format_ground_map(*f));
  else if (g_verbosity >= 2) std::cout << format_ground_map(*f);
  return kExitOk;
}

int cmd_reconstruct(const std::string& file_a, const std::string& file_b,
                    const std::string& map_file, const std::string& which,
                    const std::optional<std::string>& out) {
  Graph a = load_graph(file_a), b = load_graph(file_b);
  GroundMap f = load_map(map_file);
  VertexMap g;
  try {
    if (which == "ia") {
      g = reconstruct_forest_iso_ia(a, b, f);
    } else {
      auto r = reconstruct_forest_iso_ias(a, b, f);
      g = r.g;
      if (g_verbosity >= 2) {
        std::cout << "adjusted map:\n" << format_ground_map(r.f_adjusted);
      }
    }
  } catch (const std::logic_error& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return kExitCertification;
  }
  write_out(out, format_vertex_map(g));
  return g.certified ? kExitOk : kExitCertification;
}

int cmd_verify(std::size_t n_max, bool trees_only, const std::string& format,
               const std::optional<std::string>& out) {
  SweepReport report = trees_only ? verify_theorem_main_trees(n_max) : verify_theorem_main(n_max);
  std::string text;
  if (format == "json") {
    json recs = json::array();
    for (const auto& r : report.records)
      recs.push_back({{"n", r.n},
                      {"idA", r.id_a},
                      {"idB", r.id_b},
                      {"forest_iso", r.forest_iso},
                      {"ia_iso", r.ia_iso},
                      {"ias_iso", r.ias_iso},
                      {"reconstructed", r.reconstructed},
                      {"certified", r.certified},
                      {"millis", r.millis}});
    text = json{{"all_consistent", report.all_consistent}, {"records", recs}}.dump(2) + "\n";
  } else {
    text = "n, idA, idB, forest_iso, ia_iso, ias_iso, reconstructed, certified, millis\n" +
           report.str();
    text += std::string("all consistent: ") + (report.all_consistent ? "yes" : "no") + "\n";
  }
  write_out(out, text);
  return report.all_consistent ? kExitOk : kExitCertification;
}

int cmd_triangulations(const std::string& graph_file, std::size_t orbit_cap,
                       const std::string& format, const std::optional<std::string>& out) {
  Graph g = load_graph(graph_file);
  BinaryMatroid m = ias_matroid(g);
  auto all = all_triangulations(m);
  Triangulation vt = vertex_triangulation(g);
  std::size_t equivalent_count = 0, ps_count = 0, ps_unknown = 0;
  for (const auto& t : all) {
    if (equivalent(m, t, vt)) ++equivalent_count;
    auto ps = ps_equivalent(m, t, vt, orbit_cap);
    if (ps.status == PsResult::Status::Equivalent) ++ps_count;
    else if (ps.status == PsResult::Status::OrbitCapExceeded) ++ps_unknown;
  }
  std::string text;
  if (format == "json") {
    text = json{{"triangulations", all.size()},
                {"equivalent_to_vertex", equivalent_count},
                {"ps_equivalent_to_vertex", ps_count},
                {"ps_undecided", ps_unknown}}
               .dump(2) +
           "\n";
  } else {
    std::ostringstream os;
    os << "triangulations: " << all.size() << "\n"
       << "equivalent to vertex triangulation: " << equivalent_count << "\n"
       << "ps-equivalent to vertex triangulation: " << ps_count << "\n"
       << "ps-undecided (orbit cap): " << ps_unknown << "\n";
    text = os.str();
  }
  write_out(out, text);
  if (ps_unknown > 0) return kExitResource;
  return kExitOk;
}

int cmd_demo() {
  // Replays the worked examples: the counterexample isomorphisms, the strange
  // automorphism, and the automorphism count of M[IA(P3)].
  Graph c3 = Graph::cycle(3), p3 = Graph::path(3), c4 = Graph::cycle(4), p4 = Graph::path(4);
  bool ok = true;

  say("IAS(C3):");
  say(format_matrix(ias_matroid(c3).matrix()));
  say("IAS(P3):");
  say(format_matrix(ias_matroid(p3).matrix()));
  auto f1 = find_isomorphism(ias_matroid(c3), ias_matroid(p3));
  say(std::string("M[IAS(C3)] ~ M[IAS(P3)]: ") + (f1 ? "yes" : "no"));
  ok = ok && f1.has_value();

  say("IA(P4):");
  say(format_matrix(ia_matroid(p4).matrix()));
  say("IA(C4):");
  say(format_matrix(ia_matroid(c4).matrix()));
  auto f2 = find_isomorphism(ia_matroid(p4), ia_matroid(c4));
  say(std::string("M[IA(P4)] ~ M[IA(C4)]: ") + (f2 ? "yes" : "no"));
  ok = ok && f2.has_value();

  say("IAS(P4):");
  say(format_matrix(ias_matroid(p4).matrix()));
  // The class-scrambling automorphism of M[IAS(P4)].
  GroundMap strange;
  const std::vector<std::pair<ElementLabel, ElementLabel>> table = {
      {ElementLabel::phi(0), ElementLabel::chi(2)}, {ElementLabel::phi(1), ElementLabel::chi(0)},
      {ElementLabel::phi(2), ElementLabel::chi(3)}, {ElementLabel::phi(3), ElementLabel::chi(1)},
      {ElementLabel::chi(0), ElementLabel::phi(1)}, {ElementLabel::chi(1), ElementLabel::psi(2)},
      {ElementLabel::chi(2), ElementLabel::psi(1)}, {ElementLabel::chi(3), ElementLabel::phi(2)},
      {ElementLabel::psi(0), ElementLabel::phi(3)}, {ElementLabel::psi(1), ElementLabel::psi(3)},
      {ElementLabel::psi(2), ElementLabel::psi(0)}, {ElementLabel::psi(3), ElementLabel::phi(0)}};
  for (const auto& [s, t] : table) strange.add(s, t);
  bool strange_ok = verify_map(ias_matroid(p4), ias_matroid(p4), strange);
  say(std::string("scrambling automorphism of M[IAS(P4)] verifies: ") + (strange_ok ? "yes" : "no"));
  ok = ok && strange_ok;
  auto rec = reconstruct_forest_iso_ias(p4, p4, strange);
  say(std::string("reconstructed P4 automorphism certified: ") + (rec.g.certified ? "yes" : "no"));
  ok = ok && rec.g.certified;

  auto auts = automorphisms(ia_matroid(p3), 100);
  say("|Aut(M[IA(P3)])| = " + std::to_string(auts.size()));
  ok = ok && auts.size() == 36;

  return ok ? kExitOk : kExitCertification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isotropic matroids of forests: build, compare, reconstruct"};
  app.require_subcommand(1);

  bool quiet = false, debug = false;
  app.add_flag("--quiet", quiet, "exit codes only");
  app.add_flag("--debug", debug, "print witness detail");

  std::string which = "ias", format = "text";
  std::optional<std::string> out;
  std::size_t n_max = 5, orbit_cap = kDefaultOrbitCap, aut_cap = 1000;
  bool trees_only = false;

  std::string g1, g2, map_file;

  auto* build = app.add_subcommand("build", "write the IA/IAS matrix of a graph");
  build->add_option("graph", g1, "graph file")->required();
  build->add_option("--which", which, "ia or ias")->check(CLI::IsMember({"ia", "ias"}));
  build->add_option("--out", out, "output file");

  auto* check = app.add_subcommand("check-iso", "search for a matroid isomorphism");
  check->add_option("graphA", g1)->required();
  check->add_option("graphB", g2)->required();
  check->add_option("--which", which)->check(CLI::IsMember({"ia", "ias"}));
  check->add_option("--aut-cap", aut_cap, "search bound (unused; searches stop at first witness)");
  check->add_option("--out", out, "ground map output file");

  auto* rec = app.add_subcommand("reconstruct", "rebuild a graph isomorphism from a matroid one");
  rec->add_option("graphA", g1)->required();
  rec->add_option("graphB", g2)->required();
  rec->add_option("map", map_file, "ground map file")->required();
  rec->add_option("--which", which)->check(CLI::IsMember({"ia", "ias"}));
  rec->add_option("--out", out, "vertex map output file");

  auto* verify = app.add_subcommand("verify", "exhaustive sweep over small forests");
  verify->add_option("--n-max", n_max)->check(CLI::Range(std::size_t{1}, std::size_t{8}));
  verify->add_flag("--trees", trees_only, "sweep trees only");
  verify->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", out, "report output file");

  auto* tri = app.add_subcommand("triangulations", "enumerate and classify triangulations");
  tri->add_option("graph", g1)->required();
  tri->add_option("--orbit-cap", orbit_cap);
  tri->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  tri->add_option("--out", out, "report output file");

  app.add_subcommand("demo", "replay the worked examples");
  for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  g_verbosity = quiet ? 0 : debug ? 2 : 1;

  try {
    if (app.got_subcommand("build")) return cmd_build(g1, which, out);
    if (app.got_subcommand("check-iso")) return cmd_check_iso(g1, g2, which, out);
    if (app.got_subcommand("reconstruct")) return cmd_reconstruct(g1, g2, map_file, which, out);
    if (app.got_subcommand("verify")) return cmd_verify(n_max, trees_only, format, out);
    if (app.got_subcommand("triangulations")) return cmd_triangulations(g1, orbit_cap, format, out);
    if (app.got_subcommand("demo")) return cmd_demo();
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::logic_error& e) {
    std::cerr << "certification failure: " << e.what() << "\n";
    return kExitCertification;
  }
  return kExitInput;
}
