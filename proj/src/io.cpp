#include "aaut/io.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "aaut/random.hpp"

namespace aaut {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(std::size_t line, std::size_t col,
                             std::string const& msg) {
  throw format_error("line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + msg);
}

std::vector<std::string> split_lines(std::string const& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

}  // namespace

Element parse_element(std::string const& text) {
  auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "aaut v1")
    parse_fail(1, 1, "expected header \"aaut v1\"");
  if (lines.size() < 2) parse_fail(2, 1, "missing parameter line");
  int d = 0, k = 0;
  {
    std::istringstream in(lines[1]);
    std::string dtok, ktok;
    if (!(in >> dtok >> d >> ktok >> k) || dtok != "d" || ktok != "k")
      parse_fail(2, 1, "expected \"d <d> k <k>\"");
    if (d < 2 || d > 36 || k < 1 || k > 36)
      parse_fail(2, 1, "parameters out of range (2 <= d <= 36, 1 <= k <= 36)");
  }
  if (lines.size() < 3 || lines[2] != "pair")
    parse_fail(3, 1, "expected \"pair\"");
  TreeParams params(d, k);
  std::vector<std::pair<Address, Address>> mapping;
  std::vector<Address> domain_seen;
  for (std::size_t ln = 3; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    std::istringstream in(lines[ln]);
    std::string dom, arrow, rng;
    if (!(in >> dom >> arrow >> rng) || arrow != "->")
      parse_fail(ln + 1, 1, "expected \"<domain-leaf> -> <range-leaf>\"");
    std::string extra;
    if (in >> extra) parse_fail(ln + 1, 1, "trailing tokens on mapping line");
    Address a, b;
    try {
      a = Address::parse(dom);
    } catch (format_error const& e) {
      parse_fail(ln + 1, 1, e.what());
    }
    try {
      b = Address::parse(rng);
    } catch (format_error const& e) {
      parse_fail(ln + 1, static_cast<std::size_t>(dom.size() + 5), e.what());
    }
    if (!a.valid_for(params))
      parse_fail(ln + 1, 1, "digit out of range for d=" + std::to_string(d) +
                                " k=" + std::to_string(k));
    if (!b.valid_for(params))
      parse_fail(ln + 1, static_cast<std::size_t>(dom.size() + 5),
                 "digit out of range for d=" + std::to_string(d) +
                     " k=" + std::to_string(k));
    if (a.is_root() || b.is_root())
      parse_fail(ln + 1, 1, "the root cannot be a leaf of the pair");
    mapping.emplace_back(a, b);
    domain_seen.push_back(a);
  }
  if (mapping.empty()) parse_fail(lines.size() + 1, 1, "no mapping lines");
  // shortlex order and antichain diagnostics before handing to the validator
  for (std::size_t i = 0; i + 1 < domain_seen.size(); ++i) {
    if (domain_seen[i] == domain_seen[i + 1])
      parse_fail(i + 5, 1, "domain not an antichain (duplicate leaf)");
    if (!(domain_seen[i] < domain_seen[i + 1]))
      parse_fail(i + 5, 1, "domain leaves not sorted shortlex");
  }
  for (std::size_t i = 0; i < domain_seen.size(); ++i)
    for (std::size_t j = 0; j < domain_seen.size(); ++j)
      if (i != j && domain_seen[i].is_strict_prefix_of(domain_seen[j]))
        parse_fail(j + 4, 1, "domain not an antichain");
  std::set<Address> range_seen;
  for (auto const& [a, b] : mapping)
    if (!range_seen.insert(b).second)
      parse_fail(1, 1, "range not a bijection (duplicate leaf " +
                           b.to_string() + ")");
  TreePair p;
  try {
    p = TreePair::from_mapping(params, std::move(mapping));
  } catch (format_error const& e) {
    parse_fail(4, 1, e.what());
  }
  return canonicalize(p);
}

json to_json(DynamicsReport const& r) {
  auto fixed = [](std::vector<FixedPointRecord> const& v) {
    json arr = json::array();
    for (auto const& f : v)
      arr.push_back(json{{"point", f.point.to_string()},
                         {"period", f.period},
                         {"length", f.length}});
    return arr;
  };
  auto balls = [](ClopenSet const& s) {
    json arr = json::array();
    for (auto const& b : s.balls) arr.push_back(b.to_string());
    return arr;
  };
  return json{{"attractors", fixed(r.attractors)},
              {"repellers", fixed(r.repellers)},
              {"stable_region", balls(r.stable_region)},
              {"wandering_region_closure", balls(r.wandering_region_closure)},
              {"support_full", r.support_full}};
}

json to_json(StrandDiagram const& d) {
  json vertices = json::array();
  for (std::size_t v = 0; v < d.vertex_count(); ++v)
    vertices.push_back(json{
        {"id", v},
        {"kind", d.kinds[v] == VertexKind::Split ? "split" : "merge"}});
  json edges = json::array();
  for (std::size_t i = 0; i < d.edges.size(); ++i) {
    auto const& e = d.edges[i];
    edges.push_back(json{{"id", i},
                         {"from", e.from},
                         {"to", e.to},
                         {"gamma", e.gamma},
                         {"slot_at_split", e.out_slot},
                         {"slot_at_merge", e.in_slot}});
  }
  json free_loops = json::array();
  for (long long v : d.free_loops) free_loops.push_back(json{{"gamma", v}});
  return json{{"d", d.degree},
              {"k", d.root_arity},
              {"vertices", vertices},
              {"edges", edges},
              {"free_loops", free_loops}};
}

StrandDiagram diagram_from_json(json const& j, int root_arity) {
  StrandDiagram d;
  d.degree = j.at("d").get<int>();
  d.root_arity = j.contains("k") ? j.at("k").get<int>() : root_arity;
  for (auto const& v : j.at("vertices"))
    d.kinds.push_back(v.at("kind").get<std::string>() == "split"
                          ? VertexKind::Split
                          : VertexKind::Merge);
  for (auto const& e : j.at("edges"))
    d.edges.push_back(DiagramEdge{e.at("from").get<int>(), e.at("to").get<int>(),
                                  e.at("slot_at_split").get<int>(),
                                  e.at("slot_at_merge").get<int>(),
                                  e.at("gamma").get<long long>()});
  if (j.contains("free_loops"))
    for (auto const& f : j.at("free_loops"))
      d.free_loops.push_back(f.at("gamma").get<long long>());
  d.validate();
  return d;
}

json to_json(Verdict const& v) {
  return json{{"conjugate", v.conjugate},
              {"arena", to_string(v.arena)},
              {"evidence", v.evidence}};
}

json to_json(OrbitalType const& t) {
  json comps = json::array();
  for (auto const& c : t.components)
    comps.push_back(json{{"label", c.label}, {"multiplicity", c.multiplicity}});
  return json{{"components", comps}};
}

std::string to_dot(StrandDiagram const& d) {
  std::ostringstream out;
  out << "digraph strand {\n";
  for (std::size_t v = 0; v < d.vertex_count(); ++v) {
    bool split = d.kinds[v] == VertexKind::Split;
    out << "  v" << v << " [shape=" << (split ? "triangle" : "invtriangle")
        << " label=\"" << (split ? "s" : "m") << v << "\"];\n";
  }
  for (auto const& e : d.edges)
    out << "  v" << e.from << " -> v" << e.to << " [label=\"g=" << e.gamma
        << "\" taillabel=\"" << e.out_slot << "\" headlabel=\"" << e.in_slot
        << "\"];\n";
  for (std::size_t i = 0; i < d.free_loops.size(); ++i)
    out << "  loop" << i << " [shape=doublecircle label=\"g=" << d.free_loops[i]
        << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string to_dot(OrbitalType const& t) {
  std::ostringstream out;
  out << "digraph orbital_type {\n";
  for (std::size_t i = 0; i < t.components.size(); ++i)
    out << "  c" << i << " [label=\"" << t.components[i].label << "x"
        << t.components[i].multiplicity << "\"];\n";
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// CLI

namespace {

Element load_element(std::string const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_element(buf.str());
}

void write_file(std::string const& path, std::string const& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw format_error("cannot write " + path);
  out << content;
}

json element_json(Element const& e) {
  json domain = json::array(), range = json::array();
  for (auto const& l : e.pair().domain.leaves) domain.push_back(l.to_string());
  for (auto const& l : e.pair().image) range.push_back(l.to_string());
  return json{{"text", serialize(e)}, {"domain", domain}, {"range", range}};
}

}  // namespace

int run_cli(std::vector<std::string> const& args, std::string& out,
            std::string& err) {
  CLI::App app{"conjugacy and boundary dynamics of tree almost automorphisms"};
  app.require_subcommand(1);
  std::ostringstream outs;

  std::string file, file2, out_path, dot_path, json_path;
  std::string arena = "AAut";
  std::string out_elliptic, out_hyperbolic;
  int max_carets = 3;
  int witness_bound = 0;
  int opt_d = 2, opt_k = 2;
  unsigned long long seed = 0;
  unsigned long long carets = 3;
  bool reduced = false, star_reduced = false;

  auto* show = app.add_subcommand("show", "canonical form, class flags, dynamics");
  show->add_option("file", file)->required();

  auto* revealing = app.add_subcommand("revealing", "emit a revealing pair");
  revealing->add_option("file", file)->required();
  revealing->add_option("--out", out_path);

  auto* diagram = app.add_subcommand("diagram", "emit the BM-diagram");
  diagram->add_option("file", file)->required();
  diagram->add_flag("--reduced", reduced);
  diagram->add_flag("--star-reduced", star_reduced);
  diagram->add_option("--dot", dot_path);
  diagram->add_option("--json", json_path);

  auto* conj = app.add_subcommand("conj", "decide conjugacy");
  conj->add_option("g", file)->required();
  conj->add_option("h", file2)->required();
  conj->add_option("--arena", arena)->check(CLI::IsMember({"V", "AAut"}));
  conj->add_option("--witness-bound", witness_bound);

  auto* eh = app.add_subcommand("eh", "elliptic-hyperbolic decomposition");
  eh->add_option("file", file)->required();
  eh->add_option("--out-elliptic", out_elliptic)->required();
  eh->add_option("--out-hyperbolic", out_hyperbolic)->required();

  auto* oracle = app.add_subcommand("oracle", "bounded conjugator search");
  oracle->add_option("g", file)->required();
  oracle->add_option("h", file2)->required();
  oracle->add_option("--max-carets", max_carets)->required();

  auto* random = app.add_subcommand("random", "seeded random element");
  random->add_option("--d", opt_d)->required();
  random->add_option("--k", opt_k)->required();
  random->add_option("--carets", carets)->required();
  random->add_option("--seed", seed)->required();
  random->add_option("--out", out_path);

  auto* roundtrip =
      app.add_subcommand("roundtrip", "diagram -> pair -> diagram check");
  roundtrip->add_option("file", file)->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (CLI::ParseError const& e) {
    err = std::string(e.what()) + "\n";
    out = json{{"error", e.what()}}.dump() + "\n";
    return 2;
  }

  try {
    if (show->parsed()) {
      Element e = load_element(file);
      json j{{"params", {{"d", e.params().d}, {"k", e.params().k}}},
             {"element", element_json(e)},
             {"carets", e.pair().domain.caret_count()},
             {"is_identity", e.is_identity()},
             {"elliptic", is_elliptic(e)},
             {"hyperbolic", is_hyperbolic(e)},
             {"dynamics", to_json(dynamics_report(e))}};
      out = j.dump(2) + "\n";
      return 0;
    }
    if (revealing->parsed()) {
      Element e = load_element(file);
      TreePair p = make_revealing(e);
      std::string text = serialize(p);
      if (!out_path.empty()) write_file(out_path, text);
      json domain = json::array(), range = json::array();
      for (auto const& l : p.domain.leaves) domain.push_back(l.to_string());
      for (auto const& l : p.image) range.push_back(l.to_string());
      out = json{{"text", text}, {"domain", domain}, {"range", range}}.dump(2) +
            "\n";
      return 0;
    }
    if (diagram->parsed()) {
      Element e = load_element(file);
      require(!(reduced && star_reduced),
              "choose at most one of --reduced / --star-reduced");
      StrandDiagram d = star_reduced
                            ? star_reduce(basic_diagram(make_revealing(e)))
                            : (reduced ? reduce(basic_diagram(e.pair()))
                                       : basic_diagram(e.pair()));
      json j = to_json(d);
      if (!dot_path.empty()) write_file(dot_path, to_dot(d));
      if (!json_path.empty()) write_file(json_path, j.dump(2) + "\n");
      out = j.dump(2) + "\n";
      return 0;
    }
    if (conj->parsed()) {
      Element g = load_element(file);
      Element h = load_element(file2);
      Verdict v = arena == "V" ? conjugate_in_V(g, h) : conjugate(g, h);
      json j = to_json(v);
      if (v.conjugate && witness_bound > 0) {
        if (auto w = brute_force_conjugator(g, h, witness_bound))
          j["witness"] = serialize(w->conjugator);
        else
          j["witness"] = nullptr;
      }
      out = j.dump(2) + "\n";
      return v.conjugate ? 0 : 1;
    }
    if (eh->parsed()) {
      Element e = load_element(file);
      auto [ge, gh] = eh_decompose(e);
      write_file(out_elliptic, serialize(ge));
      write_file(out_hyperbolic, serialize(gh));
      out = json{{"elliptic", element_json(ge)},
                 {"hyperbolic", element_json(gh)}}
                .dump(2) +
            "\n";
      return 0;
    }
    if (oracle->parsed()) {
      Element g = load_element(file);
      Element h = load_element(file2);
      auto w = brute_force_conjugator(g, h, max_carets);
      json j{{"found", w.has_value()}, {"max_carets", max_carets}};
      if (w) j["witness"] = element_json(w->conjugator);
      out = j.dump(2) + "\n";
      return w ? 0 : 1;
    }
    if (random->parsed()) {
      Rng rng(seed);
      Element e = random_element(TreeParams(opt_d, opt_k), carets, rng);
      if (!out_path.empty()) write_file(out_path, serialize(e));
      out = json{{"seed", seed}, {"element", element_json(e)}}.dump(2) + "\n";
      return 0;
    }
    if (roundtrip->parsed()) {
      Element e = load_element(file);
      StrandDiagram d = star_reduce(basic_diagram(make_revealing(e)));
      TreePair back = diagram_to_revealing_pair(d, e.params());
      StrandDiagram d2 = star_reduce(basic_diagram(back));
      bool ok = iso(d, d2, true).has_value();
      out = json{{"isomorphic", ok},
                 {"vertices", d.vertex_count()},
                 {"free_loops", d.free_loops.size()}}
                .dump(2) +
            "\n";
      return ok ? 0 : 1;
    }
  } catch (format_error const& e) {
    err = std::string("error: ") + e.what() + "\n";
    out = json{{"error", e.what()}}.dump() + "\n";
    return 2;
  } catch (precondition_error const& e) {
    err = std::string("error: ") + e.what() + "\n";
    out = json{{"error", e.what()}}.dump() + "\n";
    return 2;
  } catch (internal_error const& e) {
    err = std::string("internal error: ") + e.what() + "\n";
    out = json{{"error", e.what()}}.dump() + "\n";
    return 3;
  }
  err = "no subcommand\n";
  out = "{}\n";
  return 2;
}

}  // namespace aaut
