// gbraid: command-line front end.
//
// Exit status: 0 success, 1 domain error (bad input data, failed check),
// 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gbraid/gbraid.hpp"

using namespace gbraid;

namespace {

// A failed check that is not an exception from the library.
struct CheckFailed : Error {
  using Error::Error;
};

std::string read_file(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Graph load_graph(std::string const& path) {
  try {
    return parse_graph(std::string_view(read_file(path)));
  } catch (ParseError const& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void write_output(std::string const& path, std::string const& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
}

template <typename T>
std::string list(std::vector<T> const& v) {
  std::ostringstream s;
  s << '[';
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  s << ']';
  return s.str();
}

std::vector<VertexId> parse_vertices(std::string const& text) {
  std::vector<VertexId> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    auto v = detail::to_int(tok);
    if (!v || *v < 0) throw DomainError("bad vertex '" + tok + "' in basepoint");
    out.push_back(static_cast<VertexId>(*v));
  }
  return out;
}

// Shared option holders.
struct Opts {
  std::string graph;
  std::size_t n = 0;
  bool allow = false;
  bool dump = false;
  std::string output;
  std::string basepoint;
  std::string format = "text";
  bool trust = false;
  std::string cert;
  std::string u, w;
  std::size_t budget = 4;
};

void cmd_info(Opts const& o, bool have_n) {
  auto g = load_graph(o.graph);
  auto p = degree_profile(g);
  std::cout << "vertices: " << g.vertex_count() << '\n'
            << "edges: " << g.edge_count() << '\n'
            << "components: " << component_count(g) << '\n'
            << "m: " << p.m << '\n'
            << "m3: " << p.m3 << '\n'
            << "threshold: " << p.threshold() << '\n'
            << "essential: " << list(p.essential_vertices) << '\n';
  if (have_n) {
    auto chk = is_sufficiently_subdivided(g, o.n);
    std::cout << "sufficiently_subdivided: " << (chk.ok ? "true" : "false") << '\n';
    for (auto const& v : chk.violations)
      std::cout << "violation: " << to_string(v.kind) << " vertices=" << list(v.vertices) << " measured=" << v.measured
                << " required=" << v.required << '\n';
  }
}

void cmd_subdivide(Opts const& o) {
  auto g = load_graph(o.graph);
  auto s = subdivide_for(g, o.n);
  write_output(o.output, format_graph(s.graph));
  std::cerr << "pieces per edge: " << list(s.plan.per_edge_pieces) << '\n';
}

CubeComplex load_complex(Opts const& o) {
  auto g = load_graph(o.graph);
  return build_config_complex(g, o.n, {o.allow});
}

void cmd_build(Opts const& o) {
  auto c = load_complex(o);
  if (o.dump) {
    dump_complex(std::cout, c);
    return;
  }
  std::cout << "f_vector: " << list(f_vector(c)) << '\n'
            << "euler_characteristic: " << euler_characteristic(c) << '\n'
            << "dimension: " << dimension(c) << '\n'
            << "components: " << components(c) << '\n'
            << "models_configuration_space: " << (c.models_configuration_space() ? "true" : "false") << '\n';
  auto npc = npc_check(c);
  std::cout << "npc: " << (npc.ok ? "true" : "false") << '\n';
}

void cmd_homology(Opts const& o) {
  auto c = load_complex(o);
  auto h = homology(c);
  std::cout << "betti: " << list(h.betti) << '\n' << "torsion: {";
  bool first = true;
  for (std::size_t k = 0; k < h.torsion.size(); ++k) {
    if (h.torsion[k].empty()) continue;
    std::cout << (first ? "" : ", ") << k << ": " << list(h.torsion[k]);
    first = false;
  }
  std::cout << "}\n";
}

void cmd_raag(Opts const& o) {
  auto g = load_graph(o.graph);
  auto d = build_delta(g);
  std::cout << "generators: " << d.size() << '\n' << "commuting_pairs: " << d.edge_count() << '\n';
  for (Gen a = 0; a < d.size(); ++a)
    for (Gen b = a + 1; b < d.size(); ++b)
      if (d.adjacent(a, b)) std::cout << "commute " << d.label(a) << ' ' << d.label(b) << '\n';
}

void cmd_embed(Opts const& o) {
  auto c = load_complex(o);
  auto const& g = c.source();
  auto d = build_delta(g);
  auto m = build_cw_map(c, d);
  std::vector<VertexId> base;
  if (!o.basepoint.empty()) base = parse_vertices(o.basepoint);
  else if (degree_profile(g).m > 0 && o.n >= degree_profile(g).threshold()) base = place_basepoint(g, o.n).parked();
  else if (c.count(0) > 0) base = c.cell(0, 0).parked_vertices;
  else throw DomainError("complex has no 0-cells");
  auto bp = basepoint_for(c, base);
  auto loops = pi1_generators(m, bp);
  std::cout << "basepoint: " << list(base) << '\n' << "generators: " << loops.size() << '\n';
  for (auto const& l : loops) std::cout << "loop " << format_word(d, l.word) << '\n';
  auto li = check_local_isometry(m);
  std::cout << "local_isometry: " << (li.ok ? "true" : "false") << '\n';
  if (!li.ok) {
    std::cout << "violation: 0-cell " << li.violation->zero_cell << " labels " << format_word(d, li.violation->labels)
              << '\n';
    throw CheckFailed("map is not a local isometry");
  }
}

void cmd_witness(Opts const& o) {
  auto g = load_graph(o.graph);
  auto prep = prepare_configuration(g, o.n);
  auto const& sg = prep.graph();
  auto d = build_delta(sg);
  auto factors = local_factors(sg, o.n, prep.placement);
  auto pw = product_witness(d, factors);
  std::cout << "basepoint: " << list(prep.placement.parked()) << '\n' << "factors: " << factors.size() << '\n';
  for (std::size_t i = 0; i < pw.vertices.size(); ++i) {
    std::cout << "factor " << pw.vertices[i] << " rank " << factors[i].rank << '\n';
    for (auto const& w : pw.words[i]) std::cout << "  word " << format_word(d, w) << '\n';
  }
  for (auto const& t : pw.transcript) std::cout << "check " << t << '\n';
}

void cmd_certify(Opts const& o) {
  auto g = load_graph(o.graph);
  auto ev = certify_tc(g, o.n, o.budget);
  write_output(o.output, serialize_certificate(ev.certificate));
}

void cmd_verify(Opts const& o) {
  auto cert = verify_certificate(parse_certificate(std::string_view(read_file(o.cert))));
  std::cout << "certificate: valid\n"
            << "rules: " << cert.rule_count() << '\n'
            << "leaves: " << cert.leaf_count() << '\n';
}

void cmd_nf(Opts const& o) {
  auto d = build_delta(load_graph(o.graph));
  std::cout << format_word(d, normal_form(d, parse_word(d, o.u)).word) << '\n';
}

void cmd_conj(Opts const& o) {
  auto d = build_delta(load_graph(o.graph));
  bool c = is_conjugate(d, parse_word(d, o.u), parse_word(d, o.w));
  std::cout << "conjugate: " << (c ? "true" : "false") << '\n';
}

void cmd_root(Opts const& o) {
  auto d = build_delta(load_graph(o.graph));
  auto r = primitive_root(d, parse_word(d, o.u));
  std::cout << "root: " << format_word(d, r.root) << '\n' << "exponent: " << r.exponent << '\n';
}

void cmd_report(Opts const& o) {
  auto g = load_graph(o.graph);
  auto fmt = parse_report_format(o.format);
  ReportArtifacts art;
  art.trust_paper = o.trust;
  std::optional<Certificate> cert;
  std::string failure;
  auto prof = degree_profile(g);
  if (!o.cert.empty()) {
    try {
      cert = verify_certificate(parse_certificate(std::string_view(read_file(o.cert))));
    } catch (Error const& e) {
      failure = e.what();
    }
  } else if (prof.m > 0 && o.n >= prof.threshold()) {
    try {
      cert = certify_tc(g, o.n, o.budget).certificate;
    } catch (Error const& e) {
      failure = e.what();
    }
  }
  if (cert) art.certificate = &*cert;
  auto r = compute_report(g, o.n, art);
  if (!failure.empty()) r.caveats.push_back("certificate: " + failure);
  std::cout << render_report(r, fmt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph braid groups: configuration complexes, RAAG embeddings and TC certificates"};
  app.require_subcommand(1);
  Opts o;

  auto graph_arg = [&](CLI::App* s) { s->add_option("graph", o.graph, "graph file")->required(); };
  auto n_opt = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("-n,--n", o.n, "number of tokens")->check(CLI::PositiveNumber);
    if (required) opt->required();
    return opt;
  };

  auto* info = app.add_subcommand("info", "degree profile and subdivision check");
  graph_arg(info);
  auto* info_n = n_opt(info, false);

  auto* sub = app.add_subcommand("subdivide", "subdivide a graph until it is sufficient for n tokens");
  graph_arg(sub);
  n_opt(sub, true);
  sub->add_option("-o,--output", o.output, "output file (default stdout)");

  auto* build = app.add_subcommand("build", "build the configuration complex");
  graph_arg(build);
  n_opt(build, true);
  build->add_flag("--allow-unsubdivided", o.allow, "build even if the graph is not sufficiently subdivided");
  build->add_flag("--dump", o.dump, "print every cell in canonical order");

  auto* hom = app.add_subcommand("homology", "integral homology of the configuration complex");
  graph_arg(hom);
  n_opt(hom, true);
  hom->add_flag("--allow-unsubdivided", o.allow, "build even if the graph is not sufficiently subdivided");

  auto* raag = app.add_subcommand("raag", "commutation graph of the edges");
  graph_arg(raag);

  auto* embed = app.add_subcommand("embed", "pi_1 generators as RAAG words and local isometry check");
  graph_arg(embed);
  n_opt(embed, true);
  embed->add_flag("--allow-unsubdivided", o.allow, "build even if the graph is not sufficiently subdivided");
  embed->add_option("--basepoint", o.basepoint, "comma-separated token vertices");

  auto* wit = app.add_subcommand("witness", "direct product of free groups witness");
  graph_arg(wit);
  n_opt(wit, true);

  auto* cert = app.add_subcommand("certify-tc", "emit a disjoint-conjugates certificate");
  graph_arg(cert);
  n_opt(cert, true);
  cert->add_option("-o,--output", o.output, "output file (default stdout)");
  cert->add_option("--budget", o.budget, "word length budget for the cyclic pair search");

  auto* ver = app.add_subcommand("verify-cert", "re-verify a certificate file");
  ver->add_option("certificate", o.cert, "certificate file")->required();

  auto* nf = app.add_subcommand("nf", "normal form of a word");
  graph_arg(nf);
  nf->add_option("word", o.u, "word")->required();

  auto* conj = app.add_subcommand("conj", "decide conjugacy of two words");
  graph_arg(conj);
  conj->add_option("u", o.u, "first word")->required();
  conj->add_option("w", o.w, "second word")->required();

  auto* root = app.add_subcommand("root", "primitive root of a word");
  graph_arg(root);
  root->add_option("word", o.u, "word")->required();

  auto* rep = app.add_subcommand("report", "invariant report");
  graph_arg(rep);
  n_opt(rep, true);
  rep->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  rep->add_flag("--trust-paper", o.trust, "fill theorem values without a certificate");
  rep->add_option("--cert", o.cert, "use this certificate instead of computing one");
  rep->add_option("--budget", o.budget, "word length budget for the cyclic pair search");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*info) cmd_info(o, info_n->count() > 0);
    else if (*sub) cmd_subdivide(o);
    else if (*build) cmd_build(o);
    else if (*hom) cmd_homology(o);
    else if (*raag) cmd_raag(o);
    else if (*embed) cmd_embed(o);
    else if (*wit) cmd_witness(o);
    else if (*cert) cmd_certify(o);
    else if (*ver) cmd_verify(o);
    else if (*nf) cmd_nf(o);
    else if (*conj) cmd_conj(o);
    else if (*root) cmd_root(o);
    else if (*rep) cmd_report(o);
  } catch (Error const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
