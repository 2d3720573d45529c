#pragma once

// Numerical summary for a graph and token count: thresholds, dimension
// bounds, topological complexity, action dimension and L2 degree.
//
// tc is filled only from a certificate that re-verifies; actdim and
// l2_degree are theorem values above the threshold and are marked as such.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>
#include "json.hpp"

#include "gbraid/cube_complex.hpp"
#include "gbraid/error.hpp"
#include "gbraid/graph.hpp"
#include "gbraid/homology.hpp"
#include "gbraid/subgroup_lab.hpp"

namespace gbraid {

inline constexpr char const* kTcUpperSource = "TC(G) <= 2 cd(G) <= 2 min(m, n)";

struct InvariantReport {
  std::size_t m = 0;
  std::size_t m3 = 0;
  std::size_t threshold = 0;
  std::size_t n = 0;
  long long complex_dimension = -1;
  std::size_t swiatkowski_dim_bound = 0;
  std::size_t swiatkowski_abelian_rank = 0;
  std::optional<long long> tc_value;
  std::string tc_lower_source = "none";
  std::string tc_upper_source = kTcUpperSource;
  std::optional<long long> action_dimension;
  std::optional<long long> l2_nonvanishing_degree;
  std::vector<std::string> caveats;

  friend bool operator==(InvariantReport const&, InvariantReport const&) = default;
};

struct ReportArtifacts {
  Certificate const* certificate = nullptr;
  std::optional<HomologySummary> homology;
  bool trust_paper = false;
};

// Size of a maximum matching (Edmonds).
inline std::size_t matching_number(Graph const& g) {
  using BG = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  BG bg(g.vertex_count());
  for (auto const& e : g.edges()) boost::add_edge(e.tail, e.head, bg);
  std::vector<boost::graph_traits<BG>::vertex_descriptor> mate(g.vertex_count());
  boost::edmonds_maximum_cardinality_matching(bg, &mate[0]);
  return boost::matching_size(bg, &mate[0]);
}

// Top dimension of C_n(G) without building it: k moving edges need a
// k-matching, k <= n, and room for the n-k parked tokens (k <= V-n).
inline long long complex_dimension(Graph const& g, std::size_t n) {
  auto v = g.vertex_count();
  if (n > v) return -1;
  return static_cast<long long>(std::min({matching_number(g), n, v - n}));
}

namespace detail {

// Empty string when the certificate re-verifies for (g, n), else the reason.
inline std::string certificate_problem(Graph const& g, std::size_t n, Certificate const& cert) {
  if (cert.n != n) return "certificate is for n = " + std::to_string(cert.n);
  auto p = degree_profile(g), q = degree_profile(cert.graph);
  if (p.m != q.m || p.m3 != q.m3) return "certificate graph has a different essential vertex profile";
  if (cert.leaf_count() != p.m) return "certificate has " + std::to_string(cert.leaf_count()) + " leaves, m = " + std::to_string(p.m);
  try {
    verify_certificate(parse_certificate(serialize_certificate(cert)));
  } catch (Error const& e) {
    return e.what();
  }
  return {};
}

}  // namespace detail

inline InvariantReport compute_report(Graph const& g, std::size_t n, ReportArtifacts const& art = {}) {
  if (n < 1) throw DomainError("token count must be at least 1");
  InvariantReport r;
  auto prof = degree_profile(g);
  r.m = prof.m;
  r.m3 = prof.m3;
  r.threshold = prof.threshold();
  r.n = n;
  r.swiatkowski_dim_bound = std::min(r.m, n);
  r.swiatkowski_abelian_rank = std::min(r.m, n / 2);

  auto sub = subdivide_for(g, n);
  r.complex_dimension = complex_dimension(sub.graph, n);
  if (sub.graph.vertex_count() != g.vertex_count())
    r.caveats.push_back("dim_complex measured on the graph subdivided for n (" +
                        std::to_string(sub.graph.vertex_count()) + " vertices)");

  bool above = n >= r.threshold;
  bool essential = r.m > 0;
  if (!above) r.caveats.push_back("n below 2m+m3: tc, actdim and l2_degree are not determined");
  if (!essential) r.caveats.push_back("m = 0: the TC theorem needs an essential vertex");

  if (above && essential) {
    auto two_m = static_cast<long long>(2 * r.m);
    std::string problem = "no certificate supplied";
    if (art.certificate) problem = detail::certificate_problem(g, n, *art.certificate);
    if (problem.empty()) {
      r.tc_value = two_m;
      r.tc_lower_source = "verified leaves=" + std::to_string(art.certificate->leaf_count()) +
                          " rules=" + std::to_string(art.certificate->rule_count());
    } else if (art.trust_paper) {
      r.tc_value = two_m;
      r.tc_lower_source = "cited";
      r.caveats.push_back("tc: cited, not certified (" + problem + ")");
    } else {
      r.caveats.push_back("tc unknown: " + problem);
    }
    r.action_dimension = two_m;
    r.l2_nonvanishing_degree = static_cast<long long>(r.m);
    r.caveats.push_back("actdim and l2_degree are theorem values, not computed");
    if (r.m < 2 || component_count(g) > 1)
      r.caveats.push_back("tc follows the m > 0 statement; the quoted upper-bound source assumes connected with m >= 2");
  }

  if (art.homology) {
    auto const& b = art.homology->betti;
    for (std::size_t k = 0; k < b.size(); ++k)
      if (b[k] != 0 && static_cast<long long>(k) > r.complex_dimension)
        r.caveats.push_back("homology in degree " + std::to_string(k) + " exceeds dim_complex");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rendering

enum class ReportFormat { text, json };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "text") return ReportFormat::text;
  if (s == "json") return ReportFormat::json;
  throw DomainError("unknown report format '" + std::string(s) + "'");
}

namespace detail {

inline std::string opt_text(std::optional<long long> const& v) { return v ? std::to_string(*v) : "unknown"; }

}  // namespace detail

inline nlohmann::ordered_json report_json(InvariantReport const& r) {
  nlohmann::ordered_json j;
  auto opt = [](std::optional<long long> const& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
  j["m"] = r.m;
  j["m3"] = r.m3;
  j["threshold"] = r.threshold;
  j["n"] = r.n;
  j["dim_complex"] = r.complex_dimension;
  j["dim_bound_swiatkowski"] = r.swiatkowski_dim_bound;
  j["abelian_rank_swiatkowski"] = r.swiatkowski_abelian_rank;
  j["tc"] = opt(r.tc_value);
  j["tc_lower_certificate"] = r.tc_lower_source;
  j["actdim"] = opt(r.action_dimension);
  j["l2_degree"] = opt(r.l2_nonvanishing_degree);
  j["caveats"] = r.caveats;
  j["tc_upper_source"] = r.tc_upper_source;
  return j;
}

inline std::string render_report(InvariantReport const& r, ReportFormat fmt = ReportFormat::text) {
  if (fmt == ReportFormat::json) return report_json(r).dump(2) + "\n";
  std::ostringstream out;
  out << "m: " << r.m << '\n'
      << "m3: " << r.m3 << '\n'
      << "threshold: " << r.threshold << '\n'
      << "n: " << r.n << '\n'
      << "dim_complex: " << r.complex_dimension << '\n'
      << "dim_bound_swiatkowski: " << r.swiatkowski_dim_bound << '\n'
      << "abelian_rank_swiatkowski: " << r.swiatkowski_abelian_rank << '\n'
      << "tc: " << detail::opt_text(r.tc_value) << '\n'
      << "tc_lower_certificate: " << r.tc_lower_source << '\n'
      << "actdim: " << detail::opt_text(r.action_dimension) << '\n'
      << "l2_degree: " << detail::opt_text(r.l2_nonvanishing_degree) << '\n'
      << "caveats[]:\n";
  for (auto const& c : r.caveats) out << "  - " << c << '\n';
  return out.str();
}

inline InvariantReport parse_report(std::string_view text) {
  std::istringstream in{std::string(text)};
  InvariantReport r;
  std::vector<std::string> keys;
  std::size_t lineno = 0;
  bool in_caveats = false;
  auto count = [&](std::string const& v) {
    auto x = detail::to_int(v);
    if (!x || *x < 0) throw ParseError(lineno, "expected a count, got '" + v + "'");
    return static_cast<std::size_t>(*x);
  };
  auto opt = [&](std::string const& v) -> std::optional<long long> {
    if (v == "unknown") return std::nullopt;
    auto x = detail::to_int(v);
    if (!x) throw ParseError(lineno, "expected an integer or 'unknown', got '" + v + "'");
    return *x;
  };
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.empty()) continue;
    if (in_caveats) {
      if (line.rfind("  - ", 0) != 0) throw ParseError(lineno, "expected a caveat line");
      r.caveats.push_back(line.substr(4));
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(lineno, "expected 'key: value'");
    auto key = line.substr(0, colon);
    auto value = colon + 2 <= line.size() ? line.substr(colon + 2) : std::string();
    keys.push_back(key);
    if (key == "m") r.m = count(value);
    else if (key == "m3") r.m3 = count(value);
    else if (key == "threshold") r.threshold = count(value);
    else if (key == "n") r.n = count(value);
    else if (key == "dim_complex") {
      auto x = detail::to_int(value);
      if (!x) throw ParseError(lineno, "bad dim_complex");
      r.complex_dimension = *x;
    } else if (key == "dim_bound_swiatkowski") r.swiatkowski_dim_bound = count(value);
    else if (key == "abelian_rank_swiatkowski") r.swiatkowski_abelian_rank = count(value);
    else if (key == "tc") r.tc_value = opt(value);
    else if (key == "tc_lower_certificate") r.tc_lower_source = value;
    else if (key == "actdim") r.action_dimension = opt(value);
    else if (key == "l2_degree") r.l2_nonvanishing_degree = opt(value);
    else if (key == "caveats[]") in_caveats = true;
    else throw ParseError(lineno, "unknown key '" + key + "'");
  }
  std::vector<std::string> const order{"m", "m3", "threshold", "n", "dim_complex", "dim_bound_swiatkowski",
                                       "abelian_rank_swiatkowski", "tc", "tc_lower_certificate", "actdim",
                                       "l2_degree", "caveats[]"};
  if (keys != order) throw ParseError(lineno, "report keys missing or out of order");
  return r;
}

}  // namespace gbraid
