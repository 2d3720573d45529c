// Walks the tripod example end to end: complex, homology, loop words,
// local isometry, and a disjoint-conjugates certificate.

#include <iostream>

#include "gbraid/gbraid.hpp"

using namespace gbraid;

int main() {
  auto g = tripod_subdivided();
  auto c = build_config_complex(g, 3);
  std::cout << "cells:";
  for (auto k : f_vector(c)) std::cout << ' ' << k;
  std::cout << "\nbetti:";
  for (auto b : homology(c).betti) std::cout << ' ' << b;
  std::cout << '\n';

  auto d = build_delta(g);
  auto m = build_cw_map(c, d);
  std::cout << "local isometry: " << (check_local_isometry(m).ok ? "yes" : "no") << '\n';

  auto placement = place_basepoint(g, 3);
  for (auto const& f : local_factors(g, 3, placement))
    for (auto const& w : f.free_words) std::cout << "free word: " << format_word(d, w) << '\n';

  auto ev = certify_tc(g, 3);
  std::cout << serialize_certificate(ev.certificate);
  ReportArtifacts art;
  art.certificate = &ev.certificate;
  std::cout << render_report(compute_report(g, 3, art));
}
