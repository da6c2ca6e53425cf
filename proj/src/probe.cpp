#include "shapekit/probe.hpp"

#include <set>

#include "shapekit/error.hpp"
#include "shapekit/pi1.hpp"

namespace shapekit {

ContractibilityReport contractibility_probe(const Complex& x, int d) {
  if (d < 0) throw SemanticError("contractibility_probe: negative degree");
  ContractibilityReport r;
  r.degree = d;
  r.homology = homology(x, d);
  const auto comps = vertex_components(x);
  r.connected = !comps.empty() && std::set<Index>(comps.begin(), comps.end()).size() == 1;
  for (int n = 0; n <= d; ++n) {
    const auto& g = r.homology.groups[n];
    const long reduced = n == 0 ? g.betti - (x.count(0) ? 1 : 0) : g.betti;
    const bool vanishes = reduced == 0 && g.torsion.empty() && !(n == 0 && x.count(0) == 0);
    r.reduced_homology_vanishes.push_back(vanishes);
    if (!vanishes && r.witness.empty())
      r.witness = x.count(0) == 0 ? "empty" : "H" + std::to_string(n) + " = " + to_string(g);
  }
  if (d >= 1 && r.connected) {
    const auto p = pi1_presentation(x, x.cell(0).id);
    const auto ab = abelianization(p);
    r.pi1_abelianization_trivial = ab.betti == 0 && ab.torsion.empty();
    if (!r.pi1_abelianization_trivial && r.witness.empty()) r.witness = "pi1 abelianization " + to_string(ab);
  }
  r.obstructed = !r.connected || !r.pi1_abelianization_trivial;
  for (bool v : r.reduced_homology_vanishes) r.obstructed = r.obstructed || !v;
  if (r.obstructed && r.witness.empty()) r.witness = "disconnected";
  return r;
}

std::string verdict(const ContractibilityReport& r) {
  if (!r.obstructed) return "no-obstruction-up-to-" + std::to_string(r.degree);
  return "obstructed(" + r.witness + ")";
}

}  // namespace shapekit
