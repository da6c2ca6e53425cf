#pragma once

#include <string>
#include <vector>

#include "shapekit/complex.hpp"
#include "shapekit/homology.hpp"

namespace shapekit {

/// Bounded evidence for contractibility: connected, reduced homology zero in
/// degrees <= d and (for d >= 1) trivial abelianized fundamental group. Says
/// nothing beyond degree d.
struct ContractibilityReport {
  int degree = 0;
  bool connected = false;
  std::vector<bool> reduced_homology_vanishes;  // degrees 0..d
  bool pi1_abelianization_trivial = true;
  bool obstructed = false;
  std::string witness;  // e.g. "H1 = Z/2", empty when not obstructed
  HomologyReport homology;
  friend bool operator==(const ContractibilityReport&, const ContractibilityReport&) = default;
};

ContractibilityReport contractibility_probe(const Complex& x, int d);

std::string verdict(const ContractibilityReport& r);

}  // namespace shapekit
