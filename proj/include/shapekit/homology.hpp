#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "shapekit/complex.hpp"
#include "shapekit/kernels.hpp"
#include "shapekit/snf.hpp"

namespace shapekit {

/// Normalized chains: free on the stored (nondegenerate) cells, degenerate
/// faces contribute 0. Simplicial: d = sum (-1)^i d_i; cubical:
/// d = sum_i (-1)^i (d_i^1 - d_i^0).
struct ChainComplex {
  Shape shape = Shape::simplicial;
  /// Cells of each degree, in complex order (rows/columns of the matrices).
  std::vector<std::vector<Index>> cells;
  /// boundary[n]: C_n -> C_{n-1}; boundary[0] is the zero map to nothing.
  std::vector<SparseMatrix> boundary;

  int top() const { return static_cast<int>(cells.size()) - 1; }
  std::size_t rank(int n) const { return n >= 0 && n <= top() ? cells[n].size() : 0; }
};

/// Chains in degrees 0..dmax. Throws std::logic_error if dd != 0.
ChainComplex chain_complex(const Complex& x, int dmax, Exec exec = Exec::parallel);
/// True when every composite boundary[n-1] * boundary[n] vanishes.
bool boundaries_compose_to_zero(const ChainComplex& c);

struct HomologyGroup {
  long betti = 0;
  std::vector<mpz_class> torsion;  // each > 1 and dividing the next
  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

struct HomologyReport {
  int dmax = 0;
  std::vector<HomologyGroup> groups;  // degrees 0..dmax
  std::vector<long> betti() const;
  friend bool operator==(const HomologyReport&, const HomologyReport&) = default;
};

/// Integral homology in degrees 0..dmax. A complex stored only up to a
/// truncation t determines homology up to degree t-1; asking for more is a
/// SemanticError.
HomologyReport homology(const Complex& x, int dmax, Exec exec = Exec::parallel);

/// The group presented by the given invariant factors of a relation matrix
/// with `generators` columns: free rank plus torsion.
HomologyGroup group_from_factors(std::size_t generators, const std::vector<mpz_class>& factors);

/// "Z^2 + Z/2" style rendering ("0" for the trivial group).
std::string to_string(const HomologyGroup& g);

/// Alternating sum of betti numbers.
long euler_characteristic(const HomologyReport& h);

/// Rank over Q of the map induced on H_n.
long induced_rank(const ComplexMap& f, int n);

/// One block of a map between direct sums: sign * map, from sources[source]
/// to targets[target].
struct HomologyMapTerm {
  std::size_t source = 0;
  std::size_t target = 0;
  const ComplexMap* map = nullptr;
  int sign = 1;
};
/// Rank over Q of the map on H_n between direct sums assembled from `terms`.
long homology_map_rank(const std::vector<const Complex*>& sources, const std::vector<const Complex*>& targets,
                       const std::vector<HomologyMapTerm>& terms, int n);
/// The map induces isomorphisms on rational homology in degrees 0..dmax and
/// the integral groups agree.
bool induces_isomorphism(const ComplexMap& f, int dmax);

}  // namespace shapekit
