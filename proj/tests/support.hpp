#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <string>
#include <utility>

#include "shapekit/complex.hpp"
#include "shapekit/lifting.hpp"
#include "shapekit/random.hpp"

namespace shapekit::testing {

using shapekit::random_complex;

/// Homology computed independently of the library: ranks over Q for the
/// betti numbers and over F_p for the p-torsion (number of cyclic summands of
/// order divisible by p) for a few small primes.
struct OracleHomology {
  std::vector<long> betti;
  std::vector<std::map<int, long>> torsion_primes;  // per degree: p -> count
  friend bool operator==(const OracleHomology&, const OracleHomology&) = default;
};

OracleHomology oracle_homology(const Complex& x, int top_degree);

/// Rank of an integer matrix modulo p (p = 0 means over Q).
long oracle_rank(std::vector<std::vector<long>> m, long p);

/// Boundary matrix of degree n (rows: (n-1)-cells, cols: n-cells), computed
/// straight from the stored faces.
std::vector<std::vector<long>> oracle_boundary(const Complex& x, int n);

/// Alternating count of stored cells.
long euler_characteristic(const Complex& x);

/// Every map s -> t, by plain backtracking.
std::vector<std::vector<Ref>> brute_maps(const Complex& s, const Complex& t);

/// i has the left lifting property against p, checked square by square.
bool brute_boxslash(const ComplexMap& i, const ComplexMap& p, std::size_t* squares = nullptr);

/// The unique map x -> y with the given vertex images (throws if none).
ComplexMap map_by_vertices(ComplexPtr x, ComplexPtr y, const std::vector<std::string>& vertex_images);

/// Boundary and horn inclusions of dimension <= 2.
std::vector<std::pair<std::string, ComplexMap>> generators_up_to_2();

/// A handful of small maps to test lifting against.
std::vector<std::pair<std::string, ComplexMap>> lifting_fixture_maps();

}  // namespace shapekit::testing
