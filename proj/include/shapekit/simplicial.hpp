#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shapekit/complex.hpp"
#include "shapekit/kernels.hpp"

namespace shapekit {

enum class SimplexKind { simplex, boundary, horn };

/// Vertex-subset id of a face of the standard simplex ("012", "02", ...).
std::string vertex_set_id(std::uint32_t vertices);

/// Delta^n, its boundary, or the horn Lambda^n_k; cell ids are vertex subsets.
Complex generators(int n, SimplexKind kind, int k = -1);
inline Complex simplex(int n) { return generators(n, SimplexKind::simplex); }
inline Complex boundary(int n) { return generators(n, SimplexKind::boundary); }
inline Complex horn(int n, int k) { return generators(n, SimplexKind::horn, k); }

/// The ordered simplicial complex spanned by the given facets (vertex ids,
/// each facet's vertices taken in increasing id order). A face is named by
/// its vertices joined with '-'.
Complex from_facets(const std::vector<std::vector<std::string>>& facets);

/// A product with its two projections. Cells are named "(a,b)" after the
/// component references.
struct Product {
  ComplexPtr complex;
  ComplexMap first;
  ComplexMap second;
};

/// Categorical product of two simplicial (or two cubical) sets up to dimension
/// dmax. Throws BudgetExceeded past `budget` cells.
Product product(ComplexPtr x, ComplexPtr y, int dmax, std::size_t budget = 1u << 24);

/// Disjoint union; cells of the k-th summand are named "k:id".
Complex coproduct(const std::vector<ComplexPtr>& parts);
/// The k-th summand inclusion into a coproduct built by coproduct().
ComplexMap coproduct_inclusion(ComplexPtr part, ComplexPtr sum, std::size_t k);

/// Barycentric subdivision with its last-vertex map sd X -> X. Cells are
/// (x, flag of faces of x ending at x), named "x[T0<T1<...]".
struct Subdivision {
  ComplexPtr complex;
  ComplexMap last_vertex;
  /// For each cell of sd X, the cell x of X it subdivides.
  std::vector<Index> carrier;
};
Subdivision subdivide(ComplexPtr x);

/// sd Delta^n as the nerve of the poset of nonempty subsets of [n]; cells are
/// strict chains named "0<01<012".
Complex subdivided_simplex(int n);

/// Every simplicial map X -> Y in search order.
std::vector<ComplexMap> enumerate_maps(ComplexPtr x, ComplexPtr y, std::size_t budget = 1u << 22,
                                       Exec exec = Exec::parallel);

/// Kan's Ex up to dimension dmax. Vertices keep the ids of X; an n-cell
/// (n >= 1) is a nondegenerate map sd Delta^n -> X, named "n:k" in search order.
struct ExResult {
  ComplexPtr complex;
  /// For every cell, its map sd Delta^n -> X as images of the cells of
  /// subdivided_simplex(n).
  std::vector<std::vector<Ref>> maps;
};
ExResult ex(ComplexPtr x, int dmax, std::size_t budget = 1u << 24);

/// The comparison X -> Ex X, x |-> x o (last vertex), on cells of dimension <= dmax.
ComplexMap ex_comparison(ComplexPtr x, const ExResult& e);

/// Horn filling in X, then in Ex X, Ex^2 X, ... up to `max_iterate`. A filler at
/// iterate m is a map sd^m Delta^n -> X extending h o lambda^m on sd^m Lambda^n_k.
struct HornFill {
  bool filled = false;
  int iterate = -1;
  ComplexPtr domain;  // sd^m Delta^n
  std::vector<Ref> map;
};
HornFill fill_horn(ComplexPtr x, const ComplexMap& h, int n, int k, int max_iterate,
                   std::size_t budget = 1u << 22);

}  // namespace shapekit
