#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shapekit/category.hpp"
#include "shapekit/complex.hpp"
#include "shapekit/homology.hpp"
#include "shapekit/pi1.hpp"

namespace shapekit {

/// Subcomplexes of a simplicial set, each the face closure of its generators.
struct Cover {
  ComplexPtr ambient;
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> generators;
  /// members[k][c]: cell c of the ambient lies in the k-th subcomplex.
  std::vector<std::vector<char>> members;
};

/// Throws SemanticError on unknown cell ids or a non-simplicial ambient.
Cover make_cover(ComplexPtr ambient, const std::vector<std::pair<std::string, std::vector<std::string>>>& subs);
/// The first nondegenerate cell of the ambient outside every subcomplex.
std::optional<std::string> uncovered_cell(const Cover& cover);
/// The k-th subcomplex (cell ids of the ambient).
Complex cover_member(const Cover& cover, std::size_t k);

/// Diagonal of the Cech object: an n-cell is a tuple (i_0..i_n) of cover
/// indices with an n-simplex of the intersection, named "(U,V,..)|x". Cells
/// above d are not built; the truncation is set when the object continues.
Complex cech_diagonal(const Cover& cover, int d, std::size_t budget = 1u << 24);

/// A functor from a finite category to simplicial sets: one complex per
/// object and one map per morphism.
struct Diagram {
  CategoryPtr shape;
  std::vector<ComplexPtr> objects;
  std::vector<ComplexMap> maps;
};

ValidationReport validate_diagram(const Diagram& d);
/// The generating-arrow form used by colimit(); identities are left out.
ComplexDiagram to_complex_diagram(const Diagram& d);
Colimit colimit(const Diagram& d, std::size_t budget = 1u << 24);

/// Diagonal of the bar construction: an n-cell is a chain a_0 -> .. -> a_n
/// of the shape (a reference into its nerve) with an n-simplex of the complex
/// at a_0; face 0 pushes forward along the first arrow. Named "chain|x".
Complex bar_diagonal(const Diagram& d, int dmax, std::size_t budget = 1u << 24);

struct VanKampenReport {
  int degree = 0;
  HomologyReport ambient, first, second, intersection;
  /// Ranks on H_n of H(W) -> H(U) + H(V) and of H(U) + H(V) -> H(X).
  std::vector<long> into_sum, out_of_sum;
  bool mayer_vietoris = false;
  std::string mayer_vietoris_failure;

  bool pi1_checked = false;
  std::string note;
  std::string basepoint;
  /// Least vertex of each component of the intersection; the first is the basepoint.
  std::vector<std::string> component_basepoints;
  GroupPresentation amalgam;
  GroupPresentation direct;
  HomologyGroup amalgam_abelianization;
  HomologyGroup direct_abelianization;
  bool pi1_agrees = false;
};

/// Mayer-Vietoris and Van Kampen for a cover by exactly two subcomplexes.
/// The fundamental group comparison needs U and V connected; each further
/// component of the intersection contributes one generator "t<k>".
VanKampenReport van_kampen_check(const Cover& cover, int d);

}  // namespace shapekit
