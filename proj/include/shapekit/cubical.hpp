#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "shapekit/complex.hpp"

namespace shapekit {

/// A morphism [m] -> [n] of the cube category (faces and degeneracies only):
/// one entry per output coordinate, ops::kConst0 / ops::kConst1 or an input
/// coordinate, with the used inputs strictly increasing.
using CubeMorphism = Op;

/// delta_i^xi: [n-1] -> [n], 1 <= i <= n.
CubeMorphism cube_face(int n, int i, int xi);
/// sigma_i: [n] -> [n-1], 1 <= i <= n (drops coordinate i).
CubeMorphism cube_degeneracy(int n, int i);
CubeMorphism cube_identity(int n);
/// g o f; throws SemanticError on an arity mismatch.
CubeMorphism cube_compose(const CubeMorphism& g, const CubeMorphism& f);
bool is_normal_form(const CubeMorphism& f);
/// The underlying function {0,1}^m -> {0,1}^n (points as bit vectors, coordinate 1 = bit 0).
std::uint32_t cube_evaluate(const CubeMorphism& f, std::uint32_t point);

enum class CubeKind { cube, boundary, horn };

/// The representable cube, its boundary, or the (i, xi)-horn. Cells of the
/// n-cube are words over {0, 1, *} (the 0-cube's only cell is "()").
Complex cube_generators(int n, CubeKind kind, int i = 0, int xi = 0);
inline Complex cube(int n) { return cube_generators(n, CubeKind::cube); }
inline Complex cube_boundary(int n) { return cube_generators(n, CubeKind::boundary); }
inline Complex cube_horn(int n, int i, int xi) { return cube_generators(n, CubeKind::horn, i, xi); }

/// Geometric tensor product up to dimension dmax; the cell x (x) y is named "x|y".
Complex tensor(ComplexPtr x, ComplexPtr y, int dmax, std::size_t budget = 1u << 24);

/// The word in the (m+n)-cube of the cell "x|y" of a tensor of two cubes
/// (concatenation); empty when the id is not of that form.
std::string concatenated_word(const std::string& tensor_id);

enum class PushoutCase { boundary, horn_left, horn_right };

struct PushoutProductVerdict {
  bool isomorphism = false;
  std::string witness;              // first failing degree / cell when not an isomorphism
  ComplexPtr pushout;
  ComplexPtr target;                // boundary or horn of the (m+n)-cube
  ComplexMap comparison;            // pushout -> (m+n)-cube
  std::vector<std::size_t> counts;  // nondegenerate cells of the pushout per degree
};

/// Builds the pushout of A (x) D <- A (x) C -> B (x) C for the stated case
/// (boundary: A = boundary of the m-cube, C = boundary of the n-cube; horn_left:
/// A = (i,xi)-horn of the m-cube; horn_right: C = (i,xi)-horn of the n-cube),
/// maps it to the (m+n)-cube and checks that it is a degreewise bijection onto
/// the boundary, the (i,xi)-horn or the (i+m,xi)-horn respectively.
PushoutProductVerdict verify_pushout_product(int m, int n, PushoutCase which, int i = 0, int xi = 0,
                                             std::size_t budget = 1u << 24);

/// A cubical set as a simplicial set: the nerve of its category of elements
/// over the cube category truncated at dim X, up to dimension dmax.
Complex triangulate(const Complex& x, int dmax, std::size_t budget = 1u << 24);
/// Triangulation of a cubical map, both sides taken over the cube category
/// truncated at the dimension of the target.
ComplexMap triangulate_map(const ComplexMap& f, int dmax, std::size_t budget = 1u << 24);

}  // namespace shapekit
