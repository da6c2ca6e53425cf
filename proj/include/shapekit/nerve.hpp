#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "shapekit/category.hpp"
#include "shapekit/complex.hpp"
#include "shapekit/kernels.hpp"
#include "shapekit/presheaf.hpp"

namespace shapekit {

/// Nerve of a finite category up to dimension dmax. Vertices are the objects;
/// a nondegenerate n-cell is a chain of n composable non-identity morphisms,
/// named "f1;f2;...;fn" with f1 applied first. The result is marked truncated
/// at dmax when longer chains exist. Throws BudgetExceeded past `budget` cells.
Complex nerve(const FiniteCategory& c, int dmax, std::size_t budget = 1u << 24, Exec exec = Exec::parallel);

/// The map of nerves induced by a functor, on the cells both nerves contain.
/// Chains through identities land on degenerate cells.
ComplexMap nerve_map(const FunctorData& u, ComplexPtr source_nerve, ComplexPtr target_nerve);

/// The simplex category (or the cube category) truncated to [0], ..., [n].
/// Objects are "0".."n"; an operator op: [k] -> [l] is the morphism named
/// "k-l:" + ops::to_string(op). With `injective_only` only the monos are kept.
FiniteCategory operator_category(Shape shape, int n, bool injective_only = false);
inline FiniteCategory simplex_category(int n, bool injective_only = false) {
  return operator_category(Shape::simplicial, n, injective_only);
}
inline FiniteCategory cube_category(int n) { return operator_category(Shape::cubical, n); }

/// The operator named by a morphism of operator_category().
std::optional<Op> operator_of(Shape shape, const FiniteCategory& c, Index f);

/// The functor source -> target sending objects and morphisms to the ones
/// with the same ids (e.g. between truncation levels).
FunctorData inclusion_functor(CategoryPtr source, CategoryPtr target);

/// A simplicial or cubical set as a presheaf on a truncated operator category:
/// the elements over [k] are all references of dimension k (named as in the
/// file format), acted on by precomposition.
SetPresheaf presheaf_of(const Complex& x, CategoryPtr base);

}  // namespace shapekit
