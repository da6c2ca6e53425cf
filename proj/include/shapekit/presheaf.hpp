#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shapekit/category.hpp"

namespace shapekit {

/// A set-valued presheaf on a finite category. Elements of each X(a) are kept
/// sorted by id; action[f][y] is X(f)(y) for f: a -> b and y in X(b).
struct SetPresheaf {
  CategoryPtr base;
  std::vector<std::vector<std::string>> elements;
  std::vector<std::vector<Index>> action;

  std::optional<Index> find_element(Index object, std::string_view id) const;
  std::size_t total_size() const;
  Index act(Index f, Index y) const { return action[f][y]; }
};

class PresheafBuilder {
 public:
  explicit PresheafBuilder(CategoryPtr base);
  Index add_element(Index object, std::string id);
  void set_action(Index f, Index y, Index x);
  SetPresheaf build();

 private:
  CategoryPtr base_;
  std::vector<std::vector<std::string>> elements_;
  std::vector<std::vector<Index>> action_;
};

/// Raw presheaf declarations as read from a file.
struct PresheafDraft {
  struct Element {
    std::string object, id;
  };
  struct Action {
    std::string morphism, from, to;  // X(morphism)(from) = to
  };
  CategoryPtr base;
  std::vector<Element> elements;
  std::vector<Action> actions;
};

ValidationReport validate_presheaf(const SetPresheaf& x);
ValidationReport validate_presheaf(const PresheafDraft& draft);
SetPresheaf build_presheaf(const PresheafDraft& draft);

/// Componentwise maps X(a) -> Y(a).
struct PresheafMorphism {
  std::vector<std::vector<Index>> components;
};

ValidationReport validate_presheaf_morphism(const SetPresheaf& x, const SetPresheaf& y,
                                            const PresheafMorphism& phi);

SetPresheaf representable(CategoryPtr base, Index object);
SetPresheaf terminal_presheaf(CategoryPtr base);
SetPresheaf empty_presheaf(CategoryPtr base);
/// Elements are named "(x,y)".
SetPresheaf product(const SetPresheaf& x, const SetPresheaf& y);
/// u^* X: (u^*X)(a) = X(u a).
SetPresheaf restrict(const FunctorData& u, const SetPresheaf& x);
/// Sieves on each object, by exhaustive enumeration. Throws BudgetExceeded
/// when the sieve count at some object passes `budget`.
SetPresheaf subobject_classifier(CategoryPtr base, std::size_t budget = 1u << 16);

/// The category of elements: objects "a:x", morphisms "f:y" for f: a -> b and
/// y in X(b) (the source element is X(f)(y)).
FiniteCategory elements(const SetPresheaf& x);
/// The functor el(X) -> el(Y) induced by phi; both categories must have come
/// from elements().
FunctorData elements_functor(const SetPresheaf& x, const SetPresheaf& y, const PresheafMorphism& phi,
                             CategoryPtr el_x, CategoryPtr el_y);

/// A global element: one element per object, compatible with the action.
using GlobalElement = std::vector<Index>;
bool is_global_element(const SetPresheaf& x, const GlobalElement& p);

/// (I, d0, d1): a presheaf with two global points.
struct IntervalData {
  SetPresheaf presheaf;
  GlobalElement point0;
  GlobalElement point1;
};

ValidationReport validate_interval(const IntervalData& interval);
/// The two points have empty intersection (their pullback is the empty presheaf).
bool is_separating(const IntervalData& interval);
/// u^* of an interval, with the points restricted along u.
IntervalData restrict(const FunctorData& u, const IntervalData& interval);

}  // namespace shapekit
