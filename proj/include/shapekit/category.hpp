#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shapekit/validation.hpp"

namespace shapekit {

using Index = std::uint32_t;

/// A finite category with an explicit composition table.
///
/// Objects and morphisms are identified by opaque string ids and stored in
/// lexicographic id order; every iteration over them follows that order.
/// Identity morphisms are ordinary entries of the morphism list.
class FiniteCategory {
 public:
  struct Morphism {
    std::string id;
    Index source = 0;
    Index target = 0;
  };

  std::size_t object_count() const { return objects_.size(); }
  std::size_t morphism_count() const { return morphisms_.size(); }
  const std::string& object(Index a) const { return objects_[a]; }
  const Morphism& morphism(Index f) const { return morphisms_[f]; }
  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<Morphism>& morphisms() const { return morphisms_; }

  std::optional<Index> find_object(std::string_view id) const;
  std::optional<Index> find_morphism(std::string_view id) const;

  Index identity(Index a) const { return identities_[a]; }
  bool is_identity(Index f) const { return identities_[morphisms_[f].source] == f; }

  /// g ∘ f, when the table has an entry for the pair.
  std::optional<Index> compose(Index g, Index f) const;

  /// Morphisms with the given source / target, in id order.
  std::span<const Index> outgoing(Index a) const { return outgoing_[a]; }
  std::span<const Index> incoming(Index a) const { return incoming_[a]; }

  /// All (g, f) -> h entries of the table.
  const std::unordered_map<std::uint64_t, Index>& table() const { return composition_; }
  static std::uint64_t key(Index g, Index f) { return (std::uint64_t{g} << 32) | f; }

 private:
  friend class CategoryBuilder;
  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<Index> identities_;
  std::unordered_map<std::uint64_t, Index> composition_;
  std::vector<std::vector<Index>> outgoing_;
  std::vector<std::vector<Index>> incoming_;
  std::unordered_map<std::string, Index> object_index_;
  std::unordered_map<std::string, Index> morphism_index_;
};

using CategoryPtr = std::shared_ptr<const FiniteCategory>;

/// Index-based construction. build() sorts objects and morphisms by id and
/// remaps everything; the table is not checked (see validate_category).
class CategoryBuilder {
 public:
  /// Adds an object with an identity morphism named `identity_id`
  /// (default "1_<id>").
  Index add_object(std::string id, std::string identity_id = {});
  Index add_morphism(std::string id, Index source, Index target);
  void set_composite(Index g, Index f, Index h);
  /// Adds id∘f = f and f∘id = f for every morphism (on by default in build()).
  void fill_identity_composites();
  Index identity_of(Index object) const { return identities_[object]; }

  FiniteCategory build(bool with_identity_composites = true);

 private:
  std::vector<std::string> objects_;
  std::vector<Index> identities_;
  std::vector<FiniteCategory::Morphism> morphisms_;
  std::vector<std::pair<std::uint64_t, Index>> composites_;
};

/// Raw, string-level category declarations as they appear in an input file.
struct CategoryDraft {
  struct Object {
    std::string id;
    std::string identity;  // empty: "1_<id>"
  };
  struct Arrow {
    std::string id, source, target;
  };
  struct Composite {
    std::string second, first, result;  // second ∘ first = result
  };
  std::vector<Object> objects;
  std::vector<Arrow> arrows;
  std::vector<Composite> composites;
};

/// Structural problems (duplicate or dangling ids) are reported with
/// Violation::Kind::Malformed; when any are present the law checks are skipped.
ValidationReport validate_category(const CategoryDraft& draft);
ValidationReport validate_category(const FiniteCategory& category);

/// Builds and validates; throws SemanticError on any violation.
FiniteCategory build_category(const CategoryDraft& draft);

/// A functor between finite categories given by its object and morphism maps.
struct FunctorData {
  CategoryPtr source;
  CategoryPtr target;
  std::vector<Index> on_objects;
  std::vector<Index> on_morphisms;
};

ValidationReport validate_functor(const FunctorData& functor);
FunctorData identity_functor(CategoryPtr category);
/// The unique functor to the terminal category `terminal`.
FunctorData functor_to_terminal(CategoryPtr source, CategoryPtr terminal);

// Small named categories used throughout the tests and fixtures.
FiniteCategory terminal_category();
FiniteCategory discrete_category(const std::vector<std::string>& objects);
/// One object "*" with morphisms Z/order (identity "e", generator powers "g1".."g{order-1}").
FiniteCategory cyclic_group_category(unsigned order);
/// The poset {0 < 1 < ... < n}.
FiniteCategory linear_order(unsigned n);
/// The contractible groupoid on the given objects (exactly one morphism between any two).
FiniteCategory codiscrete_groupoid(const std::vector<std::string>& objects);
/// a <- c -> b (a span; objects "l", "m", "r", arrows "ml": m->l, "mr": m->r).
FiniteCategory span_category();

}  // namespace shapekit
