#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shapekit/category.hpp"
#include "shapekit/complex.hpp"
#include "shapekit/descent.hpp"
#include "shapekit/lifting.hpp"
#include "shapekit/presheaf.hpp"

namespace shapekit {

// The text format. Every document starts with `kind <kind> v1`, may give
// `name <name>`, and continues with lines of its kind:
//
//   category    obj <id> [<identity id>] / mor <id> <src> <dst> / comp <g> <f> = <h>
//   simplicial  [truncation <n>] / cell <dim> <id> [: <ref_0> ... <ref_dim>]
//   cubical     [truncation <n>] / cell <dim> <id>, then face <i> <0|1> <ref> per face
//   presheaf    one category block / elt <obj> <id> / act <mor> <elt> = <elt>
//   cover       one simplicial block / sub <name> : <cell ids...>
//   diagram     one category block, complex blocks / object <obj> <complex> /
//               map <mor> : <cell>=<ref> ...
//   functor     two category blocks / source <cat> / target <cat> /
//               obj <a> = <b> / mor <f> = <g>
//   lifting-problem, maps
//               complex blocks / map <name> <src> <dst> : <cell>=<ref> ...
//
// A block is `begin <category|simplicial|cubical> <name>` ... `end` holding the
// body of that kind. A ref is `[s_j...s_k.]<id>` with decreasing indices.
// Blank lines and lines starting with '#' are ignored.

enum class DocumentKind { category, presheaf, simplicial, cubical, cover, diagram, functor, lifting_problem, maps };

std::string to_string(DocumentKind kind);
std::optional<DocumentKind> parse_kind(std::string_view text);

struct Document {
  DocumentKind kind = DocumentKind::simplicial;
  std::string name;
  std::vector<std::pair<std::string, CategoryPtr>> categories;
  std::vector<std::pair<std::string, ComplexPtr>> complexes;
  std::optional<SetPresheaf> presheaf;
  std::optional<Cover> cover;
  std::optional<Diagram> diagram;
  std::optional<FunctorData> functor;
  std::vector<std::pair<std::string, ComplexMap>> maps;

  /// The category of a category document, or the first category block.
  CategoryPtr category() const;
  /// The complex of a simplicial or cubical document, or the first complex block.
  ComplexPtr complex() const;
  /// Throws SemanticError naming the map when it is missing.
  const ComplexMap& map(std::string_view name) const;
  /// The square (i, p, f, g) of a lifting-problem document.
  LiftingProblem square() const;
};

/// Strict parse: positional ParseError for syntax, SemanticError (naming the
/// failing invariant) for objects that do not validate.
Document parse_document(std::string_view text);

/// Canonical text: equal values serialize byte-identically.
std::string serialize(const Document& doc);

Document category_document(CategoryPtr c, std::string name = {});
Document complex_document(ComplexPtr x, std::string name = {});
Document presheaf_document(const SetPresheaf& x, std::string category_name, std::string name = {});
Document maps_document(const std::vector<std::pair<std::string, ComplexPtr>>& complexes,
                       const std::vector<std::pair<std::string, ComplexMap>>& maps, std::string name = {},
                       DocumentKind kind = DocumentKind::maps);

}  // namespace shapekit
