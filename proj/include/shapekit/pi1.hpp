#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "shapekit/complex.hpp"
#include "shapekit/homology.hpp"

namespace shapekit {

/// A letter is a generator number g >= 1 (or -g for its inverse).
using Word = std::vector<int>;

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  std::string basepoint;
  /// Tietze moves applied, and whether the move budget ran out first.
  std::size_t moves = 0;
  bool budget_exhausted = false;
  friend bool operator==(const GroupPresentation&, const GroupPresentation&) = default;
};

/// Presentation of the fundamental group at a vertex: a breadth-first spanning
/// tree of its component, one generator per other nondegenerate edge and one
/// relator per nondegenerate 2-cell, followed by Tietze simplification.
GroupPresentation pi1_presentation(const Complex& x, const std::string& basepoint, std::size_t tietze_budget = 1000);
/// The unsimplified presentation.
GroupPresentation pi1_raw(const Complex& x, const std::string& basepoint);
/// Unsimplified presentation relative to a given spanning tree of the
/// basepoint's component (flags indexed by cell).
GroupPresentation pi1_with_tree(const Complex& x, const std::string& basepoint, const std::vector<char>& tree);

/// Source and target vertex of a nondegenerate edge.
std::pair<Index, Index> edge_endpoints(const Complex& x, Index edge);

/// Removes generators defined by relators of length <= 2 and deletes trivial
/// relators, at most `budget` moves.
void tietze_simplify(GroupPresentation& p, std::size_t budget);

/// Free and cyclic reduction.
Word reduce_word(const Word& w);

/// Abelianization through the Smith form of the exponent-sum matrix.
HomologyGroup abelianization(const GroupPresentation& p);

/// "<a, b | a b a^-1 b^-1>".
std::string to_string(const GroupPresentation& p);

/// Connected components of the 1-skeleton; entry v is the least vertex index
/// of the component of vertex v.
std::vector<Index> vertex_components(const Complex& x);

}  // namespace shapekit
