#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shapekit/complex.hpp"
#include "shapekit/kernels.hpp"

namespace shapekit {

/// The square
///     A --f--> X
///     i        p
///     B --g--> Y
/// with p o f = g o i.
struct LiftingProblem {
  ComplexMap i, p, f, g;
};

/// Endpoints match and the square commutes cellwise.
ValidationReport validate_square(const LiftingProblem& square);

/// A diagonal h: B -> X with h o i = f and p o h = g, found by the map search
/// (first solution in search order), or nothing when none exists. Throws
/// BudgetExceeded when the search runs out first.
std::optional<ComplexMap> find_lift(const LiftingProblem& square, std::size_t budget = 1u << 22);

/// Both triangles commute.
bool is_lift(const LiftingProblem& square, const ComplexMap& h);

struct BoxslashVerdict {
  bool holds = true;
  std::size_t squares = 0;
  /// The first square (in enumeration order: f, then g) without a lift.
  std::optional<LiftingProblem> witness;
};

/// i has the left lifting property against p: every commuting square lifts.
BoxslashVerdict boxslash(const ComplexMap& i, const ComplexMap& p, std::size_t budget = 1u << 22,
                         Exec exec = Exec::parallel);

/// One cell attachment of the small object argument.
struct Attachment {
  int round = 0;
  std::size_t generator = 0;
  /// Images of the generator's source cells in the middle object of the round.
  std::vector<std::string> attaching;
  /// Prefix of the new cells' ids ("r<round>.<k>:").
  std::string prefix;
};

struct UnresolvedSquare {
  std::size_t generator = 0;
  ComplexMap top;     // A_k -> Z
  ComplexMap bottom;  // B_k -> Y
};

struct FactorizationResult {
  ComplexPtr middle;
  ComplexMap left;   // X -> Z
  ComplexMap right;  // Z -> Y
  std::vector<Attachment> history;
  int rounds = 0;
  /// Squares against the final right map that still have no lift.
  std::vector<UnresolvedSquare> residual;
};

/// Bounded small object argument for f against generator inclusions: each
/// round attaches one copy of B_k along every square without a lift.
FactorizationResult factor_bounded(const ComplexMap& f, const std::vector<ComplexMap>& generators, int rounds,
                                   std::size_t budget = 1u << 22);

/// Replays an attachment history on X.
Complex replay(ComplexPtr x, const std::vector<ComplexMap>& generators, const std::vector<Attachment>& history);

/// f: A -> B as a retract of g: A' -> B'.
struct RetractDiagram {
  ComplexMap s;  // A -> A'
  ComplexMap r;  // A' -> A
  ComplexMap t;  // B -> B'
  ComplexMap q;  // B' -> B
};

bool is_retract(const ComplexMap& f, const ComplexMap& g, const RetractDiagram& d);
std::optional<RetractDiagram> retract_search(const ComplexMap& f, const ComplexMap& g,
                                             std::size_t budget = 1u << 22);

}  // namespace shapekit
