#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shapekit/category.hpp"
#include "shapekit/kernels.hpp"
#include "shapekit/pi1.hpp"
#include "shapekit/presheaf.hpp"
#include "shapekit/probe.hpp"

namespace shapekit {

/// Invariants of the nerve of the category of elements, up to degree d (the
/// nerve is built to d + 1). Agreement is only ever checked on homology and
/// the abelianized fundamental group.
struct ShapeReport {
  int degree = 0;
  std::size_t element_objects = 0;
  std::size_t element_morphisms = 0;
  std::vector<std::size_t> nerve_counts;
  HomologyReport homology;
  /// At the least element object (the least vertex of the nerve); empty
  /// presentation with an empty basepoint for the empty presheaf.
  GroupPresentation pi1;
  HomologyGroup pi1_abelianization;
  ContractibilityReport contractibility;
  friend bool operator==(const ShapeReport&, const ShapeReport&) = default;
};

/// The nerve of elements(X) up to dimension dmax.
Complex elements_nerve(const SetPresheaf& x, int dmax, std::size_t budget = 1u << 24, Exec exec = Exec::parallel);

ShapeReport shape_invariants(const SetPresheaf& x, int d, std::size_t budget = 1u << 24, Exec exec = Exec::parallel);

struct ObjectProbe {
  std::string label;  // object id, or "(a,b)" for pairs
  std::size_t elements = 0;
  ContractibilityReport probe;
};

struct TestCategoryReport {
  int degree = 0;
  bool interval_mode = false;
  /// Interval mode only: the interval is valid and its points are disjoint.
  bool interval_valid = false;
  bool separating = false;
  std::vector<ObjectProbe> objects;  // y(a) x Omega, or y(a) x I
  bool obstructed = false;
  std::string witness;
};

/// Omega mode (no interval): every y(a) x Omega probed to degree d. Interval
/// mode: every y(a) x I probed, and the two points checked to be disjoint.
TestCategoryReport test_category_probe(CategoryPtr a, int d, const std::optional<IntervalData>& interval = std::nullopt,
                                       std::size_t budget = 1u << 24, Exec exec = Exec::parallel);

struct SiftedReport {
  int degree = 0;
  ContractibilityReport nerve;  // of A itself
  std::vector<ObjectProbe> pairs;  // every ordered pair, elements of y(a) x y(b)
  bool obstructed = false;
  std::string witness;
};

SiftedReport sifted_probe(CategoryPtr a, int d, std::size_t budget = 1u << 24, Exec exec = Exec::parallel);

/// Evidence that u is homotopy initial: an interval J on the target and, for
/// every target object b, a map J x y(b) -> y(b) that is the identity on one
/// point of J and constant on the other. components[b] lists the images of
/// the elements of product(J, y(b)).
struct ComparisonCertificate {
  IntervalData interval;
  std::vector<PresheafMorphism> contractions;
};

struct ComparisonReport {
  int degree = 0;
  ShapeReport source;  // of u^* X
  ShapeReport target;  // of X
  bool equal = false;
  bool certified = false;
  std::string certificate_error;  // set when a certificate was supplied but rejected
  bool counterexample = false;    // certified and unequal
  std::string mismatch;
};

ComparisonReport nerve_comparison(const FunctorData& u, const SetPresheaf& x, int d,
                                  const std::optional<ComparisonCertificate>& certificate = std::nullopt,
                                  std::size_t budget = 1u << 24, Exec exec = Exec::parallel);

/// Checks a certificate against u; returns an empty string when it is valid.
std::string check_certificate(const FunctorData& u, const ComparisonCertificate& c);

/// The representable y(1) with its two vertices, on the simplex or cube
/// category truncated at n >= 1 (as built by operator_category).
IntervalData standard_interval(CategoryPtr base);

}  // namespace shapekit
