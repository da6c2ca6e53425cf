#include "shapekit/shape.hpp"

#include <exception>
#include <memory>

#include "shapekit/error.hpp"
#include "shapekit/nerve.hpp"

namespace shapekit {

Complex elements_nerve(const SetPresheaf& x, int dmax, std::size_t budget, Exec exec) {
  return nerve(elements(x), dmax, budget, exec);
}

ShapeReport shape_invariants(const SetPresheaf& x, int d, std::size_t budget, Exec exec) {
  if (d < 0) throw SemanticError("shape_invariants: negative degree");
  const FiniteCategory el = elements(x);
  const Complex n = nerve(el, d + 1, budget, exec);
  ShapeReport r;
  r.degree = d;
  r.element_objects = el.object_count();
  r.element_morphisms = el.morphism_count();
  r.nerve_counts = n.counts();
  r.contractibility = contractibility_probe(n, d);
  r.homology = r.contractibility.homology;
  if (!n.empty()) {
    r.pi1 = pi1_presentation(n, n.cell(0).id);
    r.pi1_abelianization = abelianization(r.pi1);
  }
  return r;
}

namespace {

// Records the first obstruction of a list of probes.
template <class Probes>
void summarize(const Probes& probes, bool& obstructed, std::string& witness) {
  for (const auto& p : probes)
    if (p.probe.obstructed && !obstructed) {
      obstructed = true;
      witness = p.label + ": " + p.probe.witness;
    }
}

ObjectProbe probe_elements(std::string label, const SetPresheaf& x, int d, std::size_t budget, Exec exec) {
  const FiniteCategory el = elements(x);
  ObjectProbe p;
  p.label = std::move(label);
  p.elements = el.object_count();
  // The per-object probes already run side by side; keep each nerve serial.
  (void)exec;
  p.probe = contractibility_probe(nerve(el, d + 1, budget, Exec::serial), d);
  return p;
}

}  // namespace

TestCategoryReport test_category_probe(CategoryPtr a, int d, const std::optional<IntervalData>& interval,
                                       std::size_t budget, Exec exec) {
  if (d < 0) throw SemanticError("test_category_probe: negative degree");
  TestCategoryReport r;
  r.degree = d;
  r.interval_mode = interval.has_value();
  SetPresheaf factor;
  if (interval) {
    if (interval->presheaf.base != a && interval->presheaf.base->objects() != a->objects())
      throw SemanticError("test_category_probe: interval lives on another category");
    r.interval_valid = validate_interval(*interval).ok();
    if (!r.interval_valid) {
      r.obstructed = true;
      r.witness = "invalid interval";
      return r;
    }
    r.separating = is_separating(*interval);
    factor = interval->presheaf;
  } else {
    factor = subobject_classifier(a, budget);
  }
  const auto count = static_cast<long>(a->object_count());
  r.objects.resize(count);
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long o = 0; o < count; ++o) {
    try {
      const auto idx = static_cast<Index>(o);
      r.objects[o] = probe_elements(a->object(idx), product(representable(a, idx), factor), d, budget, exec);
    } catch (...) {
      errors[o] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  if (interval && !r.separating) {
    r.obstructed = true;
    r.witness = "interval points intersect";
  }
  summarize(r.objects, r.obstructed, r.witness);
  return r;
}

SiftedReport sifted_probe(CategoryPtr a, int d, std::size_t budget, Exec exec) {
  if (d < 0) throw SemanticError("sifted_probe: negative degree");
  SiftedReport r;
  r.degree = d;
  r.nerve = contractibility_probe(nerve(*a, d + 1, budget, exec), d);
  const auto n = static_cast<long>(a->object_count());
  r.pairs.resize(n * n);
  std::vector<std::exception_ptr> errors(n * n);
  std::vector<SetPresheaf> reps;
  for (Index o = 0; o < a->object_count(); ++o) reps.push_back(representable(a, o));
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (long k = 0; k < n * n; ++k) {
    const auto i = static_cast<Index>(k / n), j = static_cast<Index>(k % n);
    try {
      r.pairs[k] = probe_elements("(" + a->object(i) + "," + a->object(j) + ")", product(reps[i], reps[j]), d, budget,
                                  exec);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  if (r.nerve.obstructed) {
    r.obstructed = true;
    r.witness = "nerve: " + r.nerve.witness;
  }
  summarize(r.pairs, r.obstructed, r.witness);
  return r;
}

std::string check_certificate(const FunctorData& u, const ComparisonCertificate& c) {
  const auto& target = u.target;
  const IntervalData& j = c.interval;
  if (j.presheaf.base->objects() != target->objects()) return "interval is not on the target category";
  if (const auto v = validate_interval(j); !v.ok()) return "interval: " + v.violations.front().law;
  const IntervalData image = restrict(u, j);
  if (const auto v = validate_interval(image); !v.ok()) return "restricted interval: " + v.violations.front().law;
  if (c.contractions.size() != target->object_count()) return "one contraction per target object required";
  for (Index b = 0; b < target->object_count(); ++b) {
    const std::string where = "contraction at " + target->object(b);
    const SetPresheaf yb = representable(target, b);
    const SetPresheaf jy = product(j.presheaf, yb);
    const auto& h = c.contractions[b];
    if (const auto v = validate_presheaf_morphism(jy, yb, h); !v.ok())
      return where + ": " + v.violations.front().law + " " + v.violations.front().witness;
    // One point restricts to the identity, the other to a constant.
    auto restricted = [&](const GlobalElement& p, Index o, Index y) {
      const std::string id = "(" + j.presheaf.elements[o][p[o]] + "," + yb.elements[o][y] + ")";
      return h.components[o][*jy.find_element(o, id)];
    };
    auto is_identity = [&](const GlobalElement& p) {
      for (Index o = 0; o < target->object_count(); ++o)
        for (Index y = 0; y < yb.elements[o].size(); ++y)
          if (restricted(p, o, y) != y) return false;
      return true;
    };
    auto is_constant = [&](const GlobalElement& p) {
      GlobalElement value(target->object_count());
      for (Index o = 0; o < target->object_count(); ++o) {
        if (yb.elements[o].empty()) return false;
        value[o] = restricted(p, o, 0);
        for (Index y = 1; y < yb.elements[o].size(); ++y)
          if (restricted(p, o, y) != value[o]) return false;
      }
      return is_global_element(yb, value);
    };
    const bool ok = (is_identity(j.point0) && is_constant(j.point1)) || (is_identity(j.point1) && is_constant(j.point0));
    if (!ok) return where + ": not the identity on one point and constant on the other";
  }
  return {};
}

ComparisonReport nerve_comparison(const FunctorData& u, const SetPresheaf& x, int d,
                                  const std::optional<ComparisonCertificate>& certificate, std::size_t budget,
                                  Exec exec) {
  if (const auto v = validate_functor(u); !v.ok()) throw SemanticError("nerve_comparison: invalid functor (" + v.violations.front().law + ")");
  ComparisonReport r;
  r.degree = d;
  r.source = shape_invariants(restrict(u, x), d, budget, exec);
  r.target = shape_invariants(x, d, budget, exec);
  r.equal = r.source.homology == r.target.homology && r.source.pi1_abelianization == r.target.pi1_abelianization;
  if (!r.equal) {
    for (int n = 0; n <= d; ++n)
      if (r.source.homology.groups[n] != r.target.homology.groups[n]) {
        r.mismatch = "H" + std::to_string(n) + ": " + to_string(r.source.homology.groups[n]) + " vs " +
                     to_string(r.target.homology.groups[n]);
        break;
      }
    if (r.mismatch.empty())
      r.mismatch = "pi1 abelianization: " + to_string(r.source.pi1_abelianization) + " vs " +
                   to_string(r.target.pi1_abelianization);
  }
  if (certificate) {
    r.certificate_error = check_certificate(u, *certificate);
    r.certified = r.certificate_error.empty();
  }
  r.counterexample = r.certified && !r.equal;
  return r;
}

IntervalData standard_interval(CategoryPtr base) {
  const auto one = base->find_object("1");
  if (!one) throw SemanticError("standard_interval: no object 1");
  IntervalData i{representable(base, *one), {}, {}};
  for (Index o = 0; o < base->object_count(); ++o) {
    const std::string& k = base->object(o);
    // Constant maps [k] -> [1]; cube maps have one output coordinate.
    const bool cube = base->find_morphism("1-1:a").has_value();
    const int len = cube ? 1 : std::stoi(k) + 1;
    const auto p0 = i.presheaf.find_element(o, k + "-1:" + std::string(len, '0'));
    const auto p1 = i.presheaf.find_element(o, k + "-1:" + std::string(len, '1'));
    if (!p0 || !p1) throw SemanticError("standard_interval: base is not an operator category");
    i.point0.push_back(*p0);
    i.point1.push_back(*p1);
  }
  return i;
}

}  // namespace shapekit
