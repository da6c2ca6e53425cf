#include "doctest.h"

#include <memory>
#include <random>

#include "shapekit/descent.hpp"
#include "shapekit/error.hpp"
#include "shapekit/homology.hpp"
#include "shapekit/simplicial.hpp"
#include "support.hpp"

using namespace shapekit;
using shapekit::testing::oracle_homology;
using shapekit::testing::random_complex;

namespace {

ComplexPtr share(Complex c) { return std::make_shared<const Complex>(std::move(c)); }
CategoryPtr share(FiniteCategory c) { return std::make_shared<const FiniteCategory>(std::move(c)); }

// Every cell to the single vertex of a point.
ComplexMap to_point(ComplexPtr x, ComplexPtr point) {
  ComplexMap f{x, point, {}};
  for (const auto& c : x->cells()) f.images.push_back({0, (1u << c.dim) - 1});
  return f;
}

// The span l <- m -> r as a diagram.
Diagram span(ComplexPtr left, ComplexPtr middle, ComplexPtr right, const ComplexMap& to_left,
             const ComplexMap& to_right) {
  Diagram d;
  d.shape = share(span_category());
  const auto& a = *d.shape;
  d.objects.resize(3);
  d.objects[*a.find_object("l")] = left;
  d.objects[*a.find_object("m")] = middle;
  d.objects[*a.find_object("r")] = right;
  d.maps.resize(a.morphism_count());
  for (Index o = 0; o < 3; ++o) d.maps[a.identity(o)] = identity_map(d.objects[o]);
  d.maps[*a.find_morphism("ml")] = to_left;
  d.maps[*a.find_morphism("mr")] = to_right;
  return d;
}

Diagram point_span(ComplexPtr middle) {
  const auto pt = share(simplex(0));
  return span(pt, middle, pt, to_point(middle, pt), to_point(middle, pt));
}

// A random cover: random top cells per member, then every uncovered cell
// goes to a random member.
Cover random_cover(ComplexPtr x, std::uint64_t seed, int members) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<std::string, std::vector<std::string>>> subs;
  for (int k = 0; k < members; ++k) subs.push_back({"U" + std::to_string(k), {}});
  for (Index c = x->size(); c-- > 0;) {
    const Cover partial = make_cover(x, subs);
    bool in = false;
    for (const auto& m : partial.members) in = in || m[c];
    if (!in || rng() % 4 == 0) subs[rng() % members].second.push_back(x->cell(c).id);
  }
  return make_cover(x, subs);
}

}  // namespace

TEST_CASE("covers and their Cech diagonals") {
  const auto circle = share(boundary(2));
  const Cover arcs = make_cover(circle, {{"a", {"01"}}, {"b", {"12"}}, {"c", {"02"}}});
  CHECK_FALSE(uncovered_cell(arcs));
  const Complex c = cech_diagonal(arcs, 3);
  CHECK(validate_complex(c).ok());
  REQUIRE(c.truncation());
  CHECK(*c.truncation() == 3);
  CHECK(homology(c, 2).betti() == std::vector<long>{1, 1, 0});
  CHECK(oracle_homology(c, 2) == oracle_homology(*circle, 2));
  CHECK(c.find("(a,b)|s0.1"));

  // Covering X by itself changes nothing.
  const auto tri = share(simplex(2));
  const Complex self = cech_diagonal(make_cover(tri, {{"X", {"012"}}}), 3);
  CHECK(self.counts() == tri->counts());
  CHECK_FALSE(self.truncation());

  const auto edge = share(simplex(1));
  const Cover ends = make_cover(edge, {{"a", {"0"}}, {"b", {"1"}}});
  CHECK(uncovered_cell(ends) == std::optional<std::string>("01"));
  try {
    cech_diagonal(ends, 2);
    FAIL("expected rejection");
  } catch (const SemanticError& e) {
    CHECK(std::string(e.what()) == "uncovered cell: 01");
  }
  CHECK_THROWS_AS(make_cover(edge, {{"a", {"02"}}}), SemanticError);
}

TEST_CASE("Cech descent on the torus and random covers") {
  const auto circle = share(boundary(2));
  const Product p = product(circle, circle, 2);
  const auto torus = p.complex;
  CHECK(torus->counts() == std::vector<std::size_t>{9, 27, 18});
  // Four pieces by which edge each projection of a triangle lands on.
  std::vector<std::pair<std::string, std::vector<std::string>>> subs;
  auto half = [&](const ComplexMap& proj, Index c) { return circle->cell(proj.images[c].cell).id == "01" ? 0 : 1; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      std::vector<std::string> ids;
      for (Index c : torus->cells_of_dim(2))
        if (half(p.first, c) == i && half(p.second, c) == j) ids.push_back(torus->cell(c).id);
      CHECK(ids.size() == (i + 1) * (j + 1) * 2);
      subs.push_back({"Q" + std::to_string(i) + std::to_string(j), ids});
    }
  const Cover quarters = make_cover(torus, subs);
  REQUIRE_FALSE(uncovered_cell(quarters));
  const Complex c = cech_diagonal(quarters, 3);
  CHECK(homology(c, 2) == homology(*torus, 2));
  CHECK(homology(c, 2).betti() == std::vector<long>{1, 2, 1});

  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    CAPTURE(seed);
    const auto x = share(random_complex(seed, 2, 12));
    const Cover cover = random_cover(x, seed, 2 + static_cast<int>(seed % 2));
    REQUIRE_FALSE(uncovered_cell(cover));
    const Complex diag = cech_diagonal(cover, 2);
    CHECK(validate_complex(diag).ok());
    CHECK(oracle_homology(diag, 1) == oracle_homology(*x, 1));
  }
}

TEST_CASE("colimits of diagrams") {
  const auto pt = share(simplex(0));
  const auto ends = share(boundary(1));
  const Colimit glued = colimit(point_span(ends));
  CHECK(glued.complex->counts() == std::vector<std::size_t>{1});

  const auto edge = share(simplex(1));
  const Diagram loop = span(pt, ends, edge, to_point(ends, pt), inclusion(ends, edge));
  CHECK(validate_diagram(loop).ok());
  const Colimit circle = colimit(loop);
  CHECK(homology(*circle.complex, 1).betti() == std::vector<long>{1, 1});

  Diagram two;
  two.shape = share(discrete_category({"a", "b"}));
  two.objects = {pt, pt};
  two.maps = {identity_map(pt), identity_map(pt)};
  CHECK(colimit(two).complex->counts() == std::vector<std::size_t>{2});

  // A map that does not land in its declared target.
  Diagram bad = loop;
  bad.maps[*bad.shape->find_morphism("mr")] = identity_map(ends);
  CHECK_FALSE(validate_diagram(bad).ok());
  CHECK_THROWS_AS(bar_diagonal(bad, 2), SemanticError);
}

TEST_CASE("bar construction") {
  const auto pt = share(simplex(0));
  Diagram single;
  single.shape = share(terminal_category());
  const auto tri = share(boundary(2));
  single.objects = {tri};
  single.maps = {identity_map(tri)};
  const Complex same = bar_diagonal(single, 3);
  CHECK(same.counts() == tri->counts());
  CHECK(homology(same, 1) == homology(*tri, 1));

  // The homotopy pushout sees the circle where the strict one sees a point.
  const Diagram s0 = point_span(share(boundary(1)));
  const Complex b0 = bar_diagonal(s0, 2);
  CHECK(validate_complex(b0).ok());
  CHECK(homology(b0, 1).betti() == std::vector<long>{1, 1});
  CHECK(oracle_homology(b0, 1).betti == std::vector<long>{1, 1});
  CHECK(homology(*colimit(s0).complex, 0).betti() == std::vector<long>{1});

  const Complex b1 = bar_diagonal(point_span(share(boundary(2))), 3);
  CHECK(homology(b1, 2).betti() == std::vector<long>{1, 0, 1});
  CHECK(oracle_homology(b1, 2).betti == std::vector<long>{1, 0, 1});
}

TEST_CASE("bar and strict colimit agree along a monomorphism") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    CAPTURE(seed);
    const auto y = share(random_complex(seed, 2, 10));
    // X: the subcomplex on the first half of the cells.
    std::vector<Index> half;
    for (Index c = 0; c < y->size() / 2; ++c) half.push_back(c);
    const auto x = share(subcomplex(*y, half));
    const auto pt = share(simplex(0));
    const ComplexPtr z = seed % 2 ? pt : x;
    const ComplexMap xz = seed % 2 ? to_point(x, pt) : identity_map(x);
    const Diagram d = span(y, x, z, inclusion(x, y), xz);
    const Complex bar = bar_diagonal(d, 2);
    const Colimit strict = colimit(d);
    CHECK(oracle_homology(bar, 1) == oracle_homology(*strict.complex, 1));
  }
}

TEST_CASE("Van Kampen and Mayer-Vietoris") {
  const auto tri = share(simplex(2));
  const auto all = van_kampen_check(make_cover(tri, {{"U", {"012"}}, {"V", {"012"}}}), 2);
  CHECK(all.mayer_vietoris);
  CHECK(all.pi1_checked);
  CHECK(all.pi1_agrees);
  CHECK(all.amalgam_abelianization == HomologyGroup{0, {}});

  const auto wedge = share(from_facets({{"a", "b"}, {"b", "c"}, {"a", "c"}, {"a", "d"}, {"d", "e"}, {"a", "e"}}));
  const auto w = van_kampen_check(make_cover(wedge, {{"U", {"a-b", "b-c", "a-c"}}, {"V", {"a-d", "d-e", "a-e"}}}), 1);
  CHECK(w.mayer_vietoris);
  CHECK(w.basepoint == "a");
  CHECK(w.amalgam_abelianization == HomologyGroup{2, {}});
  CHECK(w.direct_abelianization == HomologyGroup{2, {}});
  CHECK(w.ambient.groups[1].betti == 2);

  const auto circle = share(boundary(2));
  const auto arcs = van_kampen_check(make_cover(circle, {{"U", {"01", "12"}}, {"V", {"02"}}}), 1);
  CHECK(arcs.mayer_vietoris);
  CHECK(arcs.component_basepoints == std::vector<std::string>{"0", "2"});
  CHECK(arcs.amalgam.generators.back() == "t1");
  CHECK(arcs.amalgam_abelianization == HomologyGroup{1, {}});
  CHECK(arcs.pi1_agrees);
  CHECK_FALSE(arcs.note.empty());

  // Two stars meeting in three points: the graph K(2,3).
  const auto k23 = share(from_facets({{"p", "u"}, {"q", "u"}, {"r", "u"}, {"p", "v"}, {"q", "v"}, {"r", "v"}}));
  const auto stars = van_kampen_check(make_cover(k23, {{"U", {"p-u", "q-u", "r-u"}}, {"V", {"p-v", "q-v", "r-v"}}}), 1);
  CHECK(stars.mayer_vietoris);
  CHECK(stars.component_basepoints.size() == 3);
  CHECK(stars.amalgam_abelianization == HomologyGroup{2, {}});
  CHECK(stars.pi1_agrees);

  // Random covering pairs: exactness always, and the amalgam against H_1.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CAPTURE(seed);
    const auto x = share(random_complex(seed, 2, 12));
    const auto r = van_kampen_check(random_cover(x, seed + 100, 2), 1);
    CHECK(r.mayer_vietoris);
    if (r.pi1_checked) {
      CHECK(r.pi1_agrees);
      if (vertex_components(*x).back() == 0) CHECK(r.direct_abelianization == homology(*x, 1).groups[1]);
    }
  }
  CHECK_THROWS_AS(van_kampen_check(make_cover(circle, {{"U", {"01"}}}), 1), SemanticError);
}
