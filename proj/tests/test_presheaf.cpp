#include "doctest.h"

#include <memory>
#include <random>
#include <set>

#include "shapekit/error.hpp"
#include "shapekit/presheaf.hpp"

using namespace shapekit;

namespace {

CategoryPtr share(FiniteCategory c) { return std::make_shared<const FiniteCategory>(std::move(c)); }

/// Arrow category a -> b.
CategoryPtr arrow() {
  CategoryBuilder b;
  const Index a = b.add_object("a");
  const Index t = b.add_object("b");
  b.add_morphism("f", a, t);
  return share(b.build());
}

/// Sieves on `a` by brute force over all subsets of morphisms into a.
std::size_t brute_sieves(const FiniteCategory& c, Index a) {
  const auto in = c.incoming(a);
  std::size_t count = 0;
  for (std::uint32_t s = 0; s < (1u << in.size()); ++s) {
    std::set<Index> sieve;
    for (std::size_t k = 0; k < in.size(); ++k)
      if (s >> k & 1u) sieve.insert(in[k]);
    bool closed = true;
    for (Index f : sieve)
      for (Index h : c.incoming(c.morphism(f).source))
        if (!sieve.count(*c.compose(f, h))) closed = false;
    count += closed;
  }
  return count;
}

/// Subpresheaves of X by brute force over subsets of all elements.
std::size_t brute_subpresheaves(const SetPresheaf& x) {
  const auto& c = *x.base;
  std::vector<std::pair<Index, Index>> all;
  for (Index a = 0; a < c.object_count(); ++a)
    for (Index e = 0; e < x.elements[a].size(); ++e) all.emplace_back(a, e);
  std::size_t count = 0;
  for (std::uint32_t s = 0; s < (1u << all.size()); ++s) {
    std::set<std::pair<Index, Index>> in;
    for (std::size_t k = 0; k < all.size(); ++k)
      if (s >> k & 1u) in.insert(all[k]);
    bool closed = true;
    for (auto [a, e] : in)
      for (Index f : c.incoming(a))
        if (!in.count({c.morphism(f).source, x.act(f, e)})) closed = false;
    count += closed;
  }
  return count;
}

/// A random presheaf on the span l <- m -> r: arbitrary restriction maps.
SetPresheaf random_span_presheaf(CategoryPtr span, std::mt19937& rng) {
  PresheafBuilder b(span);
  const auto& c = *span;
  std::vector<Index> size(3);
  for (Index a = 0; a < 3; ++a) {
    size[a] = std::uniform_int_distribution<Index>(c.object(a) == "m" ? 1 : 0, 3)(rng);
    for (Index e = 0; e < size[a]; ++e) b.add_element(a, c.object(a) + std::to_string(e));
  }
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& m = c.morphism(f);
    for (Index y = 0; y < size[m.target]; ++y)
      b.set_action(f, y, c.is_identity(f) ? y : std::uniform_int_distribution<Index>(0, size[m.source] - 1)(rng));
  }
  return b.build();
}

}  // namespace

TEST_CASE("subobject classifier sizes") {
  auto t = share(terminal_category());
  auto omega = subobject_classifier(t);
  CHECK(omega.elements[0].size() == 2);
  CHECK(validate_presheaf(omega).ok());

  auto ar = arrow();
  auto om = subobject_classifier(ar);
  CHECK(om.elements[*ar->find_object("b")].size() == 3);
  CHECK(om.elements[*ar->find_object("a")].size() == 2);
  CHECK(brute_sieves(*ar, *ar->find_object("b")) == 3);

  auto d = share(discrete_category({"a", "b"}));
  auto od = subobject_classifier(d);
  CHECK(od.elements[0].size() == 2);
  CHECK(od.elements[1].size() == 2);
}

TEST_CASE("subobject classifier matches brute-force sieves and subobjects of representables") {
  std::vector<CategoryPtr> cats{share(linear_order(2)), share(cyclic_group_category(2)),
                                share(cyclic_group_category(3)), share(span_category()),
                                share(codiscrete_groupoid({"a", "b"})), share(linear_order(3)), arrow()};
  for (const auto& c : cats) {
    REQUIRE(c->morphism_count() <= 12);
    auto omega = subobject_classifier(c);
    CHECK(validate_presheaf(omega).ok());
    for (Index a = 0; a < c->object_count(); ++a) {
      CHECK(omega.elements[a].size() == brute_sieves(*c, a));
      CHECK(omega.elements[a].size() == brute_subpresheaves(representable(c, a)));
    }
  }
}

TEST_CASE("subobject classifier honors its budget") {
  auto c = share(linear_order(4));
  CHECK_THROWS_AS(subobject_classifier(c, 3), BudgetExceeded);
}

TEST_CASE("categories of elements") {
  auto c = share(linear_order(2));
  auto el = elements(terminal_presheaf(c));
  CHECK(el.object_count() == c->object_count());
  CHECK(el.morphism_count() == c->morphism_count());
  CHECK(validate_category(el).ok());

  auto empty = elements(empty_presheaf(c));
  CHECK(empty.object_count() == 0);
  CHECK(empty.morphism_count() == 0);

  auto ar = arrow();
  auto y = representable(ar, *ar->find_object("b"));
  auto ey = elements(y);
  CHECK(ey.object_count() == 2);
  int non_identity = 0;
  for (Index f = 0; f < ey.morphism_count(); ++f) non_identity += !ey.is_identity(f);
  CHECK(non_identity == 1);
}

TEST_CASE("elements of random presheaves are categories and functorial") {
  auto span = share(span_category());
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    auto x = random_span_presheaf(span, rng);
    auto z = random_span_presheaf(span, rng);
    REQUIRE(validate_presheaf(x).ok());
    auto ex = share(elements(x));
    CHECK(validate_category(*ex).ok());
    // The projection X x Z -> X is a presheaf morphism; it induces a functor.
    auto xz = product(x, z);
    REQUIRE(validate_presheaf(xz).ok());
    PresheafMorphism proj;
    for (Index a = 0; a < 3; ++a) {
      proj.components.emplace_back();
      for (const auto& id : xz.elements[a]) {
        const auto comma = id.find(',');
        proj.components.back().push_back(*x.find_element(a, id.substr(1, comma - 1)));
      }
    }
    CHECK(validate_presheaf_morphism(xz, x, proj).ok());
    auto exz = share(elements(xz));
    CHECK(validate_functor(elements_functor(xz, x, proj, exz, ex)).ok());
  }
}

TEST_CASE("restriction") {
  auto c = share(span_category());
  std::mt19937 rng(3);
  auto x = random_span_presheaf(c, rng);
  auto r = restrict(identity_functor(c), x);
  CHECK(r.elements == x.elements);
  CHECK(r.action == x.action);

  auto t = share(terminal_category());
  PresheafBuilder b(t);
  b.add_element(0, "p");
  b.add_element(0, "q");
  b.set_action(0, 0, 0);
  b.set_action(0, 1, 1);
  auto two = b.build();
  auto constant = restrict(functor_to_terminal(c, t), two);
  CHECK(validate_presheaf(constant).ok());
  for (Index a = 0; a < 3; ++a) CHECK(constant.elements[a].size() == 2);
  for (Index f = 0; f < c->morphism_count(); ++f) CHECK(constant.action[f] == std::vector<Index>{0, 1});
}

TEST_CASE("presheaf drafts") {
  auto ar = arrow();
  PresheafDraft d{ar, {{"a", "x"}, {"b", "y"}, {"b", "z"}}, {{"f", "y", "x"}, {"f", "z", "x"}}};
  CHECK(validate_presheaf(d).ok());
  auto x = build_presheaf(d);
  CHECK(x.total_size() == 3);

  PresheafDraft missing{ar, {{"a", "x"}, {"b", "y"}}, {}};
  CHECK(validate_presheaf(missing).mentions("action not total"));
  PresheafDraft dangling{ar, {{"a", "x"}, {"b", "y"}}, {{"f", "y", "w"}}};
  CHECK(validate_presheaf(dangling).mentions("dangling element id"));
  PresheafDraft dup{ar, {{"a", "x"}, {"a", "x"}}, {}};
  CHECK(validate_presheaf(dup).mentions("duplicate element id"));
  CHECK_THROWS_AS(build_presheaf(missing), SemanticError);
}

TEST_CASE("composition law for presheaves") {
  auto c = share(cyclic_group_category(2));
  PresheafBuilder b(c);
  b.add_element(0, "u");
  b.add_element(0, "v");
  const Index g = *c->find_morphism("g1");
  const Index e = *c->find_morphism("e");
  b.set_action(e, 0, 0);
  b.set_action(e, 1, 1);
  // g acting as a constant map: g o g = e would need the identity.
  b.set_action(g, 0, 0);
  b.set_action(g, 1, 0);
  CHECK(validate_presheaf(b.build()).mentions("presheaf composition"));
}

TEST_CASE("global elements and intervals") {
  auto ar = arrow();
  auto om = subobject_classifier(ar);
  // The maximal and empty sieves are global elements.
  GlobalElement top, bottom;
  for (Index a = 0; a < 2; ++a) {
    bottom.push_back(*om.find_element(a, "{}"));
    Index best = 0;
    for (Index k = 0; k < om.elements[a].size(); ++k)
      if (om.elements[a][k].size() > om.elements[a][best].size()) best = k;
    top.push_back(best);
  }
  IntervalData i{om, bottom, top};
  CHECK(validate_interval(i).ok());
  CHECK(is_separating(i));
  IntervalData same{om, top, top};
  CHECK_FALSE(is_separating(same));
}
