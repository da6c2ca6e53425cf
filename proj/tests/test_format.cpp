#include "doctest.h"

#include <memory>

#include "shapekit/cubical.hpp"
#include "shapekit/error.hpp"
#include "shapekit/format.hpp"
#include "shapekit/homology.hpp"
#include "shapekit/nerve.hpp"
#include "shapekit/simplicial.hpp"
#include "support.hpp"

using namespace shapekit;
using shapekit::testing::random_complex;

namespace {

ComplexPtr share(Complex c) { return std::make_shared<const Complex>(std::move(c)); }
CategoryPtr share(FiniteCategory c) { return std::make_shared<const FiniteCategory>(std::move(c)); }

const char* kBoundary2 = R"(kind simplicial v1
name boundary2
# the hollow triangle
cell 0 a
cell 0 b
cell 0 c
cell 1 ab : b a
cell 1 bc : c b
cell 1 ac : c a
)";

void same_complex(const Complex& a, const Complex& b) {
  REQUIRE(a.size() == b.size());
  CHECK(a.shape() == b.shape());
  CHECK(a.truncation() == b.truncation());
  for (Index c = 0; c < a.size(); ++c) {
    CHECK(a.cell(c).id == b.cell(c).id);
    CHECK(a.cell(c).dim == b.cell(c).dim);
    CHECK(a.cell(c).faces == b.cell(c).faces);
  }
}

void same_category(const FiniteCategory& a, const FiniteCategory& b) {
  CHECK(a.objects() == b.objects());
  REQUIRE(a.morphism_count() == b.morphism_count());
  for (Index f = 0; f < a.morphism_count(); ++f) {
    CHECK(a.morphism(f).id == b.morphism(f).id);
    CHECK(a.morphism(f).source == b.morphism(f).source);
    CHECK(a.morphism(f).target == b.morphism(f).target);
  }
  CHECK(a.table() == b.table());
}

std::size_t parse_error_line(const std::string& text, std::size_t* column = nullptr) {
  try {
    parse_document(text);
  } catch (const ParseError& e) {
    if (column) *column = e.column();
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("simplicial documents") {
  const Document d = parse_document(kBoundary2);
  CHECK(d.kind == DocumentKind::simplicial);
  CHECK(d.name == "boundary2");
  CHECK(d.complex()->counts() == std::vector<std::size_t>{3, 3});
  CHECK(homology(*d.complex(), 1).betti() == std::vector<long>{1, 1});

  const std::string text = serialize(d);
  CHECK(serialize(parse_document(text)) == text);
  CHECK(text.find("cell 1 ab : b a\n") != std::string::npos);

  // Degenerate faces and truncation survive.
  const Document loop = parse_document("kind simplicial v1\ntruncation 3\ncell 0 v\ncell 1 e : v v\ncell 2 t : e s0.v e\n");
  CHECK(loop.complex()->truncation() == std::optional<int>(3));
  CHECK(serialize(parse_document(serialize(loop))) == serialize(loop));
  CHECK(serialize(loop).find("cell 2 t : e s0.v e") != std::string::npos);
}

TEST_CASE("rejections") {
  try {
    parse_document("kind simplicial v1\ncell 0 a\ncell 1 ab : b a\n");
    FAIL("expected rejection");
  } catch (const SemanticError& e) {
    CHECK(std::string(e.what()).find("b") != std::string::npos);
    CHECK(std::string(e.what()).find("dangling cell id") != std::string::npos);
  }
  std::size_t col = 0;
  CHECK(parse_error_line("kind simplicial v1\ncell x a\n", &col) == 2);
  CHECK(col == 6);
  CHECK(parse_error_line("kind nothing v1\n", &col) == 1);
  CHECK(col == 6);
  CHECK(parse_error_line("kind simplicial v2\n") == 1);
  CHECK(parse_error_line("\n\ncell 0 a\n") == 3);
  CHECK(parse_error_line("kind simplicial v1\ncell 0 a\ncell 1 e : a\n", &col) == 3);
  CHECK(parse_error_line("kind cubical v1\ncell 0 a\ncell 1 e\nface 1 0 a\n") == 3);
  CHECK(parse_error_line("kind cover v1\nbegin simplicial X\ncell 0 a\n") == 2);
  CHECK(parse_error_line("") == 1);
  // Well formed but not a simplicial set: face identities fail.
  CHECK_THROWS_AS(parse_document("kind simplicial v1\ncell 0 a\ncell 0 b\ncell 1 e : b a\ncell 2 t : e e e\n"),
                  SemanticError);
  // Composition must be associative and total on composable pairs.
  CHECK_THROWS_AS(parse_document("kind category v1\nobj x\nobj y\nmor f x y\nmor g y x\n"), SemanticError);
}

TEST_CASE("round trips on random complexes") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    CAPTURE(seed);
    const auto x = share(random_complex(seed, 3, 30));
    const std::string text = serialize(complex_document(x, "X"));
    const Document back = parse_document(text);
    same_complex(*back.complex(), *x);
    CHECK(serialize(back) == text);
  }
}

TEST_CASE("cubical documents") {
  for (const auto& x : {share(cube(2)), share(cube_boundary(3)), share(cube_horn(2, 1, 0)),
                        share(tensor(share(cube(1)), share(cube_boundary(2)), 3))}) {
    const std::string text = serialize(complex_document(x));
    const Document back = parse_document(text);
    CHECK(back.kind == DocumentKind::cubical);
    same_complex(*back.complex(), *x);
    CHECK(serialize(back) == text);
  }
  const Document sq = parse_document(serialize(complex_document(share(cube(1)))));
  CHECK(sq.complex()->counts() == std::vector<std::size_t>{2, 1});
}

TEST_CASE("categories, presheaves and functors") {
  for (const auto& c : {share(simplex_category(2)), share(cyclic_group_category(4)), share(span_category()),
                        share(cube_category(1)), share(terminal_category())}) {
    const std::string text = serialize(category_document(c, "A"));
    const Document back = parse_document(text);
    same_category(*back.category(), *c);
    CHECK(serialize(back) == text);
  }

  // A category written in any order serializes the same way.
  const std::string one = "kind category v1\nobj y\nobj x\nmor g y z\nobj z\nmor f x y\nmor h x z\ncomp g f = h\n";
  const std::string two = "kind category v1\nobj x\nobj y\nobj z\ncomp g f = h\nmor h x z\nmor f x y\nmor g y z\n";
  CHECK(serialize(parse_document(one)) == serialize(parse_document(two)));

  const auto delta = share(simplex_category(2));
  const SetPresheaf p = presheaf_of(boundary(2), delta);
  const std::string text = serialize(presheaf_document(p, "D2"));
  const Document back = parse_document(text);
  REQUIRE(back.presheaf);
  CHECK(back.presheaf->elements == p.elements);
  CHECK(back.presheaf->action == p.action);
  CHECK(serialize(back) == text);

  const std::string functor = R"(kind functor v1
begin category A
obj a
obj b
mor f a b
end
begin category T
obj t
end
source A
target T
obj a = t
obj b = t
mor f = 1_t
)";
  const Document u = parse_document(functor);
  REQUIRE(u.functor);
  CHECK(validate_functor(*u.functor).ok());
  CHECK(serialize(parse_document(serialize(u))) == serialize(u));
  std::string broken = functor;
  broken.replace(broken.find("obj b = t"), 9, "");
  CHECK_THROWS_AS(parse_document(broken), SemanticError);
}

TEST_CASE("covers, diagrams and map documents") {
  const std::string cover = std::string("kind cover v1\nbegin simplicial circle\n") +
                            "cell 0 0\ncell 0 1\ncell 0 2\ncell 1 01 : 1 0\ncell 1 12 : 2 1\ncell 1 02 : 2 0\n" +
                            "end\nsub a : 01\nsub b : 12\nsub c : 02\n";
  const Document c = parse_document(cover);
  REQUIRE(c.cover);
  CHECK(c.cover->names == std::vector<std::string>{"a", "b", "c"});
  CHECK(serialize(parse_document(serialize(c))) == serialize(c));
  std::string bad = cover;
  bad.replace(bad.find("sub c : 02"), 10, "sub c : 03");
  CHECK_THROWS_AS(parse_document(bad), SemanticError);

  // point <- two points -> edge: the pushout is a circle.
  const std::string diagram = R"(kind diagram v1
begin category S
obj l
obj m
obj r
mor ml m l
mor mr m r
end
begin simplicial pt
cell 0 *
end
begin simplicial ends
cell 0 0
cell 0 1
end
begin simplicial edge
cell 0 0
cell 0 1
cell 1 01 : 1 0
end
object l pt
object m ends
object r edge
map ml : 0=* 1=*
map mr : 0=0 1=1
)";
  const Document d = parse_document(diagram);
  REQUIRE(d.diagram);
  CHECK(homology(*colimit(*d.diagram).complex, 1).betti() == std::vector<long>{1, 1});
  CHECK(serialize(parse_document(serialize(d))) == serialize(d));
  std::string unmapped = diagram;
  unmapped.replace(unmapped.find("map mr"), 18, "");
  CHECK_THROWS_AS(parse_document(unmapped), SemanticError);

  // Maps between chains of arrows are composed when left out.
  const std::string chain = R"(kind diagram v1
begin category L
obj 0
obj 1
obj 2
mor a 0 1
mor b 1 2
mor c 0 2
comp b a = c
end
begin simplicial pt
cell 0 *
end
object 0 pt
object 1 pt
object 2 pt
map a : *=*
map b : *=*
)";
  const Document ch = parse_document(chain);
  CHECK(validate_diagram(*ch.diagram).ok());
  CHECK(serialize(parse_document(serialize(ch))) == serialize(ch));

  const auto d1 = share(simplex(1)), b1 = share(boundary(1)), d0 = share(simplex(0));
  ComplexMap p{d1, d0, {{0, 0}, {0, 0}, {0, 1}}};
  const Document sq = maps_document({{"A", b1}, {"B", d1}, {"X", d1}, {"Y", d0}},
                                    {{"i", inclusion(b1, d1)}, {"p", p}, {"f", inclusion(b1, d1)},
                                     {"g", ComplexMap{d1, d0, {{0, 0}, {0, 0}, {0, 1}}}}},
                                    "square", DocumentKind::lifting_problem);
  const std::string text = serialize(sq);
  const Document back = parse_document(text);
  CHECK(validate_square(back.square()).ok());
  CHECK(serialize(back) == text);
  CHECK(text.find("map p B Y : 0=0 1=0 01=s0.0\n") != std::string::npos);
  std::string not_square = text;
  not_square.replace(not_square.find("map g"), 5, "map h");
  CHECK_THROWS_AS(parse_document(not_square), SemanticError);
}
