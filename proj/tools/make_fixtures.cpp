// Writes the sample documents under the given directory (default: fixtures).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "shapekit/cubical.hpp"
#include "shapekit/format.hpp"
#include "shapekit/nerve.hpp"
#include "shapekit/simplicial.hpp"

using namespace shapekit;

namespace {

ComplexPtr share(Complex c) { return std::make_shared<const Complex>(std::move(c)); }
CategoryPtr share(FiniteCategory c) { return std::make_shared<const FiniteCategory>(std::move(c)); }

ComplexMap to_point(ComplexPtr x, ComplexPtr pt) {
  ComplexMap f{x, pt, {}};
  for (const auto& c : x->cells()) f.images.push_back({0, (1u << c.dim) - 1});
  return f;
}

Document cover_document(ComplexPtr x, const std::string& block,
                        const std::vector<std::pair<std::string, std::vector<std::string>>>& subs) {
  Document d;
  d.kind = DocumentKind::cover;
  d.complexes.push_back({block, x});
  d.cover = make_cover(x, subs);
  return d;
}

// l <- m -> r.
Document span_document(ComplexPtr l, const std::string& ln, ComplexPtr m, const std::string& mn, ComplexPtr r,
                       const std::string& rn, const ComplexMap& ml, const ComplexMap& mr) {
  Document d;
  d.kind = DocumentKind::diagram;
  const auto shape = share(span_category());
  d.categories.push_back({"span", shape});
  for (auto [name, x] : {std::pair{ln, l}, std::pair{mn, m}, std::pair{rn, r}}) {
    bool have = false;
    for (const auto& c : d.complexes) have = have || c.second == x;
    if (!have) d.complexes.push_back({name, x});
  }
  Diagram g;
  g.shape = shape;
  g.objects.resize(3);
  g.objects[*shape->find_object("l")] = l;
  g.objects[*shape->find_object("m")] = m;
  g.objects[*shape->find_object("r")] = r;
  g.maps.resize(shape->morphism_count());
  for (Index o = 0; o < 3; ++o) g.maps[shape->identity(o)] = identity_map(g.objects[o]);
  g.maps[*shape->find_morphism("ml")] = ml;
  g.maps[*shape->find_morphism("mr")] = mr;
  d.diagram = std::move(g);
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& file, const Document& d) {
    std::ofstream(dir / file) << serialize(d);
    std::cout << (dir / file).string() << "\n";
  };

  const auto pt = share(simplex(0)), d1 = share(simplex(1)), d2 = share(simplex(2));
  const auto b1 = share(boundary(1)), b2 = share(boundary(2)), h21 = share(horn(2, 1));

  write("boundary2.sx", complex_document(b2, "boundary2"));
  write("boundary3.sx", complex_document(share(boundary(3)), "boundary3"));
  write("rp2.sx", complex_document(share(from_facets({{"1", "2", "4"},
                                                      {"1", "2", "6"},
                                                      {"1", "3", "5"},
                                                      {"1", "3", "6"},
                                                      {"1", "4", "5"},
                                                      {"2", "3", "4"},
                                                      {"2", "3", "5"},
                                                      {"2", "5", "6"},
                                                      {"3", "4", "6"},
                                                      {"4", "5", "6"}})),
                                   "rp2"));
  const auto torus = product(b2, b2, 2);
  write("torus.sx", complex_document(torus.complex, "torus"));

  write("circle-arcs.cover", cover_document(b2, "circle", {{"a", {"01"}}, {"b", {"12"}}, {"c", {"02"}}}));
  write("circle-two-arcs.cover", cover_document(b2, "circle", {{"U", {"01", "12"}}, {"V", {"02"}}}));
  write("triangle-self.cover", cover_document(d2, "triangle", {{"X", {"012"}}}));
  const auto wedge =
      share(from_facets({{"a", "b"}, {"b", "c"}, {"a", "c"}, {"a", "d"}, {"d", "e"}, {"a", "e"}}));
  write("wedge.cover", cover_document(wedge, "wedge", {{"U", {"a-b", "b-c", "a-c"}}, {"V", {"a-d", "d-e", "a-e"}}}));
  // The torus in four quarters, by which edge each projection of a triangle lands on.
  std::vector<std::pair<std::string, std::vector<std::string>>> quarters;
  auto half = [&](const ComplexMap& p, Index c) { return b2->cell(p.images[c].cell).id == "01" ? 0 : 1; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      std::vector<std::string> ids;
      for (Index c : torus.complex->cells_of_dim(2))
        if (half(torus.first, c) == i && half(torus.second, c) == j) ids.push_back(torus.complex->cell(c).id);
      quarters.push_back({"Q" + std::to_string(i) + std::to_string(j), ids});
    }
  write("torus-quarters.cover", cover_document(torus.complex, "torus", quarters));

  write("suspension-s0.diagram", span_document(pt, "pt", b1, "ends", pt, "pt", to_point(b1, pt), to_point(b1, pt)));
  write("suspension-s1.diagram", span_document(pt, "pt", b2, "circle", pt, "pt", to_point(b2, pt), to_point(b2, pt)));
  write("glued-edge.diagram",
        span_document(pt, "pt", b1, "ends", d1, "edge", to_point(b1, pt), inclusion(b1, d1)));

  const ComplexMap edge_to_point = to_point(d1, pt);
  ComplexMap swap{b1, d1, {{*d1->find("1"), 0}, {*d1->find("0"), 0}}};
  write("swapped-ends.lift", maps_document({{"ends", b1}, {"edge", d1}, {"pt", pt}},
                                           {{"i", inclusion(b1, d1)}, {"p", edge_to_point}, {"f", swap},
                                            {"g", edge_to_point}},
                                           "swapped-ends", DocumentKind::lifting_problem));
  write("inner-horn.lift",
        maps_document({{"horn", h21}, {"triangle", d2}, {"pt", pt}},
                      {{"i", inclusion(h21, d2)}, {"p", to_point(d2, pt)},
                       {"f", inclusion(h21, d2)}, {"g", to_point(d2, pt)}},
                      "inner-horn", DocumentKind::lifting_problem));
  write("inner-horn-edge.maps", maps_document({{"horn", h21}, {"triangle", d2}, {"edge", d1}, {"pt", pt}},
                                              {{"i", inclusion(h21, d2)}, {"p", edge_to_point}},
                                              "inner-horn-edge"));
  write("ends-edge.maps", maps_document({{"ends", b1}, {"edge", d1}, {"pt", pt}},
                                        {{"i", inclusion(b1, d1)}, {"p", edge_to_point}}, "ends-edge"));
  write("ends-to-point.maps", maps_document({{"ends", b1}, {"pt", pt}}, {{"f", to_point(b1, pt)}}, "ends-to-point"));
  const auto both = share(coproduct({d1, pt}));
  write("retract.maps",
        maps_document({{"ends", b1}, {"edge", d1}, {"edge+pt", both}},
                      {{"f", inclusion(b1, d1)},
                       {"g", ComplexMap{b1, both, compose(coproduct_inclusion(d1, both, 0), inclusion(b1, d1)).images}}},
                      "retract"));

  write("square.cub", complex_document(share(cube(2)), "square"));
  write("square-horn.cub", complex_document(share(cube_horn(2, 1, 0)), "square-horn"));

  write("delta2.cat", category_document(share(simplex_category(2)), "delta2"));
  write("z2.cat", category_document(share(cyclic_group_category(2)), "z2"));
  write("span.cat", category_document(share(span_category()), "span"));

  const auto delta2 = share(simplex_category(2));
  write("circle.psh", presheaf_document(presheaf_of(*b2, delta2), "delta2", "circle"));
  const auto mono1 = share(simplex_category(1, true)), delta1 = share(simplex_category(1));
  Document u;
  u.kind = DocumentKind::functor;
  u.name = "faces-only";
  u.categories = {{"mono1", mono1}, {"delta1", delta1}};
  u.functor = inclusion_functor(mono1, delta1);
  write("faces-only.functor", u);
  write("circle1.psh", presheaf_document(presheaf_of(*b2, delta1), "delta1", "circle1"));
  return 0;
}
