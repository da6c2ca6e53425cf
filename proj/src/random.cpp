#include "shapekit/random.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <random>
#include <string>

namespace shapekit {

namespace {

struct Decl {
  std::string id;
  int dim;
  std::vector<std::pair<std::string, std::uint32_t>> faces;
};

Complex assemble(const std::vector<Decl>& decls) {
  ComplexBuilder b(Shape::simplicial);
  std::map<std::string, Index> local;
  for (const auto& d : decls) local[d.id] = b.add_cell(d.id, d.dim);
  for (const auto& d : decls) {
    std::vector<Ref> faces;
    for (const auto& [id, m] : d.faces) faces.push_back({local.at(id), m});
    if (!faces.empty()) b.set_faces(local.at(d.id), std::move(faces));
  }
  return b.build();
}

}  // namespace

Complex random_complex(std::uint64_t seed, int max_dim, std::size_t max_cells) {
  std::mt19937_64 rng(seed);
  std::vector<Decl> decls;
  const int nv = std::uniform_int_distribution<int>(1, 4)(rng);
  for (int v = 0; v < nv; ++v) decls.push_back({"v" + std::to_string(v), 0, {}});
  const std::size_t target = std::uniform_int_distribution<std::size_t>(std::min<std::size_t>(8, max_cells), max_cells)(rng);
  int counter = 0;
  int failures = 0;
  while (decls.size() < target && failures < 200) {
    const int n = std::uniform_int_distribution<int>(1, max_dim)(rng);
    const Complex x = assemble(decls);
    // Boundary of Delta^n with vertex ids "0".."n".
    ComplexBuilder bb(Shape::simplicial);
    std::vector<Index> loc(1u << (n + 1));
    std::vector<std::uint32_t> sets;
    for (std::uint32_t s = 1; s + 1 < (1u << (n + 1)); ++s) sets.push_back(s);
    std::stable_sort(sets.begin(), sets.end(), [](auto a, auto b) { return std::popcount(a) < std::popcount(b); });
    for (auto s : sets) {
      std::vector<Ref> faces;
      if (std::popcount(s) > 1)
        for (int v = 0; v <= n; ++v)
          if (s >> v & 1u) faces.push_back({loc[s & ~(1u << v)], 0});
      std::string id;
      for (int v = 0; v <= n; ++v)
        if (s >> v & 1u) id += static_cast<char>('0' + v);
      loc[s] = bb.add_cell(id, std::popcount(s) - 1, std::move(faces));
    }
    const Complex boundary = bb.build();
    MapSearch p{&boundary, &x, std::vector<std::optional<Ref>>(boundary.size()), {}, 1u << 16};
    std::uniform_int_distribution<Index> pick(0, static_cast<Index>(x.count(0) - 1));
    for (int v = 0; v <= n; ++v) p.fixed[*boundary.find(std::string(1, static_cast<char>('0' + v)))] = Ref{pick(rng), 0};
    std::vector<std::vector<Ref>> found;
    try {
      search_maps(p, [&](const std::vector<Ref>& g) {
        found.push_back(g);
        return found.size() < 16;
      });
    } catch (const std::exception&) {
      found.clear();
    }
    if (found.empty()) {
      ++failures;
      continue;
    }
    const auto& g = found[std::uniform_int_distribution<std::size_t>(0, found.size() - 1)(rng)];
    // Faces of the new cell: images of the codimension-one faces, in order.
    Decl d{"c" + std::to_string(n) + "_" + std::to_string(counter++), n, {}};
    for (int i = 0; i <= n; ++i) {
      std::string id;
      for (int v = 0; v <= n; ++v)
        if (v != i) id += static_cast<char>('0' + v);
      const Ref r = g[*boundary.find(id)];
      d.faces.emplace_back(x.cell(r.cell).id, r.mask);
    }
    decls.push_back(std::move(d));
  }
  return assemble(decls);
}

}  // namespace shapekit
