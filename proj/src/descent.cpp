#include "shapekit/descent.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "shapekit/error.hpp"
#include "shapekit/nerve.hpp"

namespace shapekit {

Cover make_cover(ComplexPtr ambient, const std::vector<std::pair<std::string, std::vector<std::string>>>& subs) {
  if (ambient->shape() != Shape::simplicial) throw SemanticError("cover: only simplicial ambients are supported");
  Cover c;
  c.ambient = ambient;
  for (const auto& [name, ids] : subs) {
    std::vector<Index> gens;
    for (const auto& id : ids) {
      const auto cell = ambient->find(id);
      if (!cell) throw SemanticError("cover: unknown cell " + id + " in " + name);
      gens.push_back(*cell);
    }
    c.names.push_back(name);
    c.generators.push_back(ids);
    c.members.push_back(face_closure(*ambient, gens));
  }
  return c;
}

std::optional<std::string> uncovered_cell(const Cover& cover) {
  const Complex& x = *cover.ambient;
  for (Index c = 0; c < x.size(); ++c) {
    bool in = false;
    for (const auto& m : cover.members) in = in || m[c];
    if (!in) return x.cell(c).id;
  }
  return std::nullopt;
}

Complex cover_member(const Cover& cover, std::size_t k) {
  const Complex& x = *cover.ambient;
  std::vector<Index> cells;
  for (Index c = 0; c < x.size(); ++c)
    if (cover.members[k][c]) cells.push_back(c);
  return subcomplex(x, cells);
}

namespace {

Op vertex_op(int n, std::initializer_list<int> vs) {
  Op o;
  o.src = static_cast<int>(vs.size()) - 1;
  o.tgt = n;
  int j = 0;
  for (int v : vs) o.v[j++] = static_cast<std::int8_t>(v);
  return o;
}

// The diagonal of a bisimplicial set whose n-cells are pairs (b, x): b an
// n-reference of `base`, x an n-reference of fiber(b). A pair is degenerate
// along s_j exactly when both parts are. Faces act on both parts, face 0 of
// the fiber part followed by push0(b, .).
struct Twisted {
  const Complex* base = nullptr;
  std::function<const Complex*(Ref)> fiber;
  std::function<bool(Ref, Ref)> accept;
  std::function<Ref(Ref, Ref)> push0;
  std::function<std::string(Ref)> label;
};

Complex twisted_diagonal(const Twisted& t, int d, bool continues, std::size_t budget) {
  const Complex& b = *t.base;
  ComplexBuilder out(Shape::simplicial);
  std::map<std::pair<Ref, Ref>, Index> index;
  std::vector<std::pair<Ref, Ref>> pairs;
  int top = d;
  if (b.truncation()) top = std::min(top, *b.truncation());
  for (int n = 0; n <= top; ++n) {
    for (const Ref& c : b.refs_of_dim(n)) {
      const Complex* f = t.fiber(c);
      if (f->truncation() && n > *f->truncation()) throw SemanticError("diagonal: fiber truncated below dimension");
      for (const Ref& x : f->refs_of_dim(n)) {
        if ((c.mask & x.mask) != 0 || !t.accept(c, x)) continue;
        const Index k = out.add_cell(t.label(c) + "|" + f->ref_string(x), n);
        index[{c, x}] = k;
        pairs.push_back({c, x});
        if (pairs.size() > budget) throw BudgetExceeded("diagonal cells", budget);
      }
    }
  }
  for (Index k = 0; k < pairs.size(); ++k) {
    const auto [c, x] = pairs[k];
    const int n = out.dim_of(k);
    if (n == 0) continue;
    const Complex* f = t.fiber(c);
    std::vector<Ref> faces;
    for (int j = 0; j <= n; ++j) {
      const Ref fc = b.face(c, j);
      Ref fx = f->face(x, j);
      if (j == 0) fx = t.push0(c, fx);
      const std::uint32_t m = fc.mask & fx.mask;
      const Ref bc{fc.cell, mask::extract(fc.mask, m)};
      const Ref bx{fx.cell, mask::extract(fx.mask, m)};
      const auto it = index.find({bc, bx});
      if (it == index.end()) throw std::logic_error("diagonal: face outside the construction");
      faces.push_back({it->second, m});
    }
    out.set_faces(k, std::move(faces));
  }
  std::optional<int> trunc;
  if (continues) trunc = d;
  return out.build(trunc);
}

}  // namespace

Complex cech_diagonal(const Cover& cover, int d, std::size_t budget) {
  if (d < 0) throw SemanticError("cech: negative dimension");
  if (cover.names.empty()) throw SemanticError("cech: empty cover");
  if (const auto miss = uncovered_cell(cover)) throw SemanticError("uncovered cell: " + *miss);
  const Complex& x = *cover.ambient;
  // Tuples of cover indices are the simplices of the nerve of the codiscrete
  // groupoid on the names.
  std::vector<std::string> keys;
  for (std::size_t k = 0; k < cover.names.size(); ++k) keys.push_back(std::to_string(k));
  const FiniteCategory g = codiscrete_groupoid(keys);
  const Complex tuples = nerve(g, d, budget);
  auto vertices = [&](Ref c) {
    const int n = tuples.ref_dim(c);
    std::vector<std::size_t> v;
    for (int j = 0; j <= n; ++j) {
      const Ref r = tuples.apply(c, vertex_op(n, {j}));
      v.push_back(std::stoul(g.object(*g.find_object(tuples.cell(r.cell).id))));
    }
    return v;
  };
  Twisted t;
  t.base = &tuples;
  t.fiber = [&](Ref) { return &x; };
  t.accept = [&](Ref c, Ref s) {
    for (std::size_t k : vertices(c))
      if (!cover.members[k][s.cell]) return false;
    return true;
  };
  t.push0 = [](Ref, Ref s) { return s; };
  t.label = [&](Ref c) {
    std::string s = "(";
    for (std::size_t k : vertices(c)) s += (s.size() > 1 ? "," : "") + cover.names[k];
    return s + ")";
  };
  // Tuples of distinct indices over a shared vertex go on forever.
  bool continues = false;
  for (Index v = 0; v < x.count(0); ++v) {
    int hits = 0;
    for (const auto& m : cover.members) hits += m[v] ? 1 : 0;
    continues = continues || hits > 1;
  }
  if (x.dim() > d) continues = true;
  return twisted_diagonal(t, d, continues, budget);
}

ValidationReport validate_diagram(const Diagram& d) {
  ValidationReport r;
  if (!d.shape) {
    r.malformed("shape", "missing");
    return r;
  }
  const FiniteCategory& a = *d.shape;
  if (d.objects.size() != a.object_count()) r.malformed("one complex per object", std::to_string(d.objects.size()));
  if (d.maps.size() != a.morphism_count()) r.malformed("one map per morphism", std::to_string(d.maps.size()));
  if (!r.ok()) return r;
  for (Index f = 0; f < a.morphism_count(); ++f) {
    const auto& m = a.morphism(f);
    const ComplexMap& map = d.maps[f];
    if (map.source != d.objects[m.source] || map.target != d.objects[m.target]) {
      r.malformed("map endpoints", m.id);
      continue;
    }
    const auto mr = validate_map(map);
    if (!mr.ok()) r.malformed("map " + m.id, mr.summary());
  }
  if (!r.ok()) return r;
  for (Index o = 0; o < a.object_count(); ++o)
    if (d.maps[a.identity(o)].images != identity_map(d.objects[o]).images)
      r.law("identities", a.object(o));
  for (const auto& [key, h] : a.table()) {
    const auto g = static_cast<Index>(key >> 32);
    const auto f = static_cast<Index>(key & 0xffffffffu);
    if (compose(d.maps[g], d.maps[f]).images != d.maps[h].images)
      r.law("composition", a.morphism(g).id + " o " + a.morphism(f).id + " = " + a.morphism(h).id);
  }
  return r;
}

ComplexDiagram to_complex_diagram(const Diagram& d) {
  ComplexDiagram out;
  out.names = d.shape->objects();
  out.objects = d.objects;
  for (Index f = 0; f < d.shape->morphism_count(); ++f) {
    if (d.shape->is_identity(f)) continue;
    const auto& m = d.shape->morphism(f);
    out.arrows.push_back({m.source, m.target, d.maps[f]});
  }
  return out;
}

Colimit colimit(const Diagram& d, std::size_t budget) {
  const auto r = validate_diagram(d);
  require_valid(r, "diagram");
  return colimit(to_complex_diagram(d), budget);
}

Complex bar_diagonal(const Diagram& d, int dmax, std::size_t budget) {
  if (dmax < 0) throw SemanticError("bar: negative dimension");
  const auto r = validate_diagram(d);
  require_valid(r, "diagram");
  for (const auto& x : d.objects)
    if (x->shape() != Shape::simplicial) throw SemanticError("bar: only simplicial diagrams are supported");
  const FiniteCategory& a = *d.shape;
  const Complex chains = nerve(a, dmax, budget);
  auto source_object = [&](Ref c) {
    const Ref v = chains.apply(c, vertex_op(chains.ref_dim(c), {0}));
    return *a.find_object(chains.cell(v.cell).id);
  };
  Twisted t;
  t.base = &chains;
  t.fiber = [&](Ref c) { return d.objects[source_object(c)].get(); };
  t.accept = [](Ref, Ref) { return true; };
  t.push0 = [&](Ref c, Ref s) {
    const Ref e = chains.apply(c, vertex_op(chains.ref_dim(c), {0, 1}));
    if (e.mask != 0) return s;
    return d.maps[*a.find_morphism(chains.cell(e.cell).id)](s);
  };
  t.label = [&](Ref c) { return chains.ref_string(c); };
  int fiber_dim = -1;
  for (const auto& x : d.objects) {
    fiber_dim = std::max(fiber_dim, x->truncation() ? kMaxDim : x->dim());
  }
  const bool continues = chains.truncation().has_value() || chains.dim() + fiber_dim > dmax;
  return twisted_diagonal(t, dmax, continues, budget);
}

namespace {

struct UnionFind {
  std::vector<Index> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), Index{0}); }
  Index find(Index v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

// Spanning tree flags on the cells of `sub` containing the given forest
// (edge ids) and then any further edges that join components.
std::vector<char> tree_through(const Complex& sub, const std::vector<std::string>& forest) {
  std::vector<char> tree(sub.size(), 0);
  UnionFind uf(sub.count(0));
  for (const auto& id : forest) {
    const Index e = *sub.find(id);
    const auto [s, t] = edge_endpoints(sub, e);
    if (uf.unite(s, t)) tree[e] = 1;
  }
  for (Index e : sub.cells_of_dim(1)) {
    const auto [s, t] = edge_endpoints(sub, e);
    if (uf.unite(s, t)) tree[e] = 1;
  }
  return tree;
}

bool connected(const Complex& x) {
  if (x.count(0) == 0) return false;
  const auto comp = vertex_components(x);
  return std::all_of(comp.begin(), comp.end(), [](Index c) { return c == 0; });
}

}  // namespace

VanKampenReport van_kampen_check(const Cover& cover, int d) {
  if (cover.names.size() != 2) throw SemanticError("van kampen: exactly two subcomplexes required");
  if (d < 0) throw SemanticError("van kampen: negative degree");
  if (const auto miss = uncovered_cell(cover)) throw SemanticError("uncovered cell: " + *miss);
  const ComplexPtr x = cover.ambient;
  const auto u = std::make_shared<const Complex>(cover_member(cover, 0));
  const auto v = std::make_shared<const Complex>(cover_member(cover, 1));
  std::vector<Index> both;
  for (Index c = 0; c < x->size(); ++c)
    if (cover.members[0][c] && cover.members[1][c]) both.push_back(c);
  const auto w = std::make_shared<const Complex>(subcomplex(*x, both));

  VanKampenReport r;
  r.degree = d;
  // One degree beyond d for the connecting map.
  const int top = d + 1;
  r.ambient = homology(*x, top);
  r.first = homology(*u, top);
  r.second = homology(*v, top);
  r.intersection = homology(*w, top);

  // Exactness of ... H_n(W) -> H_n(U) + H_n(V) -> H_n(X) -> H_{n-1}(W) ...
  // in ranks: the middle term splits as alpha_n + beta_n, and the connecting
  // map H_{n+1}(X) -> H_n(W) has rank b_{n+1}(X) - beta_{n+1} = b_n(W) - alpha_n.
  const ComplexMap wu = inclusion(w, u), wv = inclusion(w, v), ux = inclusion(u, x), vx = inclusion(v, x);
  for (int n = 0; n <= top; ++n) {
    r.into_sum.push_back(homology_map_rank({w.get()}, {u.get(), v.get()}, {{0, 0, &wu, 1}, {0, 1, &wv, -1}}, n));
    r.out_of_sum.push_back(homology_map_rank({u.get(), v.get()}, {x.get()}, {{0, 0, &ux, 1}, {1, 0, &vx, 1}}, n));
  }
  auto b = [](const HomologyReport& h, int n) { return h.groups[n].betti; };
  r.mayer_vietoris = true;
  for (int n = 0; n <= d && r.mayer_vietoris; ++n) {
    if (b(r.first, n) + b(r.second, n) != r.into_sum[n] + r.out_of_sum[n]) {
      r.mayer_vietoris = false;
      r.mayer_vietoris_failure = "exactness at H" + std::to_string(n) + "(U) + H" + std::to_string(n) + "(V)";
    } else if (b(r.intersection, n) - r.into_sum[n] != b(r.ambient, n + 1) - r.out_of_sum[n + 1]) {
      r.mayer_vietoris = false;
      r.mayer_vietoris_failure = "exactness at H" + std::to_string(n) + "(W)";
    }
  }
  if (r.mayer_vietoris && b(r.ambient, 0) != r.out_of_sum[0]) {
    r.mayer_vietoris = false;
    r.mayer_vietoris_failure = "exactness at H0(X)";
  }
  for (HomologyReport* h : {&r.ambient, &r.first, &r.second, &r.intersection}) {
    h->groups.resize(d + 1);
    h->dmax = d;
  }
  r.into_sum.resize(d + 1);
  r.out_of_sum.resize(d + 1);

  // Fundamental groups: a spanning forest of W extended to trees of U and V.
  if (w->count(0) == 0 || !connected(*u) || !connected(*v)) {
    r.note = "fundamental group comparison needs connected U and V meeting in a vertex";
    return r;
  }
  const auto comp = vertex_components(*w);
  std::vector<std::string> forest;
  std::vector<char> wtree = tree_through(*w, {});
  for (Index e : w->cells_of_dim(1))
    if (wtree[e]) forest.push_back(w->cell(e).id);
  std::map<Index, int> component_number;
  for (Index vtx = 0; vtx < w->count(0); ++vtx)
    if (comp[vtx] == vtx) {
      component_number[vtx] = static_cast<int>(r.component_basepoints.size());
      r.component_basepoints.push_back(w->cell(vtx).id);
    }
  r.basepoint = r.component_basepoints.front();
  const GroupPresentation pu = pi1_with_tree(*u, r.basepoint, tree_through(*u, forest));
  const GroupPresentation pv = pi1_with_tree(*v, r.basepoint, tree_through(*v, forest));

  GroupPresentation& am = r.amalgam;
  am.basepoint = r.basepoint;
  for (const auto& g : pu.generators) am.generators.push_back("U:" + g);
  for (const auto& g : pv.generators) am.generators.push_back("V:" + g);
  const int shift = static_cast<int>(pu.generators.size());
  const int t0 = static_cast<int>(am.generators.size());
  for (std::size_t k = 1; k < r.component_basepoints.size(); ++k) am.generators.push_back("t" + std::to_string(k));
  am.relators = pu.relators;
  for (Word wv_word : pv.relators) {
    for (int& a : wv_word) a += a > 0 ? shift : -shift;
    am.relators.push_back(std::move(wv_word));
  }
  auto number = [](const GroupPresentation& p, const std::string& id) {
    const auto it = std::find(p.generators.begin(), p.generators.end(), id);
    return it == p.generators.end() ? 0 : static_cast<int>(it - p.generators.begin()) + 1;
  };
  // An edge of W off the forest is a loop in both U and V; in the k-th
  // component the two loops differ by conjugation with t_k.
  for (Index e : w->cells_of_dim(1)) {
    if (wtree[e]) continue;
    const std::string& id = w->cell(e).id;
    const int a = number(pu, id), b = number(pv, id);
    if (a == 0 || b == 0) throw std::logic_error("van kampen: intersection edge missing from a presentation");
    const int k = component_number.at(comp[edge_endpoints(*w, e).first]);
    if (k == 0) {
      am.relators.push_back({a, -(b + shift)});
    } else {
      const int t = t0 + k;
      am.relators.push_back({a, t, -(b + shift), -t});
    }
  }
  r.direct = pi1_presentation(*x, r.basepoint);
  r.amalgam_abelianization = abelianization(am);
  r.direct_abelianization = abelianization(r.direct);
  r.pi1_checked = true;
  r.pi1_agrees = r.amalgam_abelianization == r.direct_abelianization;
  if (r.component_basepoints.size() > 1)
    r.note = "intersection has " + std::to_string(r.component_basepoints.size()) +
             " components; one extra generator per component beyond the first";
  return r;
}

}  // namespace shapekit
