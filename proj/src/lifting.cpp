#include "shapekit/lifting.hpp"

#include <exception>
#include <map>

#include "shapekit/error.hpp"
#include "shapekit/simplicial.hpp"

namespace shapekit {

namespace {

bool same(const ComplexMap& a, const ComplexMap& b) { return a.images == b.images; }

bool same_object(const ComplexPtr& a, const ComplexPtr& b) {
  if (a == b) return true;
  if (a->size() != b->size() || a->shape() != b->shape()) return false;
  for (Index c = 0; c < a->size(); ++c)
    if (a->cell(c).id != b->cell(c).id || a->cell(c).faces != b->cell(c).faces) return false;
  return true;
}

}  // namespace

ValidationReport validate_square(const LiftingProblem& s) {
  ValidationReport r;
  if (!same_object(s.i.source, s.f.source)) r.malformed("square", "i and f have different sources");
  if (!same_object(s.i.target, s.g.source)) r.malformed("square", "g does not start at the target of i");
  if (!same_object(s.f.target, s.p.source)) r.malformed("square", "p does not start at the target of f");
  if (!same_object(s.p.target, s.g.target)) r.malformed("square", "p and g have different targets");
  if (!r.ok()) return r;
  for (const ComplexMap* m : {&s.i, &s.p, &s.f, &s.g}) {
    const auto v = validate_map(*m);
    if (!v.ok()) r.malformed("square map", v.summary());
  }
  if (!r.ok()) return r;
  const ComplexMap pf = compose(s.p, s.f), gi = compose(s.g, s.i);
  for (Index c = 0; c < pf.images.size(); ++c)
    if (pf.images[c] != gi.images[c]) {
      r.law("square commutes", s.i.source->cell(c).id);
      break;
    }
  return r;
}

bool is_lift(const LiftingProblem& s, const ComplexMap& h) {
  if (!validate_map(h).ok()) return false;
  return same(compose(h, s.i), s.f) && same(compose(s.p, h), s.g);
}

std::optional<ComplexMap> find_lift(const LiftingProblem& s, std::size_t budget) {
  require_valid(validate_square(s), "lifting problem");
  const Complex& b = *s.i.target;
  const Complex& x = *s.f.target;
  // h(i(a)) = f(a) for every cell a of A, as constraints on the cells of B.
  std::vector<std::vector<std::pair<std::uint32_t, Ref>>> want(b.size());
  MapSearch problem{&b, &x, std::vector<std::optional<Ref>>(b.size()), {}, budget};
  for (Index a = 0; a < s.i.images.size(); ++a) {
    const Ref ia = s.i.images[a];
    want[ia.cell].push_back({ia.mask, s.f.images[a]});
    if (ia.mask == 0) problem.fixed[ia.cell] = s.f.images[a];
  }
  problem.accept = [&](Index c, Ref r) {
    for (const auto& [m, target] : want[c])
      if (Ref{r.cell, mask::compose_epi(m, r.mask)} != target) return false;
    return s.p(r) == s.g.images[c];
  };
  std::optional<ComplexMap> lift;
  search_maps(problem, [&](const std::vector<Ref>& images) {
    lift = ComplexMap{s.i.target, s.f.target, images};
    return false;
  });
  return lift;
}

BoxslashVerdict boxslash(const ComplexMap& i, const ComplexMap& p, std::size_t budget, Exec exec) {
  const auto fs = enumerate_maps(i.source, p.source, budget, exec);
  const auto gs = enumerate_maps(i.target, p.target, budget, exec);
  // Squares pair f and g with p o f = g o i.
  std::map<std::vector<Ref>, std::vector<std::size_t>> by_corner;
  for (std::size_t k = 0; k < gs.size(); ++k) by_corner[compose(gs[k], i).images].push_back(k);
  std::vector<LiftingProblem> squares;
  for (const auto& f : fs) {
    const auto it = by_corner.find(compose(p, f).images);
    if (it == by_corner.end()) continue;
    for (std::size_t k : it->second) squares.push_back({i, p, f, gs[k]});
  }
  std::vector<char> lifts(squares.size(), 0);
  std::vector<std::exception_ptr> errors(squares.size());
  const auto count = static_cast<std::ptrdiff_t>(squares.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      lifts[k] = find_lift(squares[k], budget).has_value();
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  BoxslashVerdict v;
  v.squares = squares.size();
  for (std::size_t k = 0; k < squares.size(); ++k)
    if (!lifts[k]) {
      v.holds = false;
      v.witness = squares[k];
      break;
    }
  return v;
}

namespace {

struct Attach {
  std::size_t generator;
  std::vector<Ref> attaching;  // images of the generator's source cells
  std::string prefix;
};

// Z with a copy of B_k glued along each attaching map; returns the new
// complex and where the old cells and the new cells of each copy went.
struct Glued {
  ComplexPtr complex;
  std::vector<Index> old_cells;
  std::vector<std::vector<Index>> new_cells;  // per attachment, per cell of B_k (unused where in the image)
};

Glued glue(const Complex& z, const std::vector<ComplexMap>& generators, const std::vector<Attach>& attachments) {
  ComplexBuilder b(z.shape());
  for (Index c = 0; c < z.size(); ++c) b.add_cell(z.cell(c).id, z.cell(c).dim, z.cell(c).faces);
  std::vector<std::vector<Index>> local(attachments.size());
  for (std::size_t s = 0; s < attachments.size(); ++s) {
    const ComplexMap& gen = generators[attachments[s].generator];
    const Complex& bk = *gen.target;
    std::vector<long> preimage(bk.size(), -1);
    for (Index a = 0; a < gen.images.size(); ++a) preimage[gen.images[a].cell] = a;
    local[s].assign(bk.size(), 0);
    for (Index c = 0; c < bk.size(); ++c)
      if (preimage[c] < 0) local[s][c] = b.add_cell(attachments[s].prefix + bk.cell(c).id, bk.cell(c).dim);
    for (Index c = 0; c < bk.size(); ++c) {
      if (preimage[c] >= 0) continue;
      std::vector<Ref> faces;
      for (const Ref& r : bk.cell(c).faces) {
        if (preimage[r.cell] >= 0) {
          const Ref t = attachments[s].attaching[preimage[r.cell]];
          faces.push_back({t.cell, mask::compose_epi(r.mask, t.mask)});
        } else {
          faces.push_back({local[s][r.cell], r.mask});
        }
      }
      b.set_faces(local[s][c], std::move(faces));
    }
  }
  std::vector<Index> renumber;
  Glued g;
  g.complex = std::make_shared<const Complex>(b.build(z.truncation(), &renumber));
  g.old_cells.assign(renumber.begin(), renumber.begin() + static_cast<long>(z.size()));
  for (auto& l : local) {
    for (auto& c : l) c = renumber[c];
    g.new_cells.push_back(std::move(l));
  }
  return g;
}

std::vector<UnresolvedSquare> unresolved(const ComplexMap& right, const std::vector<ComplexMap>& generators,
                                         std::size_t budget) {
  std::vector<UnresolvedSquare> out;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    const ComplexMap& i = generators[k];
    const auto tops = enumerate_maps(i.source, right.source, budget);
    const auto bottoms = enumerate_maps(i.target, right.target, budget);
    std::map<std::vector<Ref>, std::vector<std::size_t>> by_corner;
    for (std::size_t j = 0; j < bottoms.size(); ++j) by_corner[compose(bottoms[j], i).images].push_back(j);
    for (const auto& a : tops) {
      const auto it = by_corner.find(compose(right, a).images);
      if (it == by_corner.end()) continue;
      for (std::size_t j : it->second)
        if (!find_lift({i, right, a, bottoms[j]}, budget)) out.push_back({k, a, bottoms[j]});
    }
  }
  return out;
}

}  // namespace

FactorizationResult factor_bounded(const ComplexMap& f, const std::vector<ComplexMap>& generators, int rounds,
                                   std::size_t budget) {
  for (const auto& i : generators)
    if (!is_injective(i)) throw SemanticError("factor: generators must be levelwise injections");
  require_valid(validate_map(f), "factor");
  FactorizationResult res;
  res.middle = f.source;
  res.left = identity_map(f.source);
  res.right = f;
  std::vector<UnresolvedSquare> open = unresolved(res.right, generators, budget);
  for (int round = 1; round <= rounds && !open.empty(); ++round) {
    std::vector<Attach> attach;
    for (std::size_t s = 0; s < open.size(); ++s) {
      attach.push_back({open[s].generator, open[s].top.images,
                        "r" + std::to_string(round) + "." + std::to_string(s) + ":"});
      Attachment h;
      h.round = round;
      h.generator = open[s].generator;
      h.prefix = attach.back().prefix;
      for (const Ref& r : open[s].top.images) h.attaching.push_back(res.middle->ref_string(r));
      res.history.push_back(std::move(h));
    }
    const Glued g = glue(*res.middle, generators, attach);
    ComplexMap right{g.complex, f.target, std::vector<Ref>(g.complex->size())};
    for (Index c = 0; c < res.middle->size(); ++c) right.images[g.old_cells[c]] = res.right.images[c];
    for (std::size_t s = 0; s < open.size(); ++s) {
      const ComplexMap& gen = generators[open[s].generator];
      std::vector<char> old(gen.target->size(), 0);
      for (const Ref& r : gen.images) old[r.cell] = 1;
      for (Index c = 0; c < gen.target->size(); ++c)
        if (!old[c]) right.images[g.new_cells[s][c]] = open[s].bottom.images[c];
    }
    ComplexMap left{f.source, g.complex, res.left.images};
    for (Ref& r : left.images) r.cell = g.old_cells[r.cell];
    res.middle = g.complex;
    res.left = std::move(left);
    res.right = std::move(right);
    res.rounds = round;
    open = unresolved(res.right, generators, budget);
  }
  res.residual = std::move(open);
  return res;
}

Complex replay(ComplexPtr x, const std::vector<ComplexMap>& generators, const std::vector<Attachment>& history) {
  ComplexPtr z = x;
  std::size_t k = 0;
  while (k < history.size()) {
    const int round = history[k].round;
    std::vector<Attach> attach;
    for (; k < history.size() && history[k].round == round; ++k) {
      const Attachment& h = history[k];
      if (h.generator >= generators.size()) throw SemanticError("replay: unknown generator");
      Attach a{h.generator, {}, h.prefix};
      for (const auto& s : h.attaching) {
        const auto r = z->parse_ref(s);
        if (!r) throw SemanticError("replay: unknown cell " + s);
        a.attaching.push_back(*r);
      }
      attach.push_back(std::move(a));
    }
    z = glue(*z, generators, attach).complex;
  }
  return *z;
}

bool is_retract(const ComplexMap& f, const ComplexMap& g, const RetractDiagram& d) {
  return same(compose(d.r, d.s), identity_map(f.source)) && same(compose(d.q, d.t), identity_map(f.target)) &&
         same(compose(g, d.s), compose(d.t, f)) && same(compose(f, d.r), compose(d.q, g));
}

std::optional<RetractDiagram> retract_search(const ComplexMap& f, const ComplexMap& g, std::size_t budget) {
  const auto id_a = identity_map(f.source).images;
  const auto id_b = identity_map(f.target).images;
  const auto ts = enumerate_maps(f.target, g.target, budget);
  const auto qs = enumerate_maps(g.target, f.target, budget);
  const auto ss = enumerate_maps(f.source, g.source, budget);
  const auto rs = enumerate_maps(g.source, f.source, budget);
  for (const auto& t : ts) {
    const auto tf = compose(t, f).images;
    for (const auto& q : qs) {
      if (compose(q, t).images != id_b) continue;
      const auto qg = compose(q, g).images;
      for (const auto& s : ss) {
        if (compose(g, s).images != tf) continue;
        for (const auto& r : rs)
          if (compose(r, s).images == id_a && compose(f, r).images == qg) return RetractDiagram{s, r, t, q};
      }
    }
  }
  return std::nullopt;
}

}  // namespace shapekit
