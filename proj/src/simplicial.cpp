#include "shapekit/simplicial.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "shapekit/error.hpp"

namespace shapekit {

namespace {

char vertex_char(int v) { return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('A' + v - 10); }

int top_bit(std::uint32_t s) { return 31 - std::countl_zero(s); }

Op inclusion_op(std::uint32_t subset, int n) {
  Op op;
  op.tgt = n;
  int t = 0;
  for (int v = 0; v <= n; ++v)
    if (subset >> v & 1u) op.v[t++] = static_cast<std::int8_t>(v);
  op.src = t - 1;
  return op;
}

/// Image of a vertex set under a monotone map.
std::uint32_t image_set(std::uint32_t s, const Op& theta) {
  std::uint32_t out = 0;
  for (int v = 0; v <= theta.src; ++v)
    if (s >> v & 1u) out |= 1u << theta.v[v];
  return out;
}

/// A weakly increasing chain of sets as (distinct chain, degeneracy mask).
std::pair<std::vector<std::uint32_t>, std::uint32_t> squeeze(const std::vector<std::uint32_t>& chain) {
  std::vector<std::uint32_t> distinct{chain.front()};
  std::uint32_t m = 0;
  for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
    if (chain[j] == chain[j + 1]) {
      m |= 1u << j;
    } else {
      distinct.push_back(chain[j + 1]);
    }
  }
  return {distinct, m};
}

std::string chain_id(const std::vector<std::uint32_t>& chain) {
  std::string s;
  for (std::size_t j = 0; j < chain.size(); ++j) s += (j ? "<" : "") + vertex_set_id(chain[j]);
  return s;
}

/// Strict chains of nonempty subsets of `top` ending at `top` (all of them
/// when `must_end` is false), each listed bottom-up.
void strict_chains(std::uint32_t top, bool must_end, std::vector<std::vector<std::uint32_t>>& out) {
  std::vector<std::uint32_t> stack;
  // Grow downward from a chosen top element.
  std::function<void(std::uint32_t)> down = [&](std::uint32_t cur) {
    stack.push_back(cur);
    out.emplace_back(stack.rbegin(), stack.rend());
    for (std::uint32_t sub = (cur - 1) & cur; sub != 0; sub = (sub - 1) & cur) down(sub);
    stack.pop_back();
  };
  if (must_end) {
    down(top);
  } else {
    for (std::uint32_t s = 1; s <= top; ++s)
      if ((s & top) == s) down(s);
  }
}

struct SdSimplex {
  Complex complex;
  std::vector<std::vector<std::uint32_t>> chain;  // per cell
};

SdSimplex make_sd_simplex(int n) {
  const std::uint32_t full = (1u << (n + 1)) - 1u;
  std::vector<std::vector<std::uint32_t>> chains;
  strict_chains(full, false, chains);
  ComplexBuilder b(Shape::simplicial);
  std::unordered_map<std::string, Index> local;
  for (const auto& c : chains) local.emplace(chain_id(c), b.add_cell(chain_id(c), static_cast<int>(c.size()) - 1));
  for (const auto& c : chains) {
    if (c.size() < 2) continue;
    std::vector<Ref> faces;
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto d = c;
      d.erase(d.begin() + static_cast<std::ptrdiff_t>(i));
      faces.push_back({local.at(chain_id(d)), 0});
    }
    b.set_faces(local.at(chain_id(c)), std::move(faces));
  }
  std::vector<Index> renumber;
  SdSimplex s{b.build(std::nullopt, &renumber), {}};
  s.chain.resize(chains.size());
  for (Index k = 0; k < chains.size(); ++k) s.chain[renumber[local.at(chain_id(chains[k]))]] = chains[k];
  return s;
}

/// sd(theta): sd Delta^k -> sd Delta^n as images of the cells of `from`.
std::vector<Ref> sd_image(const SdSimplex& from, const SdSimplex& to, const Op& theta) {
  std::vector<Ref> out(from.chain.size());
  for (Index c = 0; c < from.chain.size(); ++c) {
    std::vector<std::uint32_t> img;
    for (auto t : from.chain[c]) img.push_back(image_set(t, theta));
    auto [distinct, m] = squeeze(img);
    out[c] = {*to.complex.find(chain_id(distinct)), m};
  }
  return out;
}

Ref apply_images(const std::vector<Ref>& g, Ref r) {
  const Ref y = g[r.cell];
  return {y.cell, mask::compose_epi(r.mask, y.mask)};
}

}  // namespace

std::string vertex_set_id(std::uint32_t vertices) {
  std::string s;
  for (int v = 0; v < 32; ++v)
    if (vertices >> v & 1u) s += vertex_char(v);
  return s;
}

Complex generators(int n, SimplexKind kind, int k) {
  if (n < 0 || n > 12) throw SemanticError("generators: dimension out of range");
  if (kind == SimplexKind::horn && (n < 1 || k < 0 || k > n))
    throw SemanticError("generators: invalid horn (" + std::to_string(n) + "," + std::to_string(k) + ")");
  const std::uint32_t full = (1u << (n + 1)) - 1u;
  auto keep = [&](std::uint32_t s) {
    if (kind == SimplexKind::simplex) return true;
    if (s == full) return false;
    return kind == SimplexKind::boundary || s != (full & ~(1u << k));
  };
  ComplexBuilder b(Shape::simplicial);
  std::vector<Index> local(full + 1, 0);
  // Subsets by increasing size so faces exist before they are referenced.
  std::vector<std::uint32_t> sets;
  for (std::uint32_t s = 1; s <= full; ++s)
    if (keep(s)) sets.push_back(s);
  std::stable_sort(sets.begin(), sets.end(), [](auto a, auto b) { return std::popcount(a) < std::popcount(b); });
  for (auto s : sets) {
    std::vector<Ref> faces;
    if (std::popcount(s) > 1)
      for (int v = 0; v <= n; ++v)
        if (s >> v & 1u) faces.push_back({local[s & ~(1u << v)], 0});
    local[s] = b.add_cell(vertex_set_id(s), std::popcount(s) - 1, std::move(faces));
  }
  return b.build();
}

Complex from_facets(const std::vector<std::vector<std::string>>& facets) {
  std::set<std::vector<std::string>> faces;
  for (auto f : facets) {
    std::sort(f.begin(), f.end());
    if (f.empty() || std::adjacent_find(f.begin(), f.end()) != f.end())
      throw SemanticError("from_facets: facets need distinct vertices");
    if (f.size() > 13) throw SemanticError("from_facets: facet too large");
    for (std::uint32_t s = 1; s < (1u << f.size()); ++s) {
      std::vector<std::string> face;
      for (std::size_t v = 0; v < f.size(); ++v)
        if (s >> v & 1u) face.push_back(f[v]);
      faces.insert(face);
    }
  }
  auto name = [](const std::vector<std::string>& face) {
    std::string id;
    for (const auto& v : face) id += (id.empty() ? "" : "-") + v;
    return id;
  };
  std::vector<std::vector<std::string>> order(faces.begin(), faces.end());
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  ComplexBuilder b(Shape::simplicial);
  std::map<std::vector<std::string>, Index> local;
  for (const auto& face : order) {
    std::vector<Ref> fs;
    if (face.size() > 1)
      for (std::size_t v = 0; v < face.size(); ++v) {
        auto sub = face;
        sub.erase(sub.begin() + static_cast<long>(v));
        fs.push_back({local.at(sub), 0});
      }
    local[face] = b.add_cell(name(face), static_cast<int>(face.size()) - 1, std::move(fs));
  }
  return b.build();
}

Product product(ComplexPtr xp, ComplexPtr yp, int dmax, std::size_t budget) {
  const Complex& x = *xp;
  const Complex& y = *yp;
  if (x.shape() != y.shape()) throw SemanticError("product: shape mismatch");
  ComplexBuilder b(x.shape());
  struct PairHash {
    std::size_t operator()(const std::pair<Ref, Ref>& p) const noexcept {
      return RefHash{}(p.first) * 1000003u ^ RefHash{}(p.second);
    }
  };
  std::unordered_map<std::pair<Ref, Ref>, Index, PairHash> local;
  std::vector<std::pair<Ref, Ref>> parts;
  const int top = std::min(dmax, x.dim() + y.dim());
  for (int n = 0; n <= top; ++n) {
    for (Index cx = 0; cx < x.first(n + 1); ++cx) {
      const int p = x.cell(cx).dim;
      for (Index cy = y.first(std::max(0, n - p)); cy < y.first(n + 1); ++cy) {
        const int q = y.cell(cy).dim;
        for (std::uint32_t sx = 0; sx < (1u << n); ++sx) {
          if (std::popcount(sx) != n - p) continue;
          for (std::uint32_t sy = 0; sy < (1u << n); ++sy) {
            if (std::popcount(sy) != n - q || (sx & sy)) continue;
            const Ref a{cx, sx};
            const Ref c{cy, sy};
            std::vector<Ref> faces;
            for (int i = 0; i < x.face_count(n); ++i) {
              const Ref fa = x.face(a, i);
              const Ref fc = y.face(c, i);
              const std::uint32_t common = fa.mask & fc.mask;
              const Ref ka{fa.cell, mask::extract(fa.mask, common)};
              const Ref kc{fc.cell, mask::extract(fc.mask, common)};
              faces.push_back({local.at({ka, kc}), common});
            }
            local.emplace(std::make_pair(a, c),
                          b.add_cell("(" + x.ref_string(a) + "," + y.ref_string(c) + ")", n, std::move(faces)));
            parts.emplace_back(a, c);
            if (parts.size() > budget) throw BudgetExceeded("product cells", budget);
          }
        }
      }
    }
  }
  const bool truncated = top < x.dim() + y.dim() || x.truncation() || y.truncation();
  std::optional<int> trunc;
  if (truncated) {
    trunc = top;
    if (x.truncation()) trunc = std::min(*trunc, *x.truncation());
    if (y.truncation()) trunc = std::min(*trunc, *y.truncation());
  }
  std::vector<Index> renumber;
  auto z = std::make_shared<const Complex>(b.build(trunc, &renumber));
  Product out{z, {z, xp, std::vector<Ref>(parts.size())}, {z, yp, std::vector<Ref>(parts.size())}};
  for (Index k = 0; k < parts.size(); ++k) {
    out.first.images[renumber[k]] = parts[k].first;
    out.second.images[renumber[k]] = parts[k].second;
  }
  return out;
}

Complex coproduct(const std::vector<ComplexPtr>& parts) {
  if (parts.empty()) return Complex(Shape::simplicial);
  ComplexBuilder b(parts.front()->shape());
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Complex& x = *parts[k];
    if (x.shape() != parts.front()->shape()) throw SemanticError("coproduct: shape mismatch");
    const auto offset = static_cast<Index>(b.size());
    for (Index c = 0; c < x.size(); ++c) {
      std::vector<Ref> faces = x.cell(c).faces;
      for (auto& r : faces) r.cell += offset;
      b.add_cell(std::to_string(k) + ":" + x.cell(c).id, x.cell(c).dim, std::move(faces));
    }
  }
  return b.build();
}

ComplexMap coproduct_inclusion(ComplexPtr part, ComplexPtr sum, std::size_t k) {
  ComplexMap f{part, sum, std::vector<Ref>(part->size())};
  for (Index c = 0; c < part->size(); ++c) f.images[c] = {*sum->find(std::to_string(k) + ":" + part->cell(c).id), 0};
  return f;
}

Subdivision subdivide(ComplexPtr xp) {
  const Complex& x = *xp;
  if (x.shape() != Shape::simplicial) throw SemanticError("subdivide: simplicial input required");
  if (x.truncation()) throw SemanticError("subdivide: input is truncated");
  ComplexBuilder b(Shape::simplicial);
  struct Key {
    Index cell;
    std::vector<std::uint32_t> chain;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = k.cell;
      for (auto s : k.chain) h = h * 131 + s;
      return h;
    }
  };
  std::unordered_map<Key, Index, KeyHash> local;
  std::vector<Key> keys;
  for (Index c = 0; c < x.size(); ++c) {
    const int n = x.cell(c).dim;
    std::vector<std::vector<std::uint32_t>> chains;
    strict_chains((1u << (n + 1)) - 1u, true, chains);
    for (auto& ch : chains) {
      const Index id = b.add_cell(x.cell(c).id + "[" + chain_id(ch) + "]", static_cast<int>(ch.size()) - 1);
      keys.push_back({c, ch});
      local.emplace(keys.back(), id);
    }
  }
  for (Index k = 0; k < keys.size(); ++k) {
    const auto& [c, ch] = keys[k];
    const int m = static_cast<int>(ch.size()) - 1;
    if (m == 0) continue;
    std::vector<Ref> faces;
    for (int i = 0; i < m; ++i) {
      auto d = ch;
      d.erase(d.begin() + i);
      faces.push_back({local.at({c, d}), 0});
    }
    // The last face leaves the interior of x: push the flag through x's face.
    const std::uint32_t t = ch[m - 1];
    const Ref yf = x.apply({c, 0}, inclusion_op(t, x.cell(c).dim));
    std::vector<std::uint32_t> img;
    for (int j = 0; j < m; ++j) {
      std::uint32_t u = 0;
      int pos = 0;
      for (int v = 0; v < 32; ++v) {
        if (!(t >> v & 1u)) continue;
        if (ch[j] >> v & 1u) u |= 1u << (pos - std::popcount(yf.mask & ((1u << pos) - 1u)));
        ++pos;
      }
      img.push_back(u);
    }
    auto [distinct, m2] = squeeze(img);
    faces.push_back({local.at({yf.cell, distinct}), m2});
    b.set_faces(k, std::move(faces));
  }
  std::vector<Index> renumber;
  auto z = std::make_shared<const Complex>(b.build(std::nullopt, &renumber));
  Subdivision out{z, {z, xp, std::vector<Ref>(keys.size())}, std::vector<Index>(keys.size())};
  for (Index k = 0; k < keys.size(); ++k) {
    const auto& [c, ch] = keys[k];
    Op theta;
    theta.src = static_cast<int>(ch.size()) - 1;
    theta.tgt = x.cell(c).dim;
    for (std::size_t j = 0; j < ch.size(); ++j) theta.v[j] = static_cast<std::int8_t>(top_bit(ch[j]));
    out.last_vertex.images[renumber[k]] = x.apply({c, 0}, theta);
    out.carrier[renumber[k]] = c;
  }
  return out;
}

Complex subdivided_simplex(int n) { return make_sd_simplex(n).complex; }

std::vector<ComplexMap> enumerate_maps(ComplexPtr x, ComplexPtr y, std::size_t budget, Exec exec) {
  std::vector<std::vector<std::vector<Ref>>> branches;
  std::vector<std::size_t> used;
  auto run = [&](const MapSearch& p, std::vector<std::vector<Ref>>& out) {
    return search_maps(p, [&](const std::vector<Ref>& g) {
      out.push_back(g);
      return true;
    });
  };
  if (x->empty() || x->cell(0).dim != 0) {
    branches.resize(1);
    used.push_back(run({x.get(), y.get(), {}, {}, budget}, branches[0]));
  } else {
    // Split on the image of the first vertex.
    const auto nv = static_cast<std::ptrdiff_t>(y->count(0));
    branches.resize(static_cast<std::size_t>(nv));
    used.assign(static_cast<std::size_t>(nv), 0);
    std::vector<std::string> errors(static_cast<std::size_t>(nv));
    auto branch = [&](std::ptrdiff_t v) {
      MapSearch p{x.get(), y.get(), std::vector<std::optional<Ref>>(x->size()), {}, budget};
      p.fixed[0] = Ref{static_cast<Index>(v), 0};
      try {
        used[v] = run(p, branches[v]);
      } catch (const BudgetExceeded&) {
        used[v] = budget + 1;
      }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
      for (std::ptrdiff_t v = 0; v < nv; ++v) branch(v);
    } else {
      for (std::ptrdiff_t v = 0; v < nv; ++v) branch(v);
    }
  }
  if (std::accumulate(used.begin(), used.end(), std::size_t{0}) > budget)
    throw BudgetExceeded("map enumeration", budget);
  // Branches are already ordered by the first image.
  for (auto& br : branches) std::sort(br.begin(), br.end());
  std::vector<ComplexMap> out;
  for (auto& br : branches)
    for (auto& g : br) out.push_back({x, y, std::move(g)});
  return out;
}

namespace {

/// Shared machinery for Ex: subdivided simplices, sd of coface and
/// codegeneracy maps, and normalization of maps sd Delta^n -> X.
class ExContext {
 public:
  explicit ExContext(int dmax) {
    for (int n = 0; n <= dmax; ++n) sd_.push_back(make_sd_simplex(n));
    delta_.resize(dmax + 1);
    eps_.resize(dmax + 1);
    tables_.resize(dmax + 1);
    for (int n = 1; n <= dmax; ++n) {
      for (int i = 0; i <= n; ++i) {
        auto img = sd_image(sd_[n - 1], sd_[n], ops::face(Shape::simplicial, n, i));
        std::vector<Index> plain;
        for (const Ref& r : img) plain.push_back(r.cell);
        delta_[n].push_back(std::move(plain));
      }
      for (int i = 0; i < n; ++i) {
        const Op e = ops::compose(Shape::simplicial, ops::face(Shape::simplicial, n, i),
                                  ops::degeneracy(Shape::simplicial, n, 1u << i));
        eps_[n].push_back(sd_image(sd_[n], sd_[n], e));
      }
    }
  }

  const SdSimplex& sd(int n) const { return sd_[n]; }

  /// g o sd(d^i).
  std::vector<Ref> face(int n, const std::vector<Ref>& g, int i) const {
    std::vector<Ref> h(delta_[n][i].size());
    for (Index c = 0; c < h.size(); ++c) h[c] = g[delta_[n][i][c]];
    return h;
  }

  std::uint32_t degeneracies(int n, const std::vector<Ref>& g) const {
    std::uint32_t m = 0;
    for (int i = 0; i < n; ++i) {
      bool deg = true;
      for (Index c = 0; c < g.size() && deg; ++c) deg = g[c] == apply_images(g, eps_[n][i][c]);
      if (deg) m |= 1u << i;
    }
    return m;
  }

  /// The nondegenerate core of g and its degeneracy mask.
  std::pair<std::vector<Ref>, std::uint32_t> normalize(int n, const std::vector<Ref>& g) {
    const std::uint32_t m = degeneracies(n, g);
    if (m == 0) return {g, 0};
    const int k = n - std::popcount(m);
    auto it = sections_.find({n, m});
    if (it == sections_.end()) {
      Op mu;
      mu.src = k;
      mu.tgt = n;
      for (int j = 0, t = 0; j <= n; ++j)
        if (j == 0 || !(m >> (j - 1) & 1u)) mu.v[t++] = static_cast<std::int8_t>(j);
      std::vector<Index> plain;
      for (const Ref& r : sd_image(sd_[k], sd_[n], mu)) plain.push_back(r.cell);
      it = sections_.emplace(std::make_pair(n, m), std::move(plain)).first;
    }
    std::vector<Ref> core(it->second.size());
    for (Index c = 0; c < core.size(); ++c) core[c] = g[it->second[c]];
    return {std::move(core), m};
  }

  std::unordered_map<std::vector<Ref>, Index, RefVectorHash>& table(int n) { return tables_[n]; }

  std::optional<Ref> lookup(int n, const std::vector<Ref>& g) {
    auto [core, m] = normalize(n, g);
    const int k = n - std::popcount(m);
    auto it = tables_[k].find(core);
    if (it == tables_[k].end()) return std::nullopt;
    return Ref{it->second, m};
  }

 private:
  std::vector<SdSimplex> sd_;
  std::vector<std::vector<std::vector<Index>>> delta_;
  std::vector<std::vector<std::vector<Ref>>> eps_;
  std::map<std::pair<int, std::uint32_t>, std::vector<Index>> sections_;
  std::vector<std::unordered_map<std::vector<Ref>, Index, RefVectorHash>> tables_;
};

}  // namespace

ExResult ex(ComplexPtr xp, int dmax, std::size_t budget) {
  const Complex& x = *xp;
  if (x.shape() != Shape::simplicial) throw SemanticError("ex: simplicial input required");
  if (dmax < 0) throw SemanticError("ex: negative dimension bound");
  ExContext ctx(dmax);
  ComplexBuilder b(Shape::simplicial);
  std::vector<std::vector<Ref>> maps;
  for (Index v = 0; v < x.first(1); ++v) {
    const Index c = b.add_cell(x.cell(v).id, 0);
    maps.push_back({Ref{v, 0}});
    ctx.table(0).emplace(maps.back(), c);
  }
  for (int n = 1; n <= dmax; ++n) {
    std::size_t counter = 0;
    MapSearch p{&ctx.sd(n).complex, &x, {}, {}, budget};
    search_maps(p, [&](const std::vector<Ref>& g) {
      if (ctx.degeneracies(n, g) != 0) return true;
      std::vector<Ref> faces;
      for (int i = 0; i <= n; ++i) {
        auto r = ctx.lookup(n - 1, ctx.face(n, g, i));
        if (!r) throw SemanticError("ex: face lookup failed");
        faces.push_back(*r);
      }
      const Index c = b.add_cell(std::to_string(n) + ":" + std::to_string(counter++), n, std::move(faces));
      maps.push_back(g);
      ctx.table(n).emplace(g, c);
      if (maps.size() > budget) throw BudgetExceeded("ex cells", budget);
      return true;
    });
  }
  std::vector<Index> renumber;
  ExResult out{std::make_shared<const Complex>(b.build(dmax, &renumber)), std::vector<std::vector<Ref>>(maps.size())};
  for (Index k = 0; k < maps.size(); ++k) out.maps[renumber[k]] = std::move(maps[k]);
  return out;
}

ComplexMap ex_comparison(ComplexPtr xp, const ExResult& e) {
  const Complex& x = *xp;
  const Complex& ex = *e.complex;
  const int dmax = *ex.truncation();
  ExContext ctx(dmax);
  for (Index c = 0; c < ex.size(); ++c) ctx.table(ex.cell(c).dim).emplace(e.maps[c], c);
  const Index limit = x.first(dmax + 1);
  ComplexMap f{xp, e.complex, std::vector<Ref>(x.size())};
  if (limit < x.size()) f.images.resize(limit);
  for (Index c = 0; c < limit; ++c) {
    const int n = x.cell(c).dim;
    const auto& sd = ctx.sd(n);
    std::vector<Ref> g(sd.chain.size());
    for (Index s = 0; s < g.size(); ++s) {
      Op theta;
      theta.src = static_cast<int>(sd.chain[s].size()) - 1;
      theta.tgt = n;
      for (std::size_t j = 0; j < sd.chain[s].size(); ++j) theta.v[j] = static_cast<std::int8_t>(top_bit(sd.chain[s][j]));
      g[s] = x.apply({c, 0}, theta);
    }
    auto r = ctx.lookup(n, g);
    if (!r) throw SemanticError("ex comparison: " + x.cell(c).id + " has no image");
    f.images[c] = *r;
  }
  return f;
}

HornFill fill_horn(ComplexPtr xp, const ComplexMap& h, int n, int k, int max_iterate, std::size_t budget) {
  auto delta = std::make_shared<const Complex>(simplex(n));
  const Complex& lambda = *h.source;
  // h re-indexed over the cells of Delta^n that lie in the horn.
  std::vector<std::optional<Ref>> on_delta(delta->size());
  for (Index c = 0; c < lambda.size(); ++c) {
    auto d = delta->find(lambda.cell(c).id);
    if (!d) throw SemanticError("fill_horn: " + lambda.cell(c).id + " is not a face of the simplex");
    on_delta[*d] = h.images[c];
  }
  if (lambda.size() != horn(n, k).size()) throw SemanticError("fill_horn: source is not the expected horn");

  ComplexPtr cur = delta;
  ComplexMap to_delta = identity_map(delta);
  std::vector<char> in_horn(delta->size());
  for (Index c = 0; c < delta->size(); ++c) in_horn[c] = on_delta[c].has_value();
  for (int m = 0; m <= max_iterate; ++m) {
    if (m > 0) {
      auto sub = subdivide(cur);
      to_delta = compose(to_delta, sub.last_vertex);
      std::vector<char> next(sub.complex->size());
      for (Index c = 0; c < next.size(); ++c) next[c] = in_horn[sub.carrier[c]];
      in_horn = std::move(next);
      cur = sub.complex;
    }
    MapSearch p{cur.get(), xp.get(), std::vector<std::optional<Ref>>(cur->size()), {}, budget};
    for (Index c = 0; c < cur->size(); ++c) {
      if (!in_horn[c]) continue;
      const Ref base = to_delta.images[c];
      const Ref img = *on_delta[base.cell];
      p.fixed[c] = Ref{img.cell, mask::compose_epi(base.mask, img.mask)};
    }
    HornFill out;
    search_maps(p, [&](const std::vector<Ref>& g) {
      out = {true, m, cur, g};
      return false;
    });
    if (out.filled) return out;
  }
  return {};
}

}  // namespace shapekit
