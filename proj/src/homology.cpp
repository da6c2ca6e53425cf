#include "shapekit/homology.hpp"

#include <map>
#include <stdexcept>

#include "shapekit/error.hpp"

namespace shapekit {

namespace {

long face_sign(Shape shape, std::size_t k) {
  if (shape == Shape::simplicial) return k % 2 ? -1 : 1;
  const long i = static_cast<long>(k / 2) + 1;
  return (i % 2 ? -1 : 1) * (k % 2 ? 1 : -1);
}

std::vector<std::pair<std::size_t, long>> boundary_column(const Complex& x, Index cell) {
  const auto& c = x.cell(cell);
  std::map<std::size_t, long> acc;
  if (c.dim == 0) return {};
  const Index base = x.first(c.dim - 1);
  for (std::size_t k = 0; k < c.faces.size(); ++k) {
    const Ref f = c.faces[k];
    if (f.mask != 0) continue;
    acc[f.cell - base] += face_sign(x.shape(), k);
  }
  std::vector<std::pair<std::size_t, long>> out;
  for (const auto& [r, v] : acc)
    if (v != 0) out.emplace_back(r, v);
  return out;
}

}  // namespace

ChainComplex chain_complex(const Complex& x, int dmax, Exec exec) {
  if (dmax < 0) throw SemanticError("chain_complex: negative degree bound");
  ChainComplex cc;
  cc.shape = x.shape();
  cc.cells.resize(dmax + 1);
  cc.boundary.resize(dmax + 1);
  for (int n = 0; n <= dmax; ++n) {
    cc.cells[n] = x.cells_of_dim(n);
    auto& m = cc.boundary[n];
    m.rows = n == 0 ? 0 : x.count(n - 1);
    m.cols = cc.cells[n].size();
    m.columns.resize(m.cols);
    if (n == 0) continue;
    const auto& cells = cc.cells[n];
    const auto count = static_cast<long>(cells.size());
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
    for (long j = 0; j < count; ++j) m.columns[j] = boundary_column(x, cells[j]);
  }
  if (!boundaries_compose_to_zero(cc)) throw std::logic_error("chain_complex: boundary of a boundary is nonzero");
  return cc;
}

bool boundaries_compose_to_zero(const ChainComplex& c) {
  for (int n = 2; n <= c.top(); ++n) {
    const auto& outer = c.boundary[n - 1];
    for (const auto& col : c.boundary[n].columns) {
      std::map<std::size_t, long> acc;
      for (const auto& [mid, v] : col)
        for (const auto& [r, w] : outer.columns[mid]) acc[r] += v * w;
      for (const auto& [r, v] : acc)
        if (v != 0) return false;
    }
  }
  return true;
}

std::vector<long> HomologyReport::betti() const {
  std::vector<long> out;
  for (const auto& g : groups) out.push_back(g.betti);
  return out;
}

HomologyGroup group_from_factors(std::size_t generators, const std::vector<mpz_class>& factors) {
  HomologyGroup g;
  g.betti = static_cast<long>(generators) - static_cast<long>(factors.size());
  for (const auto& f : factors)
    if (f > 1) g.torsion.push_back(f);
  return g;
}

std::string to_string(const HomologyGroup& g) {
  std::string s;
  if (g.betti > 0) s = g.betti == 1 ? "Z" : "Z^" + std::to_string(g.betti);
  for (const auto& t : g.torsion) s += (s.empty() ? "" : " + ") + std::string("Z/") + t.get_str();
  return s.empty() ? "0" : s;
}

namespace {

// Elementary reductions of the augmented chain complex (degree -1 holds one
// cell hit by every vertex). A pair (a, b) with <db, a> = +-1 is removed when
// a is the only face of b or b the only coface of a; neither case changes any
// remaining coefficient, so no fill-in occurs. Returns the boundary matrices
// of what is left, degrees 0..top, for the reduced homology.
struct Reduced {
  std::vector<std::size_t> sizes;      // remaining cells per degree 0..top
  std::vector<SparseMatrix> boundary;  // boundary[n]: C_n -> C_{n-1}, n >= 1
};

Reduced reduce_augmented(const ChainComplex& cc) {
  const int top = cc.top();
  // Levels are shifted by one: level 0 is degree -1.
  const int levels = top + 2;
  std::vector<std::vector<std::vector<std::pair<std::size_t, long>>>> bd(levels);
  std::vector<std::vector<std::vector<std::size_t>>> cob(levels);
  std::vector<std::vector<std::size_t>> cob_count(levels);
  std::vector<std::vector<char>> alive(levels);
  auto size_of = [&](int l) { return l == 0 ? std::size_t{cc.rank(0) ? 1u : 0u} : cc.rank(l - 1); };
  for (int l = 0; l < levels; ++l) {
    bd[l].resize(size_of(l));
    cob[l].resize(size_of(l));
    cob_count[l].assign(size_of(l), 0);
    alive[l].assign(size_of(l), 1);
  }
  for (std::size_t v = 0; v < size_of(1); ++v) bd[1][v] = {{0, 1}};
  for (int l = 2; l < levels; ++l)
    for (std::size_t j = 0; j < size_of(l); ++j) bd[l][j] = cc.boundary[l - 1].columns[j];
  for (int l = 1; l < levels; ++l)
    for (std::size_t j = 0; j < size_of(l); ++j)
      for (const auto& [f, v] : bd[l][j]) {
        cob[l - 1][f].push_back(j);
        ++cob_count[l - 1][f];
      }
  std::vector<std::pair<int, std::size_t>> cofree, free;
  for (int l = 1; l < levels; ++l)
    for (std::size_t j = 0; j < size_of(l); ++j)
      if (bd[l][j].size() == 1) cofree.emplace_back(l, j);
  for (int l = 0; l + 1 < levels; ++l)
    for (std::size_t j = 0; j < size_of(l); ++j)
      if (cob_count[l][j] == 1) free.emplace_back(l, j);

  auto drop_face = [&](int l, std::size_t c, std::size_t f) {
    auto& b = bd[l][c];
    for (auto it = b.begin(); it != b.end(); ++it)
      if (it->first == f) {
        b.erase(it);
        break;
      }
    if (b.size() == 1) cofree.emplace_back(l, c);
  };
  // Removes a cell: it leaves the boundaries of its cofaces and the coface
  // counts of its faces.
  auto remove = [&](int l, std::size_t c) {
    alive[l][c] = 0;
    if (l + 1 < levels)
      for (std::size_t x : cob[l][c])
        if (alive[l + 1][x]) drop_face(l + 1, x, c);
    if (l > 0)
      for (const auto& [f, v] : bd[l][c])
        if (alive[l - 1][f] && --cob_count[l - 1][f] == 1) free.emplace_back(l - 1, f);
  };
  auto unit = [](long v) { return v == 1 || v == -1; };
  for (;;) {
    if (!cofree.empty()) {
      const auto [l, b] = cofree.back();
      cofree.pop_back();
      if (!alive[l][b] || bd[l][b].size() != 1 || !unit(bd[l][b].front().second)) continue;
      const std::size_t a = bd[l][b].front().first;
      remove(l, b);
      remove(l - 1, a);
      continue;
    }
    if (!free.empty()) {
      const auto [l, a] = free.back();
      free.pop_back();
      if (!alive[l][a] || cob_count[l][a] != 1) continue;
      std::size_t b = 0;
      long coef = 0;
      for (std::size_t x : cob[l][a])
        if (alive[l + 1][x])
          for (const auto& [f, v] : bd[l + 1][x])
            if (f == a) {
              b = x;
              coef = v;
            }
      if (!unit(coef)) continue;
      remove(l, a);
      remove(l + 1, b);
      continue;
    }
    break;
  }
  Reduced r;
  std::vector<std::vector<std::size_t>> slot(levels);
  for (int l = 0; l < levels; ++l) {
    slot[l].assign(size_of(l), 0);
    std::size_t k = 0;
    for (std::size_t j = 0; j < size_of(l); ++j)
      if (alive[l][j]) slot[l][j] = k++;
    r.sizes.push_back(k);
  }
  // r.sizes[0] is the augmentation level; shift to degrees.
  r.boundary.resize(top + 1);
  for (int n = 0; n <= top; ++n) {
    auto& m = r.boundary[n];
    m.rows = r.sizes[n];
    m.cols = r.sizes[n + 1];
    for (std::size_t j = 0; j < size_of(n + 1); ++j) {
      if (!alive[n + 1][j]) continue;
      std::vector<std::pair<std::size_t, long>> col;
      for (const auto& [f, v] : bd[n + 1][j]) col.emplace_back(slot[n][f], v);
      m.columns.push_back(std::move(col));
    }
  }
  r.sizes.erase(r.sizes.begin());
  return r;
}

}  // namespace

HomologyReport homology(const Complex& x, int dmax, Exec exec) {
  if (dmax < 0) throw SemanticError("homology: negative degree bound");
  if (x.truncation() && dmax > *x.truncation() - 1)
    throw SemanticError("homology: complex is truncated at dimension " + std::to_string(*x.truncation()) +
                        ", degrees above " + std::to_string(*x.truncation() - 1) + " are not determined");
  const ChainComplex cc = chain_complex(x, dmax + 1, exec);
  // Reduced homology of what survives the elementary reductions; boundary[n]
  // maps degree n to n-1, boundary[0] is the augmentation.
  const Reduced red = reduce_augmented(cc);
  const int top = dmax + 1;
  std::vector<std::vector<mpz_class>> factors(top + 1);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
  for (int n = 0; n <= top; ++n) factors[n] = invariant_factors(red.boundary[n]);
  HomologyReport h;
  h.dmax = dmax;
  for (int n = 0; n <= dmax; ++n) {
    HomologyGroup g;
    g.betti = static_cast<long>(red.sizes[n]) - static_cast<long>(factors[n].size()) -
              static_cast<long>(factors[n + 1].size());
    if (n == 0 && cc.rank(0) > 0) g.betti += 1;
    for (const auto& f : factors[n + 1])
      if (f > 1) g.torsion.push_back(f);
    h.groups.push_back(std::move(g));
  }
  return h;
}

long euler_characteristic(const HomologyReport& h) {
  long chi = 0;
  for (std::size_t n = 0; n < h.groups.size(); ++n) chi += (n % 2 ? -1 : 1) * h.groups[n].betti;
  return chi;
}

namespace {

// Integral basis of the n-cycles, as coefficient vectors over c.cells[n].
std::vector<std::vector<mpz_class>> cycle_basis(const ChainComplex& c, int n) {
  std::vector<std::vector<mpz_class>> cycles;
  const std::size_t cols = c.rank(n);
  if (n == 0) {
    for (std::size_t j = 0; j < cols; ++j) {
      std::vector<mpz_class> e(cols, 0);
      e[j] = 1;
      cycles.push_back(std::move(e));
    }
    return cycles;
  }
  const SmithForm s = smith_normal_form(to_dense(c.boundary[n]));
  for (std::size_t j = s.factors.size(); j < cols; ++j) {
    std::vector<mpz_class> z(cols);
    for (std::size_t i = 0; i < cols; ++i) z[i] = s.right[i][j];
    cycles.push_back(std::move(z));
  }
  return cycles;
}

}  // namespace

long homology_map_rank(const std::vector<const Complex*>& sources, const std::vector<const Complex*>& targets,
                       const std::vector<HomologyMapTerm>& terms, int n) {
  if (n < 0) throw SemanticError("homology_map_rank: negative degree");
  for (const Complex* y : targets)
    if (y->truncation() && n > *y->truncation() - 1)
      throw SemanticError("homology_map_rank: target truncated below degree");
  // Targets are stacked block-diagonally: [d_{n+1} of each target | images of source cycles].
  std::vector<ChainComplex> ct;
  std::vector<std::size_t> offset;
  SparseMatrix combined;
  for (const Complex* y : targets) {
    ct.push_back(chain_complex(*y, n + 1));
    offset.push_back(combined.rows);
    const SparseMatrix& b = ct.back().boundary[n + 1];
    for (const auto& col : b.columns) {
      std::vector<std::pair<std::size_t, long>> shifted;
      for (const auto& [r, v] : col) shifted.emplace_back(r + offset.back(), v);
      combined.columns.push_back(std::move(shifted));
    }
    combined.cols += b.cols;
    combined.rows += ct.back().rank(n);
  }
  const std::size_t base_rank = invariant_factors(combined).size();
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const ChainComplex cs = chain_complex(*sources[s], n);
    for (const auto& z : cycle_basis(cs, n)) {
      std::map<std::size_t, long> image;
      for (const auto& term : terms) {
        if (term.source != s) continue;
        const Complex& y = *targets[term.target];
        const Index first = y.first(n);
        for (std::size_t i = 0; i < z.size(); ++i) {
          if (z[i] == 0) continue;
          const Ref r = term.map->images[cs.cells[n][i]];
          if (r.mask != 0) continue;
          if (!z[i].fits_slong_p()) throw std::overflow_error("homology_map_rank: cycle coefficient too large");
          image[offset[term.target] + (r.cell - first)] += term.sign * z[i].get_si();
        }
      }
      std::vector<std::pair<std::size_t, long>> col;
      for (const auto& [r, v] : image)
        if (v != 0) col.emplace_back(r, v);
      combined.columns.push_back(std::move(col));
      ++combined.cols;
    }
  }
  return static_cast<long>(invariant_factors(combined).size() - base_rank);
}

long induced_rank(const ComplexMap& f, int n) {
  return homology_map_rank({f.source.get()}, {f.target.get()}, {{0, 0, &f, 1}}, n);
}

bool induces_isomorphism(const ComplexMap& f, int dmax) {
  const HomologyReport hx = homology(*f.source, dmax);
  const HomologyReport hy = homology(*f.target, dmax);
  if (hx != hy) return false;
  for (int n = 0; n <= dmax; ++n)
    if (induced_rank(f, n) != hx.groups[n].betti) return false;
  return true;
}

}  // namespace shapekit
