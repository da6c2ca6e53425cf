#include "support.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include "shapekit/simplicial.hpp"

namespace shapekit::testing {

std::vector<std::vector<long>> oracle_boundary(const Complex& x, int n) {
  const auto rows = n >= 1 ? x.cells_of_dim(n - 1) : std::vector<Index>{};
  const auto cols = x.cells_of_dim(n);
  std::map<Index, std::size_t> row_of;
  for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = r;
  std::vector<std::vector<long>> m(rows.size(), std::vector<long>(cols.size(), 0));
  if (n == 0) return m;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto& faces = x.cell(cols[c]).faces;
    for (std::size_t k = 0; k < faces.size(); ++k) {
      if (faces[k].mask != 0) continue;
      long sign;
      if (x.shape() == Shape::simplicial) {
        sign = k % 2 ? -1 : 1;
      } else {
        // face (i, xi) sits at 2(i-1)+xi; sign (-1)^i (xi ? 1 : -1)
        const long i = static_cast<long>(k / 2) + 1;
        sign = (i % 2 ? -1 : 1) * (k % 2 ? 1 : -1);
      }
      m[row_of.at(faces[k].cell)][c] += sign;
    }
  }
  return m;
}

long oracle_rank(std::vector<std::vector<long>> m, long p) {
  if (m.empty() || m[0].empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  long rank = 0;
  if (p == 0) {
    std::vector<std::vector<mpq_class>> q(rows, std::vector<mpq_class>(cols));
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) q[r][c] = m[r][c];
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < rows; ++c) {
      std::size_t piv = row;
      while (piv < rows && q[piv][c] == 0) ++piv;
      if (piv == rows) continue;
      std::swap(q[piv], q[row]);
      for (std::size_t r = row + 1; r < rows; ++r) {
        if (q[r][c] == 0) continue;
        const mpq_class f = q[r][c] / q[row][c];
        for (std::size_t k = c; k < cols; ++k) q[r][k] -= f * q[row][k];
      }
      ++row;
      ++rank;
    }
    return rank;
  }
  for (auto& r : m)
    for (auto& v : r) v = ((v % p) + p) % p;
  auto inv = [p](long a) {
    long r = 1, e = p - 2;
    for (long b = a; e; e >>= 1, b = b * b % p)
      if (e & 1) r = r * b % p;
    return r;
  };
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t piv = row;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[row]);
    const long iv = inv(m[row][c]);
    for (std::size_t r = row + 1; r < rows; ++r) {
      if (m[r][c] == 0) continue;
      const long f = m[r][c] * iv % p;
      for (std::size_t k = c; k < cols; ++k) m[r][k] = ((m[r][k] - f * m[row][k]) % p + p) % p;
    }
    ++row;
    ++rank;
  }
  return rank;
}

OracleHomology oracle_homology(const Complex& x, int top_degree) {
  OracleHomology h;
  for (int n = 0; n <= top_degree; ++n) {
    const long cells = static_cast<long>(n <= x.dim() ? x.count(n) : 0);
    const auto dn = oracle_boundary(x, n);
    const auto dn1 = oracle_boundary(x, n + 1);
    const long rn = n > 0 ? oracle_rank(dn, 0) : 0;
    const long rn1 = oracle_rank(dn1, 0);
    h.betti.push_back(cells - rn - rn1);
    std::map<int, long> tp;
    for (int p : {2, 3, 5, 7}) {
      const long drop = rn1 - oracle_rank(dn1, p);
      if (drop > 0) tp[p] = drop;
    }
    h.torsion_primes.push_back(tp);
  }
  return h;
}

long euler_characteristic(const Complex& x) {
  long chi = 0;
  for (int n = 0; n <= x.dim(); ++n) chi += (n % 2 ? -1 : 1) * static_cast<long>(x.count(n));
  return chi;
}

namespace {

ComplexPtr share(Complex c) { return std::make_shared<const Complex>(std::move(c)); }

ComplexMap to_point(ComplexPtr x) {
  const auto pt = share(simplex(0));
  ComplexMap f{x, pt, {}};
  for (const auto& c : x->cells()) f.images.push_back({0, (1u << c.dim) - 1});
  return f;
}

}  // namespace

// All maps by plain backtracking over the stored cells in index order, each
// tried against every reference of the right dimension.
std::vector<std::vector<Ref>> brute_maps(const Complex& s, const Complex& t) {
  std::vector<std::vector<Ref>> out;
  std::vector<Ref> img(s.size());
  std::vector<std::vector<Ref>> refs;
  for (int n = 0; n <= std::max(s.dim(), 0); ++n) refs.push_back(t.refs_of_dim(n));
  std::function<void(Index)> rec = [&](Index c) {
    if (c == s.size()) {
      out.push_back(img);
      return;
    }
    const auto& cell = s.cell(c);
    for (const Ref& r : refs[cell.dim]) {
      bool ok = true;
      for (int a = 0; a < static_cast<int>(cell.faces.size()) && ok; ++a) {
        const Ref f = cell.faces[a];
        const Ref fi{img[f.cell].cell, mask::compose_epi(f.mask, img[f.cell].mask)};
        ok = t.face(r, a) == fi;
      }
      if (!ok) continue;
      img[c] = r;
      rec(c + 1);
    }
  };
  rec(0);
  return out;
}

namespace {

// g after f, both given by their images.
std::vector<Ref> apply(const std::vector<Ref>& g, const std::vector<Ref>& f) {
  std::vector<Ref> out;
  for (const Ref& r : f) out.push_back({g[r.cell].cell, mask::compose_epi(r.mask, g[r.cell].mask)});
  return out;
}

}  // namespace

// Every square, every candidate filler.
bool brute_boxslash(const ComplexMap& i, const ComplexMap& p, std::size_t* squares) {
  const auto fs = brute_maps(*i.source, *p.source);
  const auto gs = brute_maps(*i.target, *p.target);
  const auto hs = brute_maps(*i.target, *p.source);
  std::size_t count = 0;
  bool all = true;
  for (const auto& f : fs)
    for (const auto& g : gs) {
      if (apply(p.images, f) != apply(g, i.images)) continue;
      ++count;
      bool found = false;
      for (const auto& h : hs)
        if (apply(h, i.images) == f && apply(p.images, h) == g) {
          found = true;
          break;
        }
      all = all && found;
    }
  if (squares) *squares = count;
  return all;
}

ComplexMap map_by_vertices(ComplexPtr x, ComplexPtr y, const std::vector<std::string>& vertex_images) {
  for (const auto& m : enumerate_maps(x, y)) {
    bool ok = true;
    for (Index v = 0; v < x->count(0); ++v) ok = ok && y->cell(m.images[v].cell).id == vertex_images[v];
    if (ok) return m;
  }
  throw std::runtime_error("no such map");
}

std::vector<std::pair<std::string, ComplexMap>> lifting_fixture_maps() {
  {
    const auto d0 = share(simplex(0)), d1 = share(simplex(1)), d2 = share(simplex(2));
    const auto b1 = share(boundary(1)), b2 = share(boundary(2)), h21 = share(horn(2, 1)), h20 = share(horn(2, 0));
    // The circle with one vertex.
    ComplexDraft loop;
    loop.cells = {{"v", 0, {}}, {"e", 1, {"v", "v"}}};
    const auto s1 = share(build_complex(loop));
    const auto both = share(coproduct({d1, d0}));
    return {{"edge to point", to_point(d1)},
            {"two points to point", to_point(b1)},
            {"triangle to point", to_point(d2)},
            {"hollow triangle to point", to_point(b2)},
            {"inner horn to point", to_point(h21)},
            {"outer horn to point", to_point(h20)},
            {"loop to point", to_point(s1)},
            {"edge identity", identity_map(d1)},
            {"hollow triangle into triangle", inclusion(b2, d2)},
            {"triangle onto edge", map_by_vertices(d2, d1, {"0", "0", "1"})},
            {"edge and point onto edge", map_by_vertices(both, d1, {"0", "1", "0"})}};
  }
}

std::vector<std::pair<std::string, ComplexMap>> generators_up_to_2() {
  std::vector<std::pair<std::string, ComplexMap>> out;
  for (int k = 0; k <= 2; ++k) {
    const auto full = share(simplex(k));
    out.push_back({"boundary " + std::to_string(k), inclusion(share(boundary(k)), full)});
    for (int j = 0; j <= k && k >= 1; ++j)
      out.push_back({"horn " + std::to_string(k) + "," + std::to_string(j), inclusion(share(horn(k, j)), full)});
  }
  return out;
}

}  // namespace shapekit::testing
