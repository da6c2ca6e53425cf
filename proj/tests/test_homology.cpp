#include "doctest.h"

#include <memory>
#include <numeric>
#include <random>

#include "shapekit/cubical.hpp"
#include "shapekit/error.hpp"
#include "shapekit/homology.hpp"
#include "shapekit/nerve.hpp"
#include "shapekit/pi1.hpp"
#include "shapekit/probe.hpp"
#include "shapekit/simplicial.hpp"
#include "support.hpp"

using namespace shapekit;
using shapekit::testing::oracle_homology;
using shapekit::testing::random_complex;

namespace {

ComplexPtr share(Complex c) { return std::make_shared<const Complex>(std::move(c)); }

IntMatrix from_longs(const std::vector<std::vector<long>>& m) {
  IntMatrix out;
  for (const auto& row : m) {
    out.emplace_back();
    for (long v : row) out.back().emplace_back(v);
  }
  return out;
}

std::vector<mpz_class> mpzs(std::initializer_list<long> v) {
  std::vector<mpz_class> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

// Determinant by cofactor expansion (small matrices only).
mpz_class det(const IntMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  mpz_class d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    IntMatrix minor;
    for (std::size_t i = 1; i < n; ++i) {
      minor.emplace_back();
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) minor.back().push_back(m[i][k]);
    }
    d += (j % 2 ? -1 : 1) * m[0][j] * det(minor);
  }
  return d;
}

// Invariant factors from determinantal divisors: d_k = g_k / g_{k-1}, with g_k
// the gcd of all k x k minors.
std::vector<mpz_class> factors_by_minors(const IntMatrix& m) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::vector<mpz_class> out;
  mpz_class prev = 1;
  for (std::size_t k = 1; k <= std::min(rows, cols); ++k) {
    mpz_class g = 0;
    std::vector<std::size_t> r(k), c(k);
    std::function<void(std::size_t, std::size_t, std::vector<std::size_t>&, std::size_t, std::vector<std::vector<std::size_t>>&)>
        choose = [&](std::size_t start, std::size_t n, std::vector<std::size_t>& cur, std::size_t need,
                     std::vector<std::vector<std::size_t>>& all) {
          if (cur.size() == need) {
            all.push_back(cur);
            return;
          }
          for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            choose(i + 1, n, cur, need, all);
            cur.pop_back();
          }
        };
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    choose(0, rows, cur, k, rs);
    choose(0, cols, cur, k, cs);
    for (const auto& ri : rs)
      for (const auto& ci : cs) {
        IntMatrix sub;
        for (auto i : ri) {
          sub.emplace_back();
          for (auto j : ci) sub.back().push_back(m[i][j]);
        }
        mpz_class d = det(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      }
    if (g == 0) break;
    out.push_back(g / prev);
    prev = g;
  }
  return out;
}

IntMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int lo, int hi, int zero_bias = 0) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntMatrix m = zero_matrix(rows, cols);
  for (auto& row : m)
    for (auto& x : row) x = static_cast<int>(rng() % (zero_bias + 1)) == 0 ? dist(rng) : 0;
  return m;
}

SparseMatrix to_sparse(const IntMatrix& m) {
  SparseMatrix s;
  s.rows = m.size();
  s.cols = m.empty() ? 0 : m[0].size();
  s.columns.resize(s.cols);
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j)
      if (m[i][j] != 0) s.columns[j].emplace_back(i, m[i][j].get_si());
  return s;
}

Complex rp2() {
  return from_facets({{"0", "1", "2"}, {"0", "2", "3"}, {"0", "3", "4"}, {"0", "4", "5"}, {"0", "1", "5"},
                      {"1", "2", "4"}, {"2", "3", "5"}, {"1", "3", "4"}, {"2", "4", "5"}, {"1", "3", "5"}});
}

std::vector<long> sphere_betti(int n) {
  std::vector<long> b(n, 0);
  b[0] += 1;
  b[n - 1] += 1;
  return b;
}

// Our homology against the oracle: betti numbers and which small primes divide torsion.
void agrees_with_oracle(const Complex& x, int top) {
  const auto h = homology(x, top);
  const auto o = oracle_homology(x, top);
  CHECK(h.betti() == o.betti);
  for (int n = 0; n <= top; ++n) {
    std::map<int, long> primes;
    for (const auto& t : h.groups[n].torsion)
      for (int p : {2, 3, 5, 7})
        if (t % p == 0) ++primes[p];
    CHECK(primes == o.torsion_primes[n]);
  }
}

}  // namespace

TEST_CASE("smith normal form on small examples") {
  CHECK(smith_normal_form(identity_matrix(3), true).factors == mpzs({1, 1, 1}));
  const auto s = smith_normal_form(from_longs({{2, 4}, {6, 8}}), true);
  CHECK(s.factors == mpzs({2, 4}));
  CHECK(smith_normal_form(zero_matrix(2, 3), true).factors.empty());
  CHECK(smith_normal_form(IntMatrix{}, true).factors.empty());
  CHECK(smith_normal_form(from_longs({{0, 0, 5}}), true).factors == mpzs({5}));
}

TEST_CASE("smith normal form round trip on random matrices") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = 1 + rng() % 12, c = 1 + rng() % 12;
    const auto m = random_matrix(rng, r, c, -9, 9);
    const auto s = smith_normal_form(m, true);
    CHECK(check_smith_form(m, s));
    CHECK(invariant_factors(m) == s.factors);
    CHECK(invariant_factors(to_sparse(m)) == s.factors);
  }
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    const auto m = random_matrix(rng, r, c, -6, 6, 1);
    CHECK(smith_normal_form(m).factors == factors_by_minors(m));
  }
}

TEST_CASE("sparse elimination falls back to exact arithmetic") {
  // Unit pivots with entries whose products overflow machine integers.
  const long big = 3'000'000'000L;
  IntMatrix m = from_longs({{1, big, big}, {big, 1, big}, {big, big, 1}});
  const auto dense = smith_normal_form(m, true).factors;
  CHECK(invariant_factors(to_sparse(m)) == dense);
  CHECK(dense == factors_by_minors(m));
  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto s = random_matrix(rng, 3 + rng() % 20, 3 + rng() % 20, -2, 2, 3);
    CHECK(invariant_factors(to_sparse(s)) == invariant_factors(s));
  }
}

TEST_CASE("chain complexes") {
  const auto pt = chain_complex(simplex(0), 2);
  CHECK(pt.rank(0) == 1);
  CHECK(pt.rank(1) == 0);
  const auto circle = chain_complex(boundary(2), 1);
  CHECK(circle.rank(0) == 3);
  CHECK(circle.rank(1) == 3);
  CHECK(invariant_factors(circle.boundary[1]).size() == 2);
  const auto seg = chain_complex(cube(1), 1);
  REQUIRE(seg.rank(0) == 2);
  REQUIRE(seg.rank(1) == 1);
  CHECK(to_dense(seg.boundary[1]) == from_longs({{1}, {-1}}));
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto x = random_complex(seed);
    const auto a = chain_complex(x, 3, Exec::serial);
    const auto b = chain_complex(x, 3, Exec::parallel);
    CHECK(boundaries_compose_to_zero(a));
    for (int n = 0; n <= 3; ++n) {
      CHECK(a.boundary[n].columns == b.boundary[n].columns);
      CHECK(to_dense(a.boundary[n]) == from_longs(shapekit::testing::oracle_boundary(x, n)));
    }
  }
  const auto cc = chain_complex(cube(3), 3);
  CHECK(boundaries_compose_to_zero(cc));
}

TEST_CASE("homology of spheres, simplices and the projective plane") {
  for (int n = 0; n <= 4; ++n) CHECK(homology(simplex(n), n).betti() == [&] {
    std::vector<long> b(n + 1, 0);
    b[0] = 1;
    return b;
  }());
  for (int n = 2; n <= 5; ++n) {
    const auto h = homology(boundary(n), n - 1);
    CHECK(h.betti() == sphere_betti(n));
    for (const auto& g : h.groups) CHECK(g.torsion.empty());
  }
  const auto p = rp2();
  CHECK(p.counts() == std::vector<std::size_t>{6, 15, 10});
  const auto h = homology(p, 2);
  CHECK(h.betti() == std::vector<long>{1, 0, 0});
  CHECK(h.groups[1].torsion == mpzs({2}));
  CHECK(to_string(h.groups[1]) == "Z/2");
  CHECK(homology(cube_boundary(3), 2).betti() == std::vector<long>{1, 0, 1});
  // Torus as a product of two circles.
  const auto torus = product(share(boundary(2)), share(boundary(2)), 3);
  CHECK(homology(*torus.complex, 2).betti() == std::vector<long>{1, 2, 1});
  CHECK(to_string(HomologyGroup{2, mpzs({2, 6})}) == "Z^2 + Z/2 + Z/6");
  CHECK(to_string(HomologyGroup{}) == "0");
}

TEST_CASE("homology agrees with the oracle on random complexes") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    CAPTURE(seed);
    const auto x = random_complex(seed);
    agrees_with_oracle(x, 3);
    CHECK(homology(x, 3, Exec::serial) == homology(x, 3, Exec::parallel));
    const auto h = homology(x, 3);
    for (const auto& g : h.groups)
      for (std::size_t k = 0; k + 1 < g.torsion.size(); ++k) CHECK(g.torsion[k + 1] % g.torsion[k] == 0);
    CHECK(euler_characteristic(h) == shapekit::testing::euler_characteristic(x));
  }
}

TEST_CASE("homology refuses degrees a truncation does not determine") {
  const auto n = nerve(cyclic_group_category(2), 3);
  REQUIRE(n.truncation());
  CHECK_NOTHROW(homology(n, 2));
  CHECK_THROWS_AS(homology(n, 3), SemanticError);
  const auto h = homology(n, 2);
  CHECK(h.groups[1].torsion == mpzs({2}));
  CHECK(h.groups[2] == HomologyGroup{});
}

TEST_CASE("subdivision induces isomorphisms on homology") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    CAPTURE(seed);
    const auto x = share(random_complex(seed));
    const auto sd = subdivide(x);
    CHECK(homology(*sd.complex, 3) == homology(*x, 3));
    CHECK(euler_characteristic(homology(*sd.complex, 3)) == shapekit::testing::euler_characteristic(*x));
    CHECK(induces_isomorphism(sd.last_vertex, 3));
  }
  // A map that is not an isomorphism on homology: the circle collapsed to a point.
  const auto circle = share(boundary(2));
  const auto pt = share(simplex(0));
  ComplexMap collapse{circle, pt, std::vector<Ref>(circle->size())};
  for (Index c = 0; c < circle->size(); ++c) collapse.images[c] = {0, c < 3 ? 0u : 1u};
  REQUIRE(validate_map(collapse).ok());
  CHECK(induced_rank(collapse, 0) == 1);
  CHECK(induced_rank(collapse, 1) == 0);
  CHECK_FALSE(induces_isomorphism(collapse, 1));
}

TEST_CASE("the comparison into Ex induces isomorphisms in low degrees") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    CAPTURE(seed);
    const auto x = share(random_complex(seed, 2, 10));
    const auto e = ex(x, 2);
    const auto c = ex_comparison(x, e);
    CHECK(induces_isomorphism(c, 1));
  }
}

TEST_CASE("fundamental group presentations") {
  CHECK(pi1_presentation(simplex(1), "0").generators.empty());
  const auto circle = pi1_presentation(boundary(2), "0");
  CHECK(circle.generators.size() == 1);
  CHECK(circle.relators.empty());
  const auto wedge = from_facets({{"a", "b"}, {"b", "c"}, {"a", "c"}, {"a", "d"}, {"d", "e"}, {"a", "e"}});
  const auto w = pi1_presentation(wedge, "a");
  CHECK(w.generators.size() == 2);
  CHECK(w.relators.empty());
  CHECK(pi1_presentation(simplex(2), "1").generators.empty());
  const auto p = pi1_presentation(rp2(), "0");
  const auto ab = abelianization(p);
  CHECK(ab.betti == 0);
  CHECK(ab.torsion == mpzs({2}));
  CHECK(p.generators.size() == 1);
  REQUIRE(p.relators.size() == 1);
  CHECK(p.relators[0].size() == 2);
  const auto torus = product(share(boundary(2)), share(boundary(2)), 2);
  CHECK(abelianization(pi1_presentation(*torus.complex, torus.complex->cell(0).id)).betti == 2);
  CHECK(abelianization(pi1_presentation(cube_boundary(2), "00")) == HomologyGroup{1, {}});
  CHECK(abelianization(pi1_presentation(cube(2), "00")) == HomologyGroup{});
  CHECK(abelianization(pi1_presentation(cube_boundary(3), "000")) == HomologyGroup{});
  CHECK_THROWS_AS(pi1_presentation(boundary(2), "7"), SemanticError);
  CHECK_THROWS_AS(pi1_presentation(boundary(2), "01"), SemanticError);
}

TEST_CASE("tietze moves respect their budget") {
  const auto raw = pi1_raw(simplex(3), "0");
  CHECK(raw.generators.size() == 3);
  CHECK(raw.relators.size() == 4);
  auto p = raw;
  tietze_simplify(p, 0);
  CHECK(p.budget_exhausted);
  CHECK(p.generators.size() == 3);
  auto q = raw;
  tietze_simplify(q, 1000);
  CHECK_FALSE(q.budget_exhausted);
  CHECK(q.generators.empty());
  CHECK(q.relators.empty());
  CHECK(abelianization(p) == abelianization(q));
  CHECK(reduce_word({1, 2, -2, 3, -1}) == Word{3});
  CHECK(to_string(pi1_presentation(boundary(2), "0")) == "<12 |>");
}

TEST_CASE("abelianized fundamental group equals first homology") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    CAPTURE(seed);
    const auto x = random_complex(seed);
    const auto comps = vertex_components(x);
    const auto ab = abelianization(pi1_presentation(x, x.cell(0).id));
    const auto raw = abelianization(pi1_raw(x, x.cell(0).id));
    CHECK(ab == raw);
    if (std::count(comps.begin(), comps.end(), 0u) != static_cast<long>(comps.size())) continue;
    CHECK(ab == homology(x, 1).groups[1]);
  }
}

TEST_CASE("contractibility probes") {
  const auto d3 = contractibility_probe(simplex(3), 3);
  CHECK_FALSE(d3.obstructed);
  CHECK(verdict(d3) == "no-obstruction-up-to-3");
  const auto c = contractibility_probe(boundary(2), 2);
  CHECK(c.obstructed);
  CHECK(c.witness == "H1 = Z");
  CHECK(verdict(c) == "obstructed(H1 = Z)");
  const auto z2 = contractibility_probe(nerve(cyclic_group_category(2), 4), 3);
  CHECK(z2.obstructed);
  CHECK(z2.witness == "H1 = Z/2");
  CHECK_FALSE(z2.pi1_abelianization_trivial);
  const auto two = contractibility_probe(coproduct({share(simplex(0)), share(simplex(0))}), 1);
  CHECK(two.obstructed);
  CHECK_FALSE(two.connected);
  CHECK(two.witness == "H0 = Z^2");
  CHECK(contractibility_probe(Complex(Shape::simplicial), 0).witness == "empty");
  // Obstructions persist in higher degrees.
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto x = random_complex(seed);
    bool before = false;
    for (int d = 0; d <= 3; ++d) {
      const auto r = contractibility_probe(x, d);
      if (before) CHECK(r.obstructed);
      before = r.obstructed;
    }
  }
}
