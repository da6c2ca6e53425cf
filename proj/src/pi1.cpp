#include "shapekit/pi1.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "shapekit/error.hpp"

namespace shapekit {

namespace {

// Endpoints (source, target) of a nondegenerate edge.
std::pair<Index, Index> endpoints(const Complex& x, Index e) {
  const auto& f = x.cell(e).faces;
  if (x.shape() == Shape::simplicial) return {f[1].cell, f[0].cell};
  return {f[0].cell, f[1].cell};
}

}  // namespace

std::pair<Index, Index> edge_endpoints(const Complex& x, Index edge) { return endpoints(x, edge); }

std::vector<Index> vertex_components(const Complex& x) {
  const std::size_t nv = x.count(0);
  std::vector<Index> parent(nv);
  for (Index v = 0; v < nv; ++v) parent[v] = v;
  auto find = [&](Index v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (Index e : x.cells_of_dim(1)) {
    auto [a, b] = endpoints(x, e);
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<Index> out(nv);
  for (Index v = 0; v < nv; ++v) out[v] = find(v);
  return out;
}

GroupPresentation pi1_with_tree(const Complex& x, const std::string& basepoint, const std::vector<char>& tree) {
  const auto base = x.find(basepoint);
  if (!base || x.cell(*base).dim != 0) throw SemanticError("pi1: basepoint " + basepoint + " not found");
  const std::size_t nv = x.count(0);
  std::vector<std::vector<Index>> incident(nv);
  for (Index e : x.cells_of_dim(1)) {
    const auto [a, b] = endpoints(x, e);
    incident[a].push_back(e);
    if (b != a) incident[b].push_back(e);
  }
  std::vector<char> seen(nv, 0), in_component(x.size(), 0);
  std::deque<Index> queue{*base};
  seen[*base] = 1;
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    in_component[v] = 1;
    for (Index e : incident[v]) {
      in_component[e] = 1;
      const auto [a, b] = endpoints(x, e);
      const Index w = a == v ? b : a;
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  GroupPresentation p;
  p.basepoint = basepoint;
  std::map<Index, int> gen;
  for (Index e : x.cells_of_dim(1))
    if (in_component[e] && !(e < tree.size() && tree[e])) {
      p.generators.push_back(x.cell(e).id);
      gen[e] = static_cast<int>(p.generators.size());
    }
  auto letter = [&](Ref r, int sign, Word& w) {
    if (r.mask != 0) return;
    const auto it = gen.find(r.cell);
    if (it != gen.end()) w.push_back(sign * it->second);
  };
  for (Index c : x.cells_of_dim(2)) {
    const auto& f = x.cell(c).faces;
    // Faces of a 2-cell lie in the component when its first vertex does.
    const Ref v = x.face(f[0], 0);
    if (!in_component[v.cell]) continue;
    Word w;
    if (x.shape() == Shape::simplicial) {
      letter(f[2], 1, w);
      letter(f[0], 1, w);
      letter(f[1], -1, w);
    } else {
      letter(f[2], 1, w);
      letter(f[1], 1, w);
      letter(f[3], -1, w);
      letter(f[0], -1, w);
    }
    p.relators.push_back(std::move(w));
  }
  return p;
}

GroupPresentation pi1_raw(const Complex& x, const std::string& basepoint) {
  const auto base = x.find(basepoint);
  if (!base || x.cell(*base).dim != 0) throw SemanticError("pi1: basepoint " + basepoint + " not found");
  const std::size_t nv = x.count(0);
  std::vector<std::vector<Index>> incident(nv);
  for (Index e : x.cells_of_dim(1)) {
    const auto [a, b] = endpoints(x, e);
    incident[a].push_back(e);
    if (b != a) incident[b].push_back(e);
  }
  std::vector<char> seen(nv, 0), tree(x.size(), 0);
  std::deque<Index> queue{*base};
  seen[*base] = 1;
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    for (Index e : incident[v]) {
      const auto [a, b] = endpoints(x, e);
      const Index w = a == v ? b : a;
      if (!seen[w]) {
        seen[w] = 1;
        tree[e] = 1;
        queue.push_back(w);
      }
    }
  }
  return pi1_with_tree(x, basepoint, tree);
}

Word reduce_word(const Word& w) {
  Word out;
  for (int a : w) {
    if (!out.empty() && out.back() == -a) {
      out.pop_back();
    } else {
      out.push_back(a);
    }
  }
  std::size_t i = 0, j = out.size();
  while (j - i >= 2 && out[i] == -out[j - 1]) {
    ++i;
    --j;
  }
  return Word(out.begin() + static_cast<long>(i), out.begin() + static_cast<long>(j));
}

void tietze_simplify(GroupPresentation& p, std::size_t budget) {
  // Relators and generators are deleted lazily and renumbered at the end;
  // occ[g] lists relators that may mention g.
  auto& rel = p.relators;
  const std::size_t ng = p.generators.size();
  std::vector<char> rel_alive(rel.size(), 1), gen_alive(ng + 1, 1);
  std::vector<std::vector<std::size_t>> occ(ng + 1);
  std::set<std::size_t> empty, defining;
  auto classify = [&](std::size_t k) {
    const Word& r = rel[k];
    empty.erase(k);
    defining.erase(k);
    if (r.empty()) empty.insert(k);
    if (r.size() == 1 || (r.size() == 2 && std::abs(r[0]) != std::abs(r[1]))) defining.insert(k);
  };
  for (std::size_t k = 0; k < rel.size(); ++k) {
    rel[k] = reduce_word(rel[k]);
    for (int a : rel[k]) occ[std::abs(a)].push_back(k);
    classify(k);
  }
  std::vector<std::size_t> stamp(rel.size(), 0);
  std::size_t round = 0;
  auto finish = [&]() {
    std::vector<int> renumber(ng + 1, 0);
    std::vector<std::string> gens;
    for (std::size_t g = 1; g <= ng; ++g)
      if (gen_alive[g]) {
        gens.push_back(p.generators[g - 1]);
        renumber[g] = static_cast<int>(gens.size());
      }
    std::vector<Word> kept;
    for (std::size_t k = 0; k < rel.size(); ++k) {
      if (!rel_alive[k]) continue;
      for (int& a : rel[k]) a = a > 0 ? renumber[a] : -renumber[-a];
      kept.push_back(std::move(rel[k]));
    }
    p.generators = std::move(gens);
    rel = std::move(kept);
  };
  auto spend = [&]() {
    if (p.moves >= budget) {
      p.budget_exhausted = true;
      return false;
    }
    ++p.moves;
    return true;
  };
  for (;;) {
    // Trivial relators go first.
    bool changed = false;
    while (!empty.empty()) {
      if (!spend()) return finish();
      const std::size_t k = *empty.begin();
      empty.erase(empty.begin());
      rel_alive[k] = 0;
      changed = true;
    }
    // A relator x or x y^e defines a generator.
    if (defining.empty()) {
      if (!changed) return finish();
      continue;
    }
    if (!spend()) return finish();
    const std::size_t pick = *defining.begin();
    defining.erase(defining.begin());
    rel_alive[pick] = 0;
    const Word r = rel[pick];
    // Eliminate the later generator g: g^s = replacement.
    std::size_t at = 0;
    if (r.size() == 2 && std::abs(r[1]) > std::abs(r[0])) at = 1;
    const int g = std::abs(r[at]);
    const int s = r[at] > 0 ? 1 : -1;
    Word replacement;  // value of g
    if (r.size() == 2) {
      // r = g^s y or y g^s: g^s = y^-1
      const int y = r[1 - at];
      replacement = {s > 0 ? -y : y};
    }
    gen_alive[g] = 0;
    ++round;
    for (std::size_t k : occ[g]) {
      if (!rel_alive[k] || stamp[k] == round) continue;
      stamp[k] = round;
      Word next;
      for (int a : rel[k]) {
        if (std::abs(a) != g) {
          next.push_back(a);
          continue;
        }
        if (a > 0) {
          next.insert(next.end(), replacement.begin(), replacement.end());
        } else {
          for (auto it = replacement.rbegin(); it != replacement.rend(); ++it) next.push_back(-*it);
        }
      }
      rel[k] = reduce_word(next);
      if (!replacement.empty()) occ[std::abs(replacement[0])].push_back(k);
      classify(k);
    }
    occ[g].clear();
  }
}

GroupPresentation pi1_presentation(const Complex& x, const std::string& basepoint, std::size_t tietze_budget) {
  GroupPresentation p = pi1_raw(x, basepoint);
  tietze_simplify(p, tietze_budget);
  return p;
}

HomologyGroup abelianization(const GroupPresentation& p) {
  const std::size_t n = p.generators.size();
  // Exponent sums, one column per relator (the transpose has the same factors).
  SparseMatrix m;
  m.rows = n;
  m.cols = p.relators.size();
  for (const Word& w : p.relators) {
    std::map<std::size_t, long> sums;
    for (int a : w) {
      if (a == 0 || static_cast<std::size_t>(std::abs(a)) > n)
        throw SemanticError("abelianization: relator mentions an unknown generator");
      sums[std::abs(a) - 1] += a > 0 ? 1 : -1;
    }
    std::vector<std::pair<std::size_t, long>> col;
    for (const auto& [g, v] : sums)
      if (v != 0) col.emplace_back(g, v);
    m.columns.push_back(std::move(col));
  }
  return group_from_factors(n, invariant_factors(m));
}

std::string to_string(const GroupPresentation& p) {
  std::string s = "<";
  for (std::size_t k = 0; k < p.generators.size(); ++k) s += (k ? ", " : "") + p.generators[k];
  s += " |";
  for (std::size_t k = 0; k < p.relators.size(); ++k) {
    s += k ? ", " : " ";
    for (std::size_t j = 0; j < p.relators[k].size(); ++j) {
      const int a = p.relators[k][j];
      s += (j ? " " : "") + p.generators[std::abs(a) - 1] + (a < 0 ? "^-1" : "");
    }
    if (p.relators[k].empty()) s += "1";
  }
  return s + ">";
}

}  // namespace shapekit
