#include "shapekit/presheaf.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "shapekit/error.hpp"

namespace shapekit {

std::optional<Index> SetPresheaf::find_element(Index object, std::string_view id) const {
  const auto& elts = elements[object];
  auto it = std::lower_bound(elts.begin(), elts.end(), id,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == elts.end() || *it != id) return std::nullopt;
  return static_cast<Index>(it - elts.begin());
}

std::size_t SetPresheaf::total_size() const {
  std::size_t n = 0;
  for (const auto& e : elements) n += e.size();
  return n;
}

namespace {
constexpr Index kUnset = ~Index{0};
}

PresheafBuilder::PresheafBuilder(CategoryPtr base)
    : base_(std::move(base)), elements_(base_->object_count()), action_(base_->morphism_count()) {}

Index PresheafBuilder::add_element(Index object, std::string id) {
  elements_[object].push_back(std::move(id));
  return static_cast<Index>(elements_[object].size() - 1);
}

void PresheafBuilder::set_action(Index f, Index y, Index x) {
  auto& row = action_[f];
  if (row.size() <= y) row.resize(y + 1, kUnset);
  row[y] = x;
}

SetPresheaf PresheafBuilder::build() {
  const auto& c = *base_;
  std::vector<std::vector<Index>> renumber(c.object_count());
  SetPresheaf x;
  x.base = base_;
  x.elements.resize(c.object_count());
  for (Index a = 0; a < c.object_count(); ++a) {
    auto& e = elements_[a];
    std::vector<Index> order(e.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Index i, Index j) { return e[i] < e[j]; });
    renumber[a].resize(e.size());
    for (Index k = 0; k < order.size(); ++k) {
      renumber[a][order[k]] = k;
      x.elements[a].push_back(std::move(e[order[k]]));
    }
  }
  x.action.resize(c.morphism_count());
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& m = c.morphism(f);
    auto& row = action_[f];
    row.resize(x.elements[m.target].size(), kUnset);
    x.action[f].assign(row.size(), kUnset);
    for (Index y = 0; y < row.size(); ++y)
      if (row[y] != kUnset) x.action[f][renumber[m.target][y]] = renumber[m.source][row[y]];
  }
  return x;
}

ValidationReport validate_presheaf(const SetPresheaf& x) {
  ValidationReport report;
  const auto& c = *x.base;
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& m = c.morphism(f);
    for (Index y = 0; y < x.elements[m.target].size(); ++y) {
      if (y >= x.action[f].size() || x.action[f][y] == kUnset) {
        report.malformed("action not total", m.id + " " + x.elements[m.target][y]);
      } else if (x.action[f][y] >= x.elements[m.source].size()) {
        report.malformed("dangling element id", m.id + " " + x.elements[m.target][y]);
      }
    }
  }
  if (!report.ok()) return report;
  for (Index a = 0; a < c.object_count(); ++a) {
    const Index id = c.identity(a);
    for (Index y = 0; y < x.elements[a].size(); ++y)
      if (x.action[id][y] != y) report.law("presheaf identity", c.morphism(id).id + " " + x.elements[a][y]);
  }
  for (const auto& [k, h] : c.table()) {
    const auto g = static_cast<Index>(k >> 32);
    const auto f = static_cast<Index>(k & 0xffffffffu);
    const Index top = c.morphism(g).target;
    for (Index z = 0; z < x.elements[top].size(); ++z)
      if (x.action[h][z] != x.action[f][x.action[g][z]])
        report.law("presheaf composition",
                   c.morphism(g).id + " o " + c.morphism(f).id + " at " + x.elements[top][z]);
  }
  return report;
}

namespace {

struct ResolvedPresheaf {
  PresheafBuilder builder;
  std::vector<std::map<std::string, Index>> index;
};

ResolvedPresheaf resolve(const PresheafDraft& d, ValidationReport& report) {
  const auto& c = *d.base;
  ResolvedPresheaf r{PresheafBuilder(d.base), std::vector<std::map<std::string, Index>>(c.object_count())};
  for (const auto& e : d.elements) {
    auto a = c.find_object(e.object);
    if (!a) {
      report.malformed("dangling object id", e.object);
      continue;
    }
    if (r.index[*a].count(e.id)) {
      report.malformed("duplicate element id", e.object + " " + e.id);
      continue;
    }
    r.index[*a][e.id] = r.builder.add_element(*a, e.id);
  }
  std::map<std::pair<Index, Index>, Index> seen;
  for (const auto& act : d.actions) {
    auto f = c.find_morphism(act.morphism);
    if (!f) {
      report.malformed("dangling morphism id", act.morphism);
      continue;
    }
    const auto& m = c.morphism(*f);
    auto y = r.index[m.target].find(act.from);
    auto x = r.index[m.source].find(act.to);
    if (y == r.index[m.target].end()) {
      report.malformed("dangling element id", act.morphism + " " + act.from);
      continue;
    }
    if (x == r.index[m.source].end()) {
      report.malformed("dangling element id", act.morphism + " " + act.to);
      continue;
    }
    auto [it, inserted] = seen.emplace(std::make_pair(*f, y->second), x->second);
    if (!inserted) {
      if (it->second != x->second) report.malformed("conflicting action", act.morphism + " " + act.from);
      continue;
    }
    r.builder.set_action(*f, y->second, x->second);
  }
  // Identities act trivially unless the file says otherwise.
  for (Index a = 0; a < c.object_count(); ++a)
    for (const auto& [id, y] : r.index[a])
      if (!seen.count({c.identity(a), y})) r.builder.set_action(c.identity(a), y, y);
  return r;
}

}  // namespace

ValidationReport validate_presheaf(const PresheafDraft& draft) {
  ValidationReport report;
  auto r = resolve(draft, report);
  if (report.has_malformed()) return report;
  return validate_presheaf(r.builder.build());
}

SetPresheaf build_presheaf(const PresheafDraft& draft) {
  ValidationReport report;
  auto r = resolve(draft, report);
  require_valid(report, "presheaf");
  auto x = r.builder.build();
  require_valid(validate_presheaf(x), "presheaf");
  return x;
}

ValidationReport validate_presheaf_morphism(const SetPresheaf& x, const SetPresheaf& y,
                                            const PresheafMorphism& phi) {
  ValidationReport report;
  const auto& c = *x.base;
  if (x.base != y.base && x.base->objects() != y.base->objects()) {
    report.malformed("base mismatch", "");
    return report;
  }
  if (phi.components.size() != c.object_count()) {
    report.malformed("component count", std::to_string(phi.components.size()));
    return report;
  }
  for (Index a = 0; a < c.object_count(); ++a) {
    if (phi.components[a].size() != x.elements[a].size()) {
      report.malformed("component not total", c.object(a));
      return report;
    }
    for (Index e : phi.components[a])
      if (e >= y.elements[a].size()) {
        report.malformed("dangling element id", c.object(a));
        return report;
      }
  }
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& m = c.morphism(f);
    for (Index z = 0; z < x.elements[m.target].size(); ++z)
      if (phi.components[m.source][x.act(f, z)] != y.act(f, phi.components[m.target][z]))
        report.law("naturality", m.id + " " + x.elements[m.target][z]);
  }
  return report;
}

SetPresheaf representable(CategoryPtr base, Index object) {
  const auto& c = *base;
  PresheafBuilder b(base);
  std::vector<Index> local(c.morphism_count(), kUnset);
  for (Index f : c.incoming(object)) local[f] = b.add_element(c.morphism(f).source, c.morphism(f).id);
  for (Index g = 0; g < c.morphism_count(); ++g) {
    for (Index f : c.incoming(object)) {
      if (c.morphism(f).source != c.morphism(g).target) continue;
      auto h = c.compose(f, g);
      if (!h) throw SemanticError("representable: composition not total at " + c.morphism(f).id);
      b.set_action(g, local[f], local[*h]);
    }
  }
  return b.build();
}

SetPresheaf terminal_presheaf(CategoryPtr base) {
  PresheafBuilder b(base);
  for (Index a = 0; a < base->object_count(); ++a) b.add_element(a, "*");
  for (Index f = 0; f < base->morphism_count(); ++f) b.set_action(f, 0, 0);
  return b.build();
}

SetPresheaf empty_presheaf(CategoryPtr base) { return PresheafBuilder(base).build(); }

SetPresheaf product(const SetPresheaf& x, const SetPresheaf& y) {
  const auto& c = *x.base;
  PresheafBuilder b(x.base);
  for (Index a = 0; a < c.object_count(); ++a)
    for (const auto& ex : x.elements[a])
      for (const auto& ey : y.elements[a]) b.add_element(a, "(" + ex + "," + ey + ")");
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& m = c.morphism(f);
    const auto ny = static_cast<Index>(y.elements[m.target].size());
    const auto nys = static_cast<Index>(y.elements[m.source].size());
    for (Index i = 0; i < x.elements[m.target].size(); ++i)
      for (Index j = 0; j < ny; ++j) b.set_action(f, i * ny + j, x.act(f, i) * nys + y.act(f, j));
  }
  return b.build();
}

SetPresheaf restrict(const FunctorData& u, const SetPresheaf& x) {
  const auto& a = *u.source;
  SetPresheaf r;
  r.base = u.source;
  r.elements.resize(a.object_count());
  for (Index o = 0; o < a.object_count(); ++o) r.elements[o] = x.elements[u.on_objects[o]];
  r.action.resize(a.morphism_count());
  for (Index f = 0; f < a.morphism_count(); ++f) r.action[f] = x.action[u.on_morphisms[f]];
  return r;
}

SetPresheaf subobject_classifier(CategoryPtr base, std::size_t budget) {
  const auto& c = *base;
  PresheafBuilder b(base);
  // sieves[a] holds each sieve on a as a sorted list of morphism indices.
  std::vector<std::map<std::vector<Index>, Index>> sieves(c.object_count());
  for (Index a = 0; a < c.object_count(); ++a) {
    const auto in = c.incoming(a);
    const auto n = in.size();
    std::vector<Index> pos(c.morphism_count(), kUnset);
    for (Index i = 0; i < n; ++i) pos[in[i]] = i;
    // below[i]: positions of every f o h for the i-th incoming f.
    std::vector<std::vector<Index>> below(n), above(n);
    for (Index i = 0; i < n; ++i)
      for (Index h : c.incoming(c.morphism(in[i]).source)) {
        auto fh = c.compose(in[i], h);
        if (!fh) throw SemanticError("subobject classifier: composition not total");
        if (pos[*fh] != i) {
          below[i].push_back(pos[*fh]);
          above[pos[*fh]].push_back(i);
        }
      }
    std::vector<int> state(n, 0);  // 0 undecided, 1 in, -1 out
    std::vector<std::vector<Index>> found;
    // Decide positions in order; including forces everything below in,
    // excluding forces everything above out.
    std::function<void(Index)> rec = [&](Index i) {
      if (i == n) {
        std::vector<Index> s;
        for (Index k = 0; k < n; ++k)
          if (state[k] == 1) s.push_back(in[k]);
        found.push_back(std::move(s));
        if (found.size() > budget) throw BudgetExceeded("sieve enumeration at " + c.object(a), budget);
        return;
      }
      if (state[i] != 0) {
        rec(i + 1);
        return;
      }
      for (int choice : {-1, 1}) {
        std::vector<Index> touched;
        bool ok = true;
        std::vector<Index> stack{i};
        while (!stack.empty() && ok) {
          Index k = stack.back();
          stack.pop_back();
          if (state[k] == choice) continue;
          if (state[k] == -choice) {
            ok = false;
            break;
          }
          state[k] = choice;
          touched.push_back(k);
          for (Index nb : choice == 1 ? below[k] : above[k]) stack.push_back(nb);
        }
        if (ok) rec(i + 1);
        for (Index k : touched) state[k] = 0;
      }
    };
    rec(0);
    for (auto& s : found) {
      std::string id = "{";
      for (std::size_t k = 0; k < s.size(); ++k) id += (k ? "," : "") + c.morphism(s[k]).id;
      id += "}";
      const Index e = b.add_element(a, id);
      sieves[a].emplace(std::move(s), e);
    }
  }
  for (Index g = 0; g < c.morphism_count(); ++g) {
    const auto& m = c.morphism(g);
    for (const auto& [s, e] : sieves[m.target]) {
      std::vector<Index> pulled;
      for (Index h : c.incoming(m.source))
        if (std::binary_search(s.begin(), s.end(), *c.compose(g, h))) pulled.push_back(h);
      b.set_action(g, e, sieves[m.source].at(pulled));
    }
  }
  return b.build();
}

FiniteCategory elements(const SetPresheaf& x) {
  const auto& c = *x.base;
  CategoryBuilder b;
  std::vector<std::vector<Index>> obj(c.object_count());
  std::vector<std::vector<Index>> mor(c.morphism_count());
  // Objects first, naming identities after the identity morphism of the base.
  for (Index a = 0; a < c.object_count(); ++a) {
    obj[a].resize(x.elements[a].size());
    for (Index e = 0; e < x.elements[a].size(); ++e) {
      const std::string& ident = c.morphism(c.identity(a)).id;
      obj[a][e] = b.add_object(c.object(a) + ":" + x.elements[a][e], ident + ":" + x.elements[a][e]);
    }
  }
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& m = c.morphism(f);
    mor[f].resize(x.elements[m.target].size());
    for (Index y = 0; y < x.elements[m.target].size(); ++y) {
      if (c.is_identity(f)) {
        mor[f][y] = b.identity_of(obj[m.target][y]);
        continue;
      }
      mor[f][y] = b.add_morphism(m.id + ":" + x.elements[m.target][y], obj[m.source][x.act(f, y)],
                                 obj[m.target][y]);
    }
  }
  for (const auto& [k, h] : c.table()) {
    const auto g = static_cast<Index>(k >> 32);
    const auto f = static_cast<Index>(k & 0xffffffffu);
    if (c.is_identity(g) || c.is_identity(f)) continue;
    for (Index z = 0; z < x.elements[c.morphism(g).target].size(); ++z)
      b.set_composite(mor[g][z], mor[f][x.act(g, z)], mor[h][z]);
  }
  return b.build();
}

FunctorData elements_functor(const SetPresheaf& x, const SetPresheaf& y, const PresheafMorphism& phi,
                             CategoryPtr el_x, CategoryPtr el_y) {
  const auto& c = *x.base;
  FunctorData u{el_x, el_y, std::vector<Index>(el_x->object_count()), std::vector<Index>(el_x->morphism_count())};
  for (Index a = 0; a < c.object_count(); ++a)
    for (Index e = 0; e < x.elements[a].size(); ++e) {
      const Index src = *el_x->find_object(c.object(a) + ":" + x.elements[a][e]);
      u.on_objects[src] = *el_y->find_object(c.object(a) + ":" + y.elements[a][phi.components[a][e]]);
    }
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& m = c.morphism(f);
    for (Index z = 0; z < x.elements[m.target].size(); ++z) {
      const Index src = *el_x->find_morphism(m.id + ":" + x.elements[m.target][z]);
      u.on_morphisms[src] = *el_y->find_morphism(m.id + ":" + y.elements[m.target][phi.components[m.target][z]]);
    }
  }
  return u;
}

bool is_global_element(const SetPresheaf& x, const GlobalElement& p) {
  const auto& c = *x.base;
  if (p.size() != c.object_count()) return false;
  for (Index a = 0; a < c.object_count(); ++a)
    if (p[a] >= x.elements[a].size()) return false;
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& m = c.morphism(f);
    if (x.act(f, p[m.target]) != p[m.source]) return false;
  }
  return true;
}

ValidationReport validate_interval(const IntervalData& interval) {
  ValidationReport report = validate_presheaf(interval.presheaf);
  if (!report.ok()) return report;
  if (!is_global_element(interval.presheaf, interval.point0)) report.law("point is not natural", "0");
  if (!is_global_element(interval.presheaf, interval.point1)) report.law("point is not natural", "1");
  return report;
}

bool is_separating(const IntervalData& interval) {
  for (Index a = 0; a < interval.point0.size(); ++a)
    if (interval.point0[a] == interval.point1[a]) return false;
  return true;
}

IntervalData restrict(const FunctorData& u, const IntervalData& interval) {
  IntervalData r{restrict(u, interval.presheaf), {}, {}};
  for (Index o : u.on_objects) {
    r.point0.push_back(interval.point0[o]);
    r.point1.push_back(interval.point1[o]);
  }
  return r;
}

}  // namespace shapekit
