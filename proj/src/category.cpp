#include "shapekit/category.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "shapekit/error.hpp"

namespace shapekit {

void require_valid(const ValidationReport& report, const std::string& what) {
  if (!report.ok()) throw SemanticError(what + ": " + report.summary());
}

std::optional<Index> FiniteCategory::find_object(std::string_view id) const {
  auto it = object_index_.find(std::string(id));
  if (it == object_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> FiniteCategory::find_morphism(std::string_view id) const {
  auto it = morphism_index_.find(std::string(id));
  if (it == morphism_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> FiniteCategory::compose(Index g, Index f) const {
  auto it = composition_.find(key(g, f));
  if (it == composition_.end()) return std::nullopt;
  return it->second;
}

Index CategoryBuilder::add_object(std::string id, std::string identity_id) {
  const auto a = static_cast<Index>(objects_.size());
  if (identity_id.empty()) identity_id = "1_" + id;
  objects_.push_back(std::move(id));
  identities_.push_back(add_morphism(std::move(identity_id), a, a));
  return a;
}

Index CategoryBuilder::add_morphism(std::string id, Index source, Index target) {
  morphisms_.push_back({std::move(id), source, target});
  return static_cast<Index>(morphisms_.size() - 1);
}

void CategoryBuilder::set_composite(Index g, Index f, Index h) {
  composites_.emplace_back(FiniteCategory::key(g, f), h);
}

void CategoryBuilder::fill_identity_composites() {
  for (Index f = 0; f < morphisms_.size(); ++f) {
    set_composite(identities_[morphisms_[f].target], f, f);
    set_composite(f, identities_[morphisms_[f].source], f);
  }
}

FiniteCategory CategoryBuilder::build(bool with_identity_composites) {
  if (with_identity_composites) fill_identity_composites();

  std::vector<Index> obj_order(objects_.size());
  std::iota(obj_order.begin(), obj_order.end(), 0);
  std::sort(obj_order.begin(), obj_order.end(),
            [&](Index x, Index y) { return objects_[x] < objects_[y]; });
  std::vector<Index> obj_new(objects_.size());
  for (Index i = 0; i < obj_order.size(); ++i) obj_new[obj_order[i]] = i;

  std::vector<Index> mor_order(morphisms_.size());
  std::iota(mor_order.begin(), mor_order.end(), 0);
  std::sort(mor_order.begin(), mor_order.end(),
            [&](Index x, Index y) { return morphisms_[x].id < morphisms_[y].id; });
  std::vector<Index> mor_new(morphisms_.size());
  for (Index i = 0; i < mor_order.size(); ++i) mor_new[mor_order[i]] = i;

  FiniteCategory c;
  c.objects_.reserve(objects_.size());
  for (Index i : obj_order) c.objects_.push_back(objects_[i]);
  c.identities_.resize(objects_.size());
  for (Index a = 0; a < objects_.size(); ++a) c.identities_[obj_new[a]] = mor_new[identities_[a]];
  c.morphisms_.reserve(morphisms_.size());
  for (Index i : mor_order) {
    const auto& m = morphisms_[i];
    c.morphisms_.push_back({m.id, obj_new[m.source], obj_new[m.target]});
  }
  c.composition_.reserve(composites_.size());
  for (const auto& [k, h] : composites_) {
    const auto g = static_cast<Index>(k >> 32);
    const auto f = static_cast<Index>(k & 0xffffffffu);
    c.composition_[FiniteCategory::key(mor_new[g], mor_new[f])] = mor_new[h];
  }
  c.outgoing_.assign(c.objects_.size(), {});
  c.incoming_.assign(c.objects_.size(), {});
  for (Index f = 0; f < c.morphisms_.size(); ++f) {
    c.outgoing_[c.morphisms_[f].source].push_back(f);
    c.incoming_[c.morphisms_[f].target].push_back(f);
  }
  for (Index a = 0; a < c.objects_.size(); ++a) c.object_index_.emplace(c.objects_[a], a);
  for (Index f = 0; f < c.morphisms_.size(); ++f) c.morphism_index_.emplace(c.morphisms_[f].id, f);
  return c;
}

namespace {

std::string pair_witness(const FiniteCategory& c, Index g, Index f) {
  return c.morphism(g).id + " o " + c.morphism(f).id;
}

}  // namespace

ValidationReport validate_category(const FiniteCategory& c) {
  ValidationReport report;
  for (Index a = 0; a < c.object_count(); ++a) {
    const auto& id = c.morphism(c.identity(a));
    if (id.source != a || id.target != a) report.law("identity endpoints", c.object(a));
  }
  for (const auto& [k, h] : c.table()) {
    const auto g = static_cast<Index>(k >> 32);
    const auto f = static_cast<Index>(k & 0xffffffffu);
    if (c.morphism(f).target != c.morphism(g).source)
      report.law("composition on non-composable pair", pair_witness(c, g, f));
  }
  // Totality and endpoints over every composable pair, in id order.
  for (Index f = 0; f < c.morphism_count(); ++f) {
    for (Index g : c.outgoing(c.morphism(f).target)) {
      auto h = c.compose(g, f);
      if (!h) {
        report.law("composition not total", pair_witness(c, g, f));
        continue;
      }
      if (c.morphism(*h).source != c.morphism(f).source || c.morphism(*h).target != c.morphism(g).target)
        report.law("composite endpoints", pair_witness(c, g, f) + " = " + c.morphism(*h).id);
    }
  }
  if (!report.ok()) return report;
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto& m = c.morphism(f);
    if (c.compose(c.identity(m.target), f) != f) report.law("left identity", m.id);
    if (c.compose(f, c.identity(m.source)) != f) report.law("right identity", m.id);
  }
  for (Index f = 0; f < c.morphism_count(); ++f) {
    for (Index g : c.outgoing(c.morphism(f).target)) {
      const Index gf = *c.compose(g, f);
      for (Index h : c.outgoing(c.morphism(g).target)) {
        const Index hg = *c.compose(h, g);
        if (c.compose(h, gf) != c.compose(hg, f))
          report.law("associativity", c.morphism(h).id + " o " + c.morphism(g).id + " o " + c.morphism(f).id);
      }
    }
  }
  return report;
}

namespace {

struct DraftResolution {
  CategoryBuilder builder;
  std::map<std::string, Index> objects;
  std::map<std::string, Index> morphisms;
};

DraftResolution resolve(const CategoryDraft& draft, ValidationReport& report) {
  DraftResolution r;
  for (const auto& o : draft.objects) {
    if (o.id.empty()) {
      report.malformed("empty object id", "");
      continue;
    }
    if (r.objects.count(o.id)) {
      report.malformed("duplicate object id", o.id);
      continue;
    }
    const std::string ident = o.identity.empty() ? "1_" + o.id : o.identity;
    if (r.morphisms.count(ident)) {
      report.malformed("duplicate morphism id", ident);
      continue;
    }
    const Index a = r.builder.add_object(o.id, ident);
    r.objects[o.id] = a;
    r.morphisms[ident] = r.builder.identity_of(a);
  }
  for (const auto& m : draft.arrows) {
    if (r.morphisms.count(m.id)) {
      report.malformed("duplicate morphism id", m.id);
      continue;
    }
    auto s = r.objects.find(m.source);
    auto t = r.objects.find(m.target);
    if (s == r.objects.end()) {
      report.malformed("dangling object id", m.id + " source " + m.source);
      continue;
    }
    if (t == r.objects.end()) {
      report.malformed("dangling object id", m.id + " target " + m.target);
      continue;
    }
    r.morphisms[m.id] = r.builder.add_morphism(m.id, s->second, t->second);
  }
  std::map<std::pair<Index, Index>, Index> seen;
  for (const auto& c : draft.composites) {
    auto g = r.morphisms.find(c.second);
    auto f = r.morphisms.find(c.first);
    auto h = r.morphisms.find(c.result);
    if (g == r.morphisms.end() || f == r.morphisms.end() || h == r.morphisms.end()) {
      report.malformed("dangling morphism id", c.second + " o " + c.first + " = " + c.result);
      continue;
    }
    auto [it, inserted] = seen.emplace(std::make_pair(g->second, f->second), h->second);
    if (!inserted) {
      if (it->second != h->second)
        report.malformed("conflicting composite", c.second + " o " + c.first);
      continue;
    }
    r.builder.set_composite(g->second, f->second, h->second);
  }
  return r;
}

}  // namespace

ValidationReport validate_category(const CategoryDraft& draft) {
  ValidationReport report;
  auto r = resolve(draft, report);
  if (report.has_malformed()) return report;
  return validate_category(r.builder.build());
}

FiniteCategory build_category(const CategoryDraft& draft) {
  ValidationReport report;
  auto r = resolve(draft, report);
  require_valid(report, "category");
  auto c = r.builder.build();
  require_valid(validate_category(c), "category");
  return c;
}

ValidationReport validate_functor(const FunctorData& u) {
  ValidationReport report;
  const auto& a = *u.source;
  const auto& b = *u.target;
  if (u.on_objects.size() != a.object_count() || u.on_morphisms.size() != a.morphism_count()) {
    report.malformed("functor assignment size", "");
    return report;
  }
  for (Index x : u.on_objects)
    if (x >= b.object_count()) {
      report.malformed("dangling object id", std::to_string(x));
      return report;
    }
  for (Index x : u.on_morphisms)
    if (x >= b.morphism_count()) {
      report.malformed("dangling morphism id", std::to_string(x));
      return report;
    }
  for (Index f = 0; f < a.morphism_count(); ++f) {
    const auto& m = a.morphism(f);
    const auto& um = b.morphism(u.on_morphisms[f]);
    if (um.source != u.on_objects[m.source] || um.target != u.on_objects[m.target])
      report.law("functor endpoints", m.id);
  }
  for (Index x = 0; x < a.object_count(); ++x)
    if (u.on_morphisms[a.identity(x)] != b.identity(u.on_objects[x]))
      report.law("functor identity", a.object(x));
  for (const auto& [k, h] : a.table()) {
    const auto g = static_cast<Index>(k >> 32);
    const auto f = static_cast<Index>(k & 0xffffffffu);
    if (b.compose(u.on_morphisms[g], u.on_morphisms[f]) != u.on_morphisms[h])
      report.law("functor composition", pair_witness(a, g, f));
  }
  return report;
}

FunctorData identity_functor(CategoryPtr category) {
  FunctorData u{category, category, {}, {}};
  u.on_objects.resize(category->object_count());
  u.on_morphisms.resize(category->morphism_count());
  std::iota(u.on_objects.begin(), u.on_objects.end(), 0);
  std::iota(u.on_morphisms.begin(), u.on_morphisms.end(), 0);
  return u;
}

FunctorData functor_to_terminal(CategoryPtr source, CategoryPtr terminal) {
  if (terminal->object_count() != 1 || terminal->morphism_count() != 1)
    throw SemanticError("functor_to_terminal: target is not the terminal category");
  FunctorData u{source, terminal, {}, {}};
  u.on_objects.assign(source->object_count(), 0);
  u.on_morphisms.assign(source->morphism_count(), 0);
  return u;
}

FiniteCategory terminal_category() {
  CategoryBuilder b;
  b.add_object("*");
  return b.build();
}

FiniteCategory discrete_category(const std::vector<std::string>& objects) {
  CategoryBuilder b;
  for (const auto& o : objects) b.add_object(o);
  return b.build();
}

FiniteCategory cyclic_group_category(unsigned order) {
  CategoryBuilder b;
  b.add_object("*", "e");
  std::vector<Index> powers{b.identity_of(0)};
  for (unsigned k = 1; k < order; ++k) powers.push_back(b.add_morphism("g" + std::to_string(k), 0, 0));
  for (unsigned x = 1; x < order; ++x)
    for (unsigned y = 1; y < order; ++y) b.set_composite(powers[x], powers[y], powers[(x + y) % order]);
  return b.build();
}

FiniteCategory linear_order(unsigned n) {
  CategoryBuilder b;
  for (unsigned i = 0; i <= n; ++i) b.add_object(std::to_string(i));
  std::map<std::pair<unsigned, unsigned>, Index> arrow;
  for (unsigned i = 0; i <= n; ++i) {
    arrow[{i, i}] = b.identity_of(i);
    for (unsigned j = i + 1; j <= n; ++j)
      arrow[{i, j}] = b.add_morphism(std::to_string(i) + "<" + std::to_string(j), i, j);
  }
  for (unsigned i = 0; i <= n; ++i)
    for (unsigned j = i + 1; j <= n; ++j)
      for (unsigned k = j + 1; k <= n; ++k) b.set_composite(arrow[{j, k}], arrow[{i, j}], arrow[{i, k}]);
  return b.build();
}

FiniteCategory codiscrete_groupoid(const std::vector<std::string>& objects) {
  CategoryBuilder b;
  const auto n = static_cast<Index>(objects.size());
  for (const auto& o : objects) b.add_object(o);
  std::vector<std::vector<Index>> arrow(n, std::vector<Index>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      arrow[i][j] = i == j ? b.identity_of(i) : b.add_morphism(objects[i] + ">" + objects[j], i, j);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        if (i != j && j != k) b.set_composite(arrow[j][k], arrow[i][j], arrow[i][k]);
  return b.build();
}

FiniteCategory span_category() {
  CategoryBuilder b;
  const Index l = b.add_object("l");
  const Index m = b.add_object("m");
  const Index r = b.add_object("r");
  b.add_morphism("ml", m, l);
  b.add_morphism("mr", m, r);
  return b.build();
}

}  // namespace shapekit
