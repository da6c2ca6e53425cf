#include "shapekit/nerve.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "shapekit/error.hpp"

namespace shapekit {

namespace {

struct ChainHash {
  std::size_t operator()(const std::vector<Index>& v) const noexcept {
    std::size_t h = v.size();
    for (Index x : v) h = h * 1000003u ^ x;
    return h;
  }
};

}  // namespace

Complex nerve(const FiniteCategory& c, int dmax, std::size_t budget, Exec exec) {
  if (dmax < 0) throw SemanticError("nerve: negative dimension bound");
  std::vector<Index> arrows;  // non-identity morphisms
  for (Index f = 0; f < c.morphism_count(); ++f)
    if (!c.is_identity(f)) arrows.push_back(f);
  {
    std::unordered_map<std::string, int> ids;
    for (const auto& o : c.objects()) ++ids[o];
    for (Index f : arrows)
      if (++ids[c.morphism(f).id] > 1 || c.morphism(f).id.find(';') != std::string::npos)
        throw SemanticError("nerve: morphism id " + c.morphism(f).id + " clashes with another cell id");
  }
  std::vector<std::vector<Index>> out_arrows(c.object_count());
  for (Index f : arrows) out_arrows[c.morphism(f).source].push_back(f);

  ComplexBuilder b(Shape::simplicial);
  std::vector<std::vector<std::vector<Index>>> levels(dmax + 1);
  std::vector<std::unordered_map<std::vector<Index>, Index, ChainHash>> table(dmax + 1);
  for (Index a = 0; a < c.object_count(); ++a) b.add_cell(c.object(a), 0);
  if (dmax >= 1)
    for (Index f : arrows) levels[1].push_back({f});
  for (int n = 2; n <= dmax; ++n) {
    const auto& prev = levels[n - 1];
    std::vector<std::vector<std::vector<Index>>> parts(prev.size());
    auto extend = [&](std::ptrdiff_t k) {
      const auto& ch = prev[static_cast<std::size_t>(k)];
      for (Index g : out_arrows[c.morphism(ch.back()).target]) {
        parts[k].push_back(ch);
        parts[k].back().push_back(g);
      }
    };
    const auto np = static_cast<std::ptrdiff_t>(prev.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
      for (std::ptrdiff_t k = 0; k < np; ++k) extend(k);
    } else {
      for (std::ptrdiff_t k = 0; k < np; ++k) extend(k);
    }
    std::size_t total = b.size() + levels[n - 1].size();
    for (const auto& p : parts) total += p.size();
    if (total > budget) throw BudgetExceeded("nerve cells", budget);
    for (auto& p : parts)
      for (auto& ch : p) levels[n].push_back(std::move(ch));
  }
  std::size_t total = b.size();
  for (const auto& l : levels) total += l.size();
  if (total > budget) throw BudgetExceeded("nerve cells", budget);

  // Cells first, then faces (which only look up lower levels).
  for (int n = 1; n <= dmax; ++n)
    for (const auto& ch : levels[n]) {
      std::string id;
      for (std::size_t i = 0; i < ch.size(); ++i) id += (i ? ";" : "") + c.morphism(ch[i]).id;
      table[n].emplace(ch, b.add_cell(std::move(id), n));
    }
  auto lookup = [&](const std::vector<Index>& ch) -> Index {
    if (ch.empty()) throw SemanticError("nerve: internal lookup of an empty chain");
    return table[ch.size()].at(ch);
  };
  for (int n = 1; n <= dmax; ++n) {
    const auto& lv = levels[n];
    std::vector<std::vector<Ref>> faces(lv.size());
    auto assemble = [&](std::ptrdiff_t k) {
      const auto& ch = lv[static_cast<std::size_t>(k)];
      auto& fs = faces[static_cast<std::size_t>(k)];
      if (n == 1) {
        fs = {{c.morphism(ch[0]).target, 0}, {c.morphism(ch[0]).source, 0}};
        return;
      }
      fs.push_back({lookup(std::vector<Index>(ch.begin() + 1, ch.end())), 0});
      for (int i = 1; i < n; ++i) {
        std::vector<Index> d;
        d.reserve(n - 1);
        d.insert(d.end(), ch.begin(), ch.begin() + (i - 1));
        const Index h = *c.compose(ch[i], ch[i - 1]);
        if (c.is_identity(h)) {
          d.insert(d.end(), ch.begin() + (i + 1), ch.end());
          fs.push_back(d.empty() ? Ref{c.morphism(h).source, 1u << (i - 1)} : Ref{lookup(d), 1u << (i - 1)});
        } else {
          d.push_back(h);
          d.insert(d.end(), ch.begin() + (i + 1), ch.end());
          fs.push_back({lookup(d), 0});
        }
      }
      fs.push_back({lookup(std::vector<Index>(ch.begin(), ch.end() - 1)), 0});
    };
    const auto nl = static_cast<std::ptrdiff_t>(lv.size());
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
      for (std::ptrdiff_t k = 0; k < nl; ++k) assemble(k);
    } else {
      for (std::ptrdiff_t k = 0; k < nl; ++k) assemble(k);
    }
    for (std::size_t k = 0; k < lv.size(); ++k) b.set_faces(table[n].at(lv[k]), std::move(faces[k]));
  }
  // Truncated when some top chain still extends.
  bool more = false;
  if (dmax == 0) {
    more = !arrows.empty();
  } else {
    for (const auto& ch : levels[dmax])
      if (!out_arrows[c.morphism(ch.back()).target].empty()) {
        more = true;
        break;
      }
  }
  return b.build(more ? std::optional<int>(dmax) : std::nullopt);
}

namespace {

/// All operators [k] -> [l] in the given shape.
std::vector<Op> operators(Shape shape, int k, int l, bool injective_only) {
  std::vector<Op> out;
  Op op;
  op.src = k;
  op.tgt = l;
  if (shape == Shape::simplicial) {
    std::function<void(int, int)> rec = [&](int j, int lo) {
      if (j > k) {
        out.push_back(op);
        return;
      }
      for (int v = lo; v <= l; ++v) {
        op.v[j] = static_cast<std::int8_t>(v);
        rec(j + 1, injective_only ? v + 1 : v);
      }
    };
    rec(0, 0);
  } else {
    std::function<void(int, int)> rec = [&](int c, int next) {
      if (c == l) {
        if (!injective_only || next == k) out.push_back(op);
        return;
      }
      for (std::int8_t v : {ops::kConst0, ops::kConst1}) {
        op.v[c] = v;
        rec(c + 1, next);
      }
      for (int in = next; in < k; ++in) {
        op.v[c] = static_cast<std::int8_t>(in);
        rec(c + 1, in + 1);
      }
    };
    rec(0, 0);
  }
  if (injective_only)
    std::erase_if(out, [&](const Op& o) { return !ops::is_injective(shape, o); });
  return out;
}

std::string operator_id(Shape shape, const Op& op) {
  return std::to_string(op.src) + "-" + std::to_string(op.tgt) + ":" + ops::to_string(shape, op);
}

}  // namespace

FiniteCategory operator_category(Shape shape, int n, bool injective_only) {
  if (n < 0 || n > 9) throw SemanticError("operator category: truncation out of range");
  CategoryBuilder b;
  std::vector<std::vector<std::vector<std::pair<Op, Index>>>> hom(n + 1, std::vector<std::vector<std::pair<Op, Index>>>(n + 1));
  for (int k = 0; k <= n; ++k) b.add_object(std::to_string(k), operator_id(shape, ops::identity(shape, k)));
  for (int k = 0; k <= n; ++k)
    for (int l = 0; l <= n; ++l)
      for (const Op& op : operators(shape, k, l, injective_only)) {
        const Index f = op == ops::identity(shape, k) && k == l ? b.identity_of(k)
                                                               : b.add_morphism(operator_id(shape, op), k, l);
        hom[k][l].emplace_back(op, f);
      }
  for (int k = 0; k <= n; ++k)
    for (int l = 0; l <= n; ++l)
      for (int m = 0; m <= n; ++m)
        for (const auto& [f, fi] : hom[k][l])
          for (const auto& [g, gi] : hom[l][m]) {
            const Op h = ops::compose(shape, g, f);
            const auto& cands = hom[k][m];
            auto it = std::find_if(cands.begin(), cands.end(), [&](const auto& p) { return p.first == h; });
            b.set_composite(gi, fi, it->second);
          }
  return b.build(false);
}

std::optional<Op> operator_of(Shape shape, const FiniteCategory& c, Index f) {
  const auto& m = c.morphism(f);
  const auto dash = m.id.find('-');
  const auto colon = m.id.find(':');
  if (dash == std::string::npos || colon == std::string::npos || colon < dash) return std::nullopt;
  Op op;
  try {
    op.src = std::stoi(m.id.substr(0, dash));
    op.tgt = std::stoi(m.id.substr(dash + 1, colon - dash - 1));
  } catch (const std::exception&) {
    return std::nullopt;
  }
  const std::string body = m.id.substr(colon + 1);
  const int len = shape == Shape::simplicial ? op.src + 1 : op.tgt;
  if (op.src < 0 || op.tgt < 0 || op.src > kMaxDim || op.tgt > kMaxDim || static_cast<int>(body.size()) != len)
    return std::nullopt;
  for (int j = 0; j < len; ++j) {
    const char ch = body[j];
    if (shape == Shape::simplicial) {
      op.v[j] = static_cast<std::int8_t>(ch <= '9' ? ch - '0' : ch - 'A' + 10);
    } else {
      op.v[j] = ch == '0' ? ops::kConst0 : ch == '1' ? ops::kConst1 : static_cast<std::int8_t>(ch - 'a');
    }
  }
  if (operator_id(shape, op) != m.id) return std::nullopt;
  return op;
}

FunctorData inclusion_functor(CategoryPtr source, CategoryPtr target) {
  FunctorData u{source, target, {}, {}};
  for (const auto& o : source->objects()) {
    auto t = target->find_object(o);
    if (!t) throw SemanticError("inclusion functor: object " + o + " missing in target");
    u.on_objects.push_back(*t);
  }
  for (const auto& m : source->morphisms()) {
    auto t = target->find_morphism(m.id);
    if (!t) throw SemanticError("inclusion functor: morphism " + m.id + " missing in target");
    u.on_morphisms.push_back(*t);
  }
  require_valid(validate_functor(u), "inclusion functor");
  return u;
}

SetPresheaf presheaf_of(const Complex& x, CategoryPtr base) {
  const auto& c = *base;
  const Shape shape = x.shape();
  PresheafBuilder b(base);
  std::vector<std::unordered_map<Ref, Index, RefHash>> local(c.object_count());
  std::vector<std::vector<Ref>> refs(c.object_count());
  for (Index a = 0; a < c.object_count(); ++a) {
    int k;
    try {
      k = std::stoi(c.object(a));
    } catch (const std::exception&) {
      throw SemanticError("presheaf_of: object " + c.object(a) + " is not a dimension");
    }
    if (x.truncation() && k > *x.truncation())
      throw SemanticError("presheaf_of: complex is truncated below dimension " + std::to_string(k));
    refs[a] = x.refs_of_dim(k);
    for (const Ref& r : refs[a]) local[a].emplace(r, b.add_element(a, x.ref_string(r)));
  }
  for (Index f = 0; f < c.morphism_count(); ++f) {
    const auto op = operator_of(shape, c, f);
    if (!op) throw SemanticError("presheaf_of: morphism " + c.morphism(f).id + " is not an operator");
    const auto& m = c.morphism(f);
    for (std::size_t y = 0; y < refs[m.target].size(); ++y)
      b.set_action(f, local[m.target].at(refs[m.target][y]), local[m.source].at(x.apply(refs[m.target][y], *op)));
  }
  return b.build();
}

ComplexMap nerve_map(const FunctorData& u, ComplexPtr source_nerve, ComplexPtr target_nerve) {
  const FiniteCategory& a = *u.source;
  const FiniteCategory& b = *u.target;
  const Complex& x = *source_nerve;
  const Complex& y = *target_nerve;
  ComplexMap f{source_nerve, target_nerve, std::vector<Ref>(x.size())};
  for (Index c = 0; c < x.size(); ++c) {
    const auto& cell = x.cell(c);
    std::string id;
    std::uint32_t m = 0;
    if (cell.dim == 0) {
      id = b.object(u.on_objects[*a.find_object(cell.id)]);
    } else {
      // Identities in the image chain become degeneracies.
      std::size_t start = 0;
      Index first_source = 0;
      for (int j = 0; j < cell.dim; ++j) {
        const std::size_t end = cell.id.find(';', start);
        const std::string arrow = cell.id.substr(start, end == std::string::npos ? std::string::npos : end - start);
        start = end + 1;
        const Index g = *a.find_morphism(arrow);
        if (j == 0) first_source = a.morphism(g).source;
        const Index h = u.on_morphisms[g];
        if (b.is_identity(h)) {
          m |= 1u << j;
        } else {
          id += (id.empty() ? "" : ";") + b.morphism(h).id;
        }
      }
      if (id.empty()) id = b.object(u.on_objects[first_source]);
    }
    const auto t = y.find(id);
    if (!t) throw SemanticError("nerve_map: image cell " + id + " is not in the target nerve");
    f.images[c] = {*t, m};
  }
  return f;
}

}  // namespace shapekit
