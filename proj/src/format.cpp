#include "shapekit/format.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "shapekit/error.hpp"

namespace shapekit {

namespace {

struct Token {
  std::string text;
  std::size_t column = 0;
};

struct Line {
  std::size_t number = 0;
  std::vector<Token> tokens;

  const std::string& word(std::size_t k) const { return tokens[k].text; }
  std::size_t size() const { return tokens.size(); }
  [[noreturn]] void fail(std::size_t k, const std::string& message) const {
    const std::size_t col = k < tokens.size() ? tokens[k].column
                                              : (tokens.empty() ? 1 : tokens.back().column + tokens.back().text.size());
    throw ParseError(number, col, message);
  }
  void expect(std::size_t k, std::string_view text) const {
    if (k >= size() || word(k) != text) fail(k, "expected '" + std::string(text) + "'");
  }
  void arity(std::size_t n) const {
    if (size() < n) fail(size(), "missing field");
    if (size() > n) fail(n, "unexpected token '" + word(n) + "'");
  }
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++number;
    Line line{number, {}};
    std::size_t k = pos;
    while (k < end) {
      if (text[k] == ' ' || text[k] == '\t' || text[k] == '\r') {
        ++k;
        continue;
      }
      const std::size_t start = k;
      while (k < end && text[k] != ' ' && text[k] != '\t' && text[k] != '\r') ++k;
      line.tokens.push_back({std::string(text.substr(start, k - start)), start - pos + 1});
    }
    if (!line.tokens.empty() && line.tokens[0].text[0] != '#') out.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

int parse_int(const Line& l, std::size_t k) {
  if (k >= l.size()) l.fail(k, "missing number");
  const std::string& s = l.word(k);
  if (s.empty() || s.size() > 6 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    l.fail(k, "expected a non-negative integer");
  return std::stoi(s);
}

const std::map<std::string, DocumentKind>& kind_table() {
  static const std::map<std::string, DocumentKind> t{{"category", DocumentKind::category},
                                                     {"presheaf", DocumentKind::presheaf},
                                                     {"simplicial", DocumentKind::simplicial},
                                                     {"cubical", DocumentKind::cubical},
                                                     {"cover", DocumentKind::cover},
                                                     {"diagram", DocumentKind::diagram},
                                                     {"functor", DocumentKind::functor},
                                                     {"lifting-problem", DocumentKind::lifting_problem},
                                                     {"maps", DocumentKind::maps}};
  return t;
}

// Bodies of the basic kinds.

CategoryPtr parse_category(const std::vector<Line>& lines) {
  CategoryDraft d;
  for (const auto& l : lines) {
    const auto& w = l.word(0);
    if (w == "obj") {
      if (l.size() != 2 && l.size() != 3) l.arity(l.size() < 2 ? 2 : 3);
      d.objects.push_back({l.word(1), l.size() == 3 ? l.word(2) : std::string()});
    } else if (w == "mor") {
      l.arity(4);
      d.arrows.push_back({l.word(1), l.word(2), l.word(3)});
    } else if (w == "comp") {
      l.arity(5);
      l.expect(3, "=");
      d.composites.push_back({l.word(1), l.word(2), l.word(4)});
    } else {
      l.fail(0, "unknown category line '" + w + "'");
    }
  }
  return std::make_shared<const FiniteCategory>(build_category(d));
}

ComplexPtr parse_complex(Shape shape, const std::vector<Line>& lines) {
  ComplexDraft d;
  d.shape = shape;
  // Cubical faces arrive on their own lines; slot a = 2(i-1)+xi.
  std::vector<std::vector<std::optional<std::string>>> slots;
  std::vector<const Line*> owners;
  for (const auto& l : lines) {
    const auto& w = l.word(0);
    if (w == "truncation") {
      l.arity(2);
      if (d.truncation) l.fail(0, "repeated truncation");
      d.truncation = parse_int(l, 1);
    } else if (w == "cell") {
      if (l.size() < 3) l.fail(l.size(), "missing field");
      const int n = parse_int(l, 1);
      if (n > 30) l.fail(1, "dimension too large");
      ComplexDraft::CellDecl c{l.word(2), n, {}};
      if (shape == Shape::simplicial) {
        if (n == 0) {
          if (l.size() > 3) {
            l.expect(3, ":");
            l.arity(4);
          }
        } else {
          l.expect(3, ":");
          l.arity(4 + static_cast<std::size_t>(n) + 1);
          for (std::size_t k = 4; k < l.size(); ++k) c.faces.push_back(l.word(k));
        }
      } else {
        l.arity(3);
      }
      d.cells.push_back(std::move(c));
      slots.emplace_back(shape == Shape::cubical ? 2 * n : 0);
      owners.push_back(&l);
    } else if (w == "face" && shape == Shape::cubical) {
      l.arity(4);
      if (d.cells.empty()) l.fail(0, "face before any cell");
      const int n = d.cells.back().dim;
      const int i = parse_int(l, 1), xi = parse_int(l, 2);
      if (i < 1 || i > n) l.fail(1, "face index out of range");
      if (xi > 1) l.fail(2, "expected 0 or 1");
      auto& slot = slots.back()[2 * (i - 1) + xi];
      if (slot) l.fail(0, "repeated face");
      slot = l.word(3);
    } else {
      l.fail(0, "unknown " + std::string(shape == Shape::simplicial ? "simplicial" : "cubical") + " line '" + w +
                    "'");
    }
  }
  if (shape == Shape::cubical)
    for (std::size_t c = 0; c < d.cells.size(); ++c) {
      for (std::size_t a = 0; a < slots[c].size(); ++a) {
        if (!slots[c][a])
          owners[c]->fail(0, "cell " + d.cells[c].id + " lacks face " + std::to_string(a / 2 + 1) + " " +
                                 std::to_string(a % 2));
        d.cells[c].faces.push_back(*slots[c][a]);
      }
    }
  return std::make_shared<const Complex>(build_complex(d));
}

Ref resolve_ref(const Complex& x, const std::string& text, const std::string& what) {
  const auto r = x.parse_ref(text);
  if (!r) throw SemanticError(what + ": dangling cell id: " + text);
  return *r;
}

// `<cell>=<ref> ...` from token k on.
ComplexMap parse_map_body(const Line& l, std::size_t k, ComplexPtr source, ComplexPtr target, const std::string& name) {
  ComplexMap f{source, target, std::vector<Ref>(source->size())};
  std::vector<char> seen(source->size(), 0);
  for (; k < l.size(); ++k) {
    const auto& t = l.word(k);
    const auto eq = t.rfind('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == t.size()) l.fail(k, "expected <cell>=<ref>");
    const auto cell = source->find(t.substr(0, eq));
    if (!cell) throw SemanticError("map " + name + ": dangling cell id: " + t.substr(0, eq));
    if (seen[*cell]) l.fail(k, "repeated cell " + t.substr(0, eq));
    seen[*cell] = 1;
    f.images[*cell] = resolve_ref(*target, t.substr(eq + 1), "map " + name);
  }
  for (Index c = 0; c < source->size(); ++c)
    if (!seen[c]) throw SemanticError("map " + name + ": map not total: " + source->cell(c).id);
  require_valid(validate_map(f), "map " + name);
  return f;
}

template <typename T>
T find_named(const std::vector<std::pair<std::string, T>>& items, const std::string& name, const Line& l,
             std::size_t k, const char* what) {
  for (const auto& [n, v] : items)
    if (n == name) return v;
  l.fail(k, std::string("unknown ") + what + " '" + name + "'");
}

std::string name_of(const std::vector<std::pair<std::string, ComplexPtr>>& items, const ComplexPtr& x) {
  for (const auto& [n, v] : items)
    if (v == x) return n;
  throw std::logic_error("serialize: complex without a block");
}

// Serialization of the basic bodies.

void write_category(std::ostream& out, const FiniteCategory& c) {
  for (Index a = 0; a < c.object_count(); ++a) {
    const auto& id = c.morphism(c.identity(a)).id;
    out << "obj " << c.object(a);
    if (id != "1_" + c.object(a)) out << " " << id;
    out << "\n";
  }
  for (Index f = 0; f < c.morphism_count(); ++f)
    if (!c.is_identity(f))
      out << "mor " << c.morphism(f).id << " " << c.object(c.morphism(f).source) << " "
          << c.object(c.morphism(f).target) << "\n";
  std::vector<std::tuple<std::string, std::string, std::string>> comps;
  for (const auto& [key, h] : c.table()) {
    const Index g = static_cast<Index>(key >> 32), f = static_cast<Index>(key & 0xffffffffu);
    if (c.is_identity(g) || c.is_identity(f)) continue;
    comps.emplace_back(c.morphism(g).id, c.morphism(f).id, c.morphism(h).id);
  }
  std::sort(comps.begin(), comps.end());
  for (const auto& [g, f, h] : comps) out << "comp " << g << " " << f << " = " << h << "\n";
}

void write_complex(std::ostream& out, const Complex& x) {
  if (x.truncation()) out << "truncation " << *x.truncation() << "\n";
  for (const auto& c : x.cells()) {
    out << "cell " << c.dim << " " << c.id;
    if (x.shape() == Shape::simplicial) {
      if (c.dim > 0) {
        out << " :";
        for (const Ref& r : c.faces) out << " " << x.ref_string(r);
      }
      out << "\n";
    } else {
      out << "\n";
      for (std::size_t a = 0; a < c.faces.size(); ++a)
        out << "face " << a / 2 + 1 << " " << a % 2 << " " << x.ref_string(c.faces[a]) << "\n";
    }
  }
}

void write_block(std::ostream& out, const std::string& name, const FiniteCategory& c) {
  out << "begin category " << name << "\n";
  write_category(out, c);
  out << "end\n";
}

void write_block(std::ostream& out, const std::string& name, const Complex& x) {
  out << "begin " << (x.shape() == Shape::simplicial ? "simplicial " : "cubical ") << name << "\n";
  write_complex(out, x);
  out << "end\n";
}

void write_map_body(std::ostream& out, const ComplexMap& f) {
  out << " :";
  for (Index c = 0; c < f.source->size(); ++c)
    out << " " << f.source->cell(c).id << "=" << f.target->ref_string(f.images[c]);
  out << "\n";
}

// Diagram maps not given directly are composed from the table.
void complete_diagram(Diagram& d, std::vector<char>& known) {
  const auto& a = *d.shape;
  for (Index o = 0; o < a.object_count(); ++o)
    if (!known[a.identity(o)]) {
      d.maps[a.identity(o)] = identity_map(d.objects[o]);
      known[a.identity(o)] = 1;
    }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [key, h] : a.table()) {
      const Index g = static_cast<Index>(key >> 32), f = static_cast<Index>(key & 0xffffffffu);
      if (known[h] || !known[g] || !known[f]) continue;
      d.maps[h] = compose(d.maps[g], d.maps[f]);
      known[h] = 1;
      changed = true;
    }
  }
  for (Index f = 0; f < a.morphism_count(); ++f)
    if (!known[f]) throw SemanticError("diagram: missing map: " + a.morphism(f).id);
}

}  // namespace

std::string to_string(DocumentKind kind) {
  for (const auto& [s, k] : kind_table())
    if (k == kind) return s;
  return "?";
}

std::optional<DocumentKind> parse_kind(std::string_view text) {
  const auto it = kind_table().find(std::string(text));
  if (it == kind_table().end()) return std::nullopt;
  return it->second;
}

CategoryPtr Document::category() const {
  if (categories.empty()) throw SemanticError("document has no category");
  return categories.front().second;
}

ComplexPtr Document::complex() const {
  if (complexes.empty()) throw SemanticError("document has no complex");
  return complexes.front().second;
}

const ComplexMap& Document::map(std::string_view n) const {
  for (const auto& [name, f] : maps)
    if (name == n) return f;
  throw SemanticError("document has no map " + std::string(n));
}

LiftingProblem Document::square() const { return {map("i"), map("p"), map("f"), map("g")}; }

Document parse_document(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty document");
  const Line& head = lines[0];
  head.expect(0, "kind");
  if (head.size() < 2) head.fail(1, "missing kind");
  const auto kind = parse_kind(head.word(1));
  if (!kind) head.fail(1, "unknown kind '" + head.word(1) + "'");
  head.expect(2, "v1");
  head.arity(3);

  Document doc;
  doc.kind = *kind;
  std::vector<Line> body;
  struct Block {
    std::string kind, name;
    const Line* opener;
    std::vector<Line> lines;
  };
  std::vector<Block> blocks;
  const bool compound = *kind != DocumentKind::category && *kind != DocumentKind::simplicial &&
                        *kind != DocumentKind::cubical;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& l = lines[k];
    if (l.word(0) == "name") {
      l.arity(2);
      if (!doc.name.empty()) l.fail(0, "repeated name");
      doc.name = l.word(1);
    } else if (l.word(0) == "begin") {
      if (!compound) l.fail(0, "blocks are not allowed in a " + head.word(1) + " document");
      l.arity(3);
      const auto& bk = l.word(1);
      if (bk != "category" && bk != "simplicial" && bk != "cubical") l.fail(1, "unknown block kind '" + bk + "'");
      for (const auto& b : blocks)
        if (b.name == l.word(2)) l.fail(2, "repeated block name '" + l.word(2) + "'");
      Block b{bk, l.word(2), &l, {}};
      for (++k; k < lines.size() && lines[k].word(0) != "end"; ++k) {
        if (lines[k].word(0) == "begin") lines[k].fail(0, "nested block");
        b.lines.push_back(lines[k]);
      }
      if (k == lines.size()) l.fail(0, "block without end");
      lines[k].arity(1);
      blocks.push_back(std::move(b));
    } else if (l.word(0) == "end") {
      l.fail(0, "end without begin");
    } else {
      body.push_back(l);
    }
  }
  for (const auto& b : blocks) {
    if (b.kind == "category")
      doc.categories.push_back({b.name, parse_category(b.lines)});
    else
      doc.complexes.push_back(
          {b.name, parse_complex(b.kind == "simplicial" ? Shape::simplicial : Shape::cubical, b.lines)});
  }
  auto require_blocks = [&](std::size_t cats, std::size_t min_complexes, std::size_t max_complexes) {
    if (doc.categories.size() != cats)
      throw SemanticError(to_string(doc.kind) + ": expected " + std::to_string(cats) + " category block(s)");
    if (doc.complexes.size() < min_complexes || doc.complexes.size() > max_complexes)
      throw SemanticError(to_string(doc.kind) + ": wrong number of complex blocks");
  };

  switch (doc.kind) {
    case DocumentKind::category:
      doc.categories.push_back({doc.name, parse_category(body)});
      break;
    case DocumentKind::simplicial:
    case DocumentKind::cubical:
      doc.complexes.push_back(
          {doc.name, parse_complex(doc.kind == DocumentKind::simplicial ? Shape::simplicial : Shape::cubical, body)});
      break;
    case DocumentKind::presheaf: {
      require_blocks(1, 0, 0);
      PresheafDraft d;
      d.base = doc.category();
      for (const auto& l : body) {
        if (l.word(0) == "elt") {
          l.arity(3);
          d.elements.push_back({l.word(1), l.word(2)});
        } else if (l.word(0) == "act") {
          l.arity(5);
          l.expect(3, "=");
          d.actions.push_back({l.word(1), l.word(2), l.word(4)});
        } else {
          l.fail(0, "unknown presheaf line '" + l.word(0) + "'");
        }
      }
      doc.presheaf = build_presheaf(d);
      break;
    }
    case DocumentKind::cover: {
      require_blocks(0, 1, 1);
      std::vector<std::pair<std::string, std::vector<std::string>>> subs;
      for (const auto& l : body) {
        if (l.word(0) != "sub") l.fail(0, "unknown cover line '" + l.word(0) + "'");
        if (l.size() < 3) l.fail(l.size(), "missing field");
        l.expect(2, ":");
        for (const auto& s : subs)
          if (s.first == l.word(1)) l.fail(1, "repeated subcomplex '" + l.word(1) + "'");
        std::vector<std::string> ids;
        for (std::size_t k = 3; k < l.size(); ++k) ids.push_back(l.word(k));
        subs.push_back({l.word(1), std::move(ids)});
      }
      if (subs.empty()) throw SemanticError("cover: no subcomplexes");
      doc.cover = make_cover(doc.complex(), subs);
      break;
    }
    case DocumentKind::diagram: {
      require_blocks(1, 1, static_cast<std::size_t>(-1));
      Diagram d;
      d.shape = doc.category();
      const auto& a = *d.shape;
      d.objects.assign(a.object_count(), nullptr);
      d.maps.assign(a.morphism_count(), ComplexMap{});
      std::vector<char> known(a.morphism_count(), 0);
      std::vector<const Line*> map_lines;
      for (const auto& l : body) {
        if (l.word(0) == "object") {
          l.arity(3);
          const auto o = a.find_object(l.word(1));
          if (!o) l.fail(1, "unknown object '" + l.word(1) + "'");
          if (d.objects[*o]) l.fail(1, "repeated object '" + l.word(1) + "'");
          d.objects[*o] = find_named(doc.complexes, l.word(2), l, 2, "complex");
        } else if (l.word(0) == "map") {
          map_lines.push_back(&l);
        } else {
          l.fail(0, "unknown diagram line '" + l.word(0) + "'");
        }
      }
      for (Index o = 0; o < a.object_count(); ++o)
        if (!d.objects[o]) throw SemanticError("diagram: missing object: " + a.object(o));
      for (const Line* l : map_lines) {
        if (l->size() < 3) l->fail(l->size(), "missing field");
        l->expect(2, ":");
        const auto f = a.find_morphism(l->word(1));
        if (!f) l->fail(1, "unknown morphism '" + l->word(1) + "'");
        if (known[*f]) l->fail(1, "repeated map '" + l->word(1) + "'");
        const auto& m = a.morphism(*f);
        d.maps[*f] = parse_map_body(*l, 3, d.objects[m.source], d.objects[m.target], l->word(1));
        known[*f] = 1;
      }
      complete_diagram(d, known);
      require_valid(validate_diagram(d), "diagram");
      doc.diagram = std::move(d);
      break;
    }
    case DocumentKind::functor: {
      require_blocks(2, 0, 0);
      std::optional<CategoryPtr> source, target;
      std::vector<const Line*> entries;
      for (const auto& l : body) {
        if (l.word(0) == "source" || l.word(0) == "target") {
          l.arity(2);
          auto& slot = l.word(0) == "source" ? source : target;
          if (slot) l.fail(0, "repeated " + l.word(0));
          slot = find_named(doc.categories, l.word(1), l, 1, "category");
        } else if (l.word(0) == "obj" || l.word(0) == "mor") {
          entries.push_back(&l);
        } else {
          l.fail(0, "unknown functor line '" + l.word(0) + "'");
        }
      }
      if (!source || !target) throw SemanticError("functor: source and target categories are required");
      FunctorData u{*source, *target, std::vector<Index>((*source)->object_count(), 0),
                    std::vector<Index>((*source)->morphism_count(), 0)};
      std::vector<char> obj_seen(u.on_objects.size(), 0), mor_seen(u.on_morphisms.size(), 0);
      for (const Line* l : entries) {
        l->arity(4);
        l->expect(2, "=");
        const bool obj = l->word(0) == "obj";
        const auto from = obj ? u.source->find_object(l->word(1)) : u.source->find_morphism(l->word(1));
        const auto to = obj ? u.target->find_object(l->word(3)) : u.target->find_morphism(l->word(3));
        if (!from) l->fail(1, "unknown id '" + l->word(1) + "'");
        if (!to) l->fail(3, "unknown id '" + l->word(3) + "'");
        auto& seen = obj ? obj_seen : mor_seen;
        if (seen[*from]) l->fail(1, "repeated entry '" + l->word(1) + "'");
        seen[*from] = 1;
        (obj ? u.on_objects : u.on_morphisms)[*from] = *to;
      }
      for (Index a = 0; a < u.on_objects.size(); ++a) {
        if (!obj_seen[a]) throw SemanticError("functor: object not mapped: " + u.source->object(a));
        if (!mor_seen[u.source->identity(a)]) {
          u.on_morphisms[u.source->identity(a)] = u.target->identity(u.on_objects[a]);
          mor_seen[u.source->identity(a)] = 1;
        }
      }
      for (Index f = 0; f < u.on_morphisms.size(); ++f)
        if (!mor_seen[f]) throw SemanticError("functor: morphism not mapped: " + u.source->morphism(f).id);
      require_valid(validate_functor(u), "functor");
      doc.functor = std::move(u);
      break;
    }
    case DocumentKind::lifting_problem:
    case DocumentKind::maps: {
      require_blocks(0, 1, static_cast<std::size_t>(-1));
      for (const auto& l : body) {
        if (l.word(0) != "map") l.fail(0, "unknown line '" + l.word(0) + "'");
        if (l.size() < 5) l.fail(l.size(), "missing field");
        l.expect(4, ":");
        for (const auto& m : doc.maps)
          if (m.first == l.word(1)) l.fail(1, "repeated map '" + l.word(1) + "'");
        const auto s = find_named(doc.complexes, l.word(2), l, 2, "complex");
        const auto t = find_named(doc.complexes, l.word(3), l, 3, "complex");
        doc.maps.push_back({l.word(1), parse_map_body(l, 5, s, t, l.word(1))});
      }
      if (doc.kind == DocumentKind::lifting_problem) {
        if (doc.maps.size() != 4) throw SemanticError("lifting-problem: expected exactly the maps i, p, f, g");
        require_valid(validate_square(doc.square()), "lifting-problem");
      }
      break;
    }
  }
  return doc;
}

std::string serialize(const Document& doc) {
  std::ostringstream out;
  out << "kind " << to_string(doc.kind) << " v1\n";
  if (!doc.name.empty()) out << "name " << doc.name << "\n";
  switch (doc.kind) {
    case DocumentKind::category:
      write_category(out, *doc.category());
      break;
    case DocumentKind::simplicial:
    case DocumentKind::cubical:
      write_complex(out, *doc.complex());
      break;
    case DocumentKind::presheaf: {
      const SetPresheaf& x = *doc.presheaf;
      const auto& c = *x.base;
      write_block(out, doc.categories.front().first, c);
      for (Index a = 0; a < c.object_count(); ++a)
        for (const auto& e : x.elements[a]) out << "elt " << c.object(a) << " " << e << "\n";
      for (Index f = 0; f < c.morphism_count(); ++f) {
        if (c.is_identity(f)) continue;
        const auto& m = c.morphism(f);
        for (Index y = 0; y < x.elements[m.target].size(); ++y)
          out << "act " << m.id << " " << x.elements[m.target][y] << " = " << x.elements[m.source][x.act(f, y)]
              << "\n";
      }
      break;
    }
    case DocumentKind::cover: {
      const Cover& c = *doc.cover;
      write_block(out, doc.complexes.front().first, *c.ambient);
      for (std::size_t k = 0; k < c.names.size(); ++k) {
        out << "sub " << c.names[k] << " :";
        for (const auto& g : c.generators[k]) out << " " << g;
        out << "\n";
      }
      break;
    }
    case DocumentKind::diagram: {
      const Diagram& d = *doc.diagram;
      const auto& a = *d.shape;
      write_block(out, doc.categories.front().first, a);
      for (const auto& [n, x] : doc.complexes) write_block(out, n, *x);
      for (Index o = 0; o < a.object_count(); ++o)
        out << "object " << a.object(o) << " " << name_of(doc.complexes, d.objects[o]) << "\n";
      // Only the maps the composition table cannot recover.
      std::set<Index> composite;
      for (const auto& [key, h] : a.table()) {
        const Index g = static_cast<Index>(key >> 32), f = static_cast<Index>(key & 0xffffffffu);
        if (!a.is_identity(g) && !a.is_identity(f)) composite.insert(h);
      }
      for (Index f = 0; f < a.morphism_count(); ++f) {
        if (a.is_identity(f) || composite.count(f)) continue;
        out << "map " << a.morphism(f).id;
        write_map_body(out, d.maps[f]);
      }
      break;
    }
    case DocumentKind::functor: {
      const FunctorData& u = *doc.functor;
      for (const auto& [n, c] : doc.categories) write_block(out, n, *c);
      auto cat_name = [&](const CategoryPtr& c) {
        for (const auto& [n, v] : doc.categories)
          if (v == c) return n;
        throw std::logic_error("serialize: category without a block");
      };
      out << "source " << cat_name(u.source) << "\ntarget " << cat_name(u.target) << "\n";
      for (Index a = 0; a < u.on_objects.size(); ++a)
        out << "obj " << u.source->object(a) << " = " << u.target->object(u.on_objects[a]) << "\n";
      for (Index f = 0; f < u.on_morphisms.size(); ++f)
        if (!u.source->is_identity(f))
          out << "mor " << u.source->morphism(f).id << " = " << u.target->morphism(u.on_morphisms[f]).id << "\n";
      break;
    }
    case DocumentKind::lifting_problem:
    case DocumentKind::maps:
      for (const auto& [n, x] : doc.complexes) write_block(out, n, *x);
      for (const auto& [n, f] : doc.maps) {
        out << "map " << n << " " << name_of(doc.complexes, f.source) << " " << name_of(doc.complexes, f.target);
        write_map_body(out, f);
      }
      break;
  }
  return out.str();
}

Document category_document(CategoryPtr c, std::string name) {
  Document d;
  d.kind = DocumentKind::category;
  d.name = name;
  d.categories.push_back({std::move(name), std::move(c)});
  return d;
}

Document complex_document(ComplexPtr x, std::string name) {
  Document d;
  d.kind = x->shape() == Shape::simplicial ? DocumentKind::simplicial : DocumentKind::cubical;
  d.name = name;
  d.complexes.push_back({std::move(name), std::move(x)});
  return d;
}

Document presheaf_document(const SetPresheaf& x, std::string category_name, std::string name) {
  Document d;
  d.kind = DocumentKind::presheaf;
  d.name = std::move(name);
  d.categories.push_back({std::move(category_name), x.base});
  d.presheaf = x;
  return d;
}

Document maps_document(const std::vector<std::pair<std::string, ComplexPtr>>& complexes,
                       const std::vector<std::pair<std::string, ComplexMap>>& maps, std::string name,
                       DocumentKind kind) {
  Document d;
  d.kind = kind;
  d.name = std::move(name);
  d.complexes = complexes;
  d.maps = maps;
  return d;
}

}  // namespace shapekit
