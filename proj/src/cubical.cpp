#include "shapekit/cubical.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <stdexcept>

#include "shapekit/error.hpp"
#include "shapekit/nerve.hpp"
#include "shapekit/presheaf.hpp"

namespace shapekit {

namespace {

void check_index(int n, int i, const char* what) {
  if (i < 1 || i > n) throw SemanticError(std::string(what) + ": coordinate " + std::to_string(i) + " out of range");
}

std::string word_id(const std::string& w) { return w.empty() ? "()" : w; }

}  // namespace

CubeMorphism cube_face(int n, int i, int xi) {
  check_index(n, i, "cube_face");
  if (xi != 0 && xi != 1) throw SemanticError("cube_face: xi must be 0 or 1");
  return ops::face(Shape::cubical, n, 2 * (i - 1) + xi);
}

CubeMorphism cube_degeneracy(int n, int i) {
  check_index(n, i, "cube_degeneracy");
  return ops::degeneracy(Shape::cubical, n, 1u << (i - 1));
}

CubeMorphism cube_identity(int n) { return ops::identity(Shape::cubical, n); }

CubeMorphism cube_compose(const CubeMorphism& g, const CubeMorphism& f) { return ops::compose(Shape::cubical, g, f); }

bool is_normal_form(const CubeMorphism& f) {
  if (f.src < 0 || f.tgt < 0 || f.src > kMaxDim || f.tgt > kMaxDim) return false;
  int last = -1;
  for (int c = 0; c < f.tgt; ++c) {
    const int x = f.v[c];
    if (x == ops::kConst0 || x == ops::kConst1) continue;
    if (x <= last || x >= f.src) return false;
    last = x;
  }
  for (int c = f.tgt; c < static_cast<int>(f.v.size()); ++c)
    if (f.v[c] != 0) return false;
  return true;
}

std::uint32_t cube_evaluate(const CubeMorphism& f, std::uint32_t point) {
  std::uint32_t out = 0;
  for (int c = 0; c < f.tgt; ++c) {
    const int x = f.v[c];
    const bool bit = x == ops::kConst1 || (x >= 0 && (point >> x & 1u));
    if (bit) out |= 1u << c;
  }
  return out;
}

Complex cube_generators(int n, CubeKind kind, int i, int xi) {
  if (n < 0 || n > 8) throw SemanticError("cube_generators: dimension out of range");
  if (kind == CubeKind::horn && (n < 1 || i < 1 || i > n || (xi != 0 && xi != 1)))
    throw SemanticError("cube_generators: invalid horn (" + std::to_string(n) + "," + std::to_string(i) + "," +
                        std::to_string(xi) + ")");
  const std::string top(n, '*');
  std::string missing = top;
  if (kind == CubeKind::horn) missing[i - 1] = static_cast<char>('0' + xi);
  // All words, fewest stars first so that faces precede their cells.
  std::vector<std::string> words{""};
  for (int c = 0; c < n; ++c) {
    std::vector<std::string> next;
    for (const auto& w : words)
      for (char ch : {'0', '1', '*'}) next.push_back(w + ch);
    words = std::move(next);
  }
  auto stars = [](const std::string& w) { return static_cast<int>(std::count(w.begin(), w.end(), '*')); };
  std::stable_sort(words.begin(), words.end(), [&](const auto& a, const auto& b) { return stars(a) < stars(b); });
  ComplexBuilder b(Shape::cubical);
  std::map<std::string, Index> local;
  for (const auto& w : words) {
    if (kind != CubeKind::cube && w == top) continue;
    if (kind == CubeKind::horn && w == missing) continue;
    std::vector<Ref> faces;
    for (std::size_t p = 0; p < w.size(); ++p) {
      if (w[p] != '*') continue;
      for (char ch : {'0', '1'}) {
        std::string f = w;
        f[p] = ch;
        faces.push_back({local.at(f), 0});
      }
    }
    local[w] = b.add_cell(word_id(w), stars(w), std::move(faces));
  }
  return b.build();
}

Complex tensor(ComplexPtr xp, ComplexPtr yp, int dmax, std::size_t budget) {
  const Complex& x = *xp;
  const Complex& y = *yp;
  if (x.shape() != Shape::cubical || y.shape() != Shape::cubical) throw SemanticError("tensor: cubical input required");
  if (x.empty() || y.empty()) return Complex(Shape::cubical);
  ComplexBuilder b(Shape::cubical);
  std::map<std::pair<Index, Index>, Index> local;
  const int top = std::min(dmax, x.dim() + y.dim());
  bool cut = false;
  // Cells are created by increasing total dimension.
  for (int n = 0; n <= top; ++n) {
    for (Index cx = 0; cx < x.size(); ++cx) {
      const int p = x.cell(cx).dim;
      const int q = n - p;
      if (q < 0 || q > y.dim()) continue;
      for (Index cy : y.cells_of_dim(q)) {
        std::vector<Ref> faces;
        for (const Ref& f : x.cell(cx).faces) faces.push_back({local.at({f.cell, cy}), f.mask});
        for (const Ref& f : y.cell(cy).faces) faces.push_back({local.at({cx, f.cell}), f.mask << p});
        local[{cx, cy}] = b.add_cell(x.cell(cx).id + "|" + y.cell(cy).id, n, std::move(faces));
        if (local.size() > budget) throw BudgetExceeded("tensor cells", budget);
      }
    }
  }
  if (top < x.dim() + y.dim()) cut = true;
  std::optional<int> trunc;
  if (cut || x.truncation() || y.truncation()) {
    trunc = top;
    if (x.truncation()) trunc = std::min(*trunc, *x.truncation() + std::max(y.dim(), 0));
    if (y.truncation()) trunc = std::min(*trunc, *y.truncation() + std::max(x.dim(), 0));
  }
  return b.build(trunc);
}

std::string concatenated_word(const std::string& tensor_id) {
  const auto bar = tensor_id.rfind('|');
  if (bar == std::string::npos) return {};
  auto part = [](std::string s) { return s == "()" ? std::string{} : s; };
  std::string w = part(tensor_id.substr(0, bar)) + part(tensor_id.substr(bar + 1));
  for (char ch : w)
    if (ch != '0' && ch != '1' && ch != '*') return {};
  return word_id(w);
}

PushoutProductVerdict verify_pushout_product(int m, int n, PushoutCase which, int i, int xi, std::size_t budget) {
  if (m < 0 || n < 0 || m + n > 8) throw SemanticError("verify_pushout_product: dimensions out of range");
  auto share = [](Complex c) { return std::make_shared<const Complex>(std::move(c)); };
  const auto b = share(cube(m));
  const auto d = share(cube(n));
  const auto a = share(which == PushoutCase::horn_left ? cube_horn(m, i, xi) : cube_boundary(m));
  const auto c = share(which == PushoutCase::horn_right ? cube_horn(n, i, xi) : cube_boundary(n));
  const int top = m + n;
  const auto ac = share(tensor(a, c, top, budget));
  const auto ad = share(tensor(a, d, top, budget));
  const auto bc = share(tensor(b, c, top, budget));
  ComplexDiagram diagram;
  diagram.names = {"AC", "AD", "BC"};
  diagram.objects = {ac, ad, bc};
  diagram.arrows.push_back({0, 1, inclusion(ac, ad)});
  diagram.arrows.push_back({0, 2, inclusion(ac, bc)});
  Colimit po = colimit(diagram, budget);

  PushoutProductVerdict out;
  out.pushout = po.complex;
  out.target = share(which == PushoutCase::boundary    ? cube_boundary(top)
                     : which == PushoutCase::horn_left ? cube_horn(top, i, xi)
                                                       : cube_horn(top, i + m, xi));
  const auto full = share(cube(top));
  const Complex& p = *po.complex;
  out.comparison = {po.complex, full, std::vector<Ref>(p.size())};
  for (Index k = 0; k < p.size(); ++k) {
    const std::string& id = p.cell(k).id;
    const std::string word = concatenated_word(id.substr(id.find(':') + 1));
    const auto cell = full->find(word);
    if (!cell) throw std::logic_error("verify_pushout_product: no cube cell for " + id);
    out.comparison.images[k] = {*cell, 0};
  }
  out.counts = p.counts();
  if (!validate_map(out.comparison).ok()) {
    out.witness = "comparison is not a cubical map";
    return out;
  }
  if (!is_injective(out.comparison)) {
    out.witness = "comparison is not injective";
    return out;
  }
  std::set<std::string> image;
  for (const Ref& r : out.comparison.images) image.insert(full->cell(r.cell).id);
  const Complex& t = *out.target;
  for (int k = 0; k <= top; ++k) {
    for (Index cell : t.cells_of_dim(k))
      if (!image.count(t.cell(cell).id)) {
        out.witness = "degree " + std::to_string(k) + ": missing " + t.cell(cell).id;
        return out;
      }
    if (p.count(k) != t.count(k)) {
      out.witness = "degree " + std::to_string(k) + ": " + std::to_string(p.count(k)) + " cells, expected " +
                    std::to_string(t.count(k));
      return out;
    }
  }
  out.isomorphism = true;
  return out;
}

Complex triangulate(const Complex& x, int dmax, std::size_t budget) {
  if (x.shape() != Shape::cubical) throw SemanticError("triangulate: cubical input required");
  int level = std::max(x.dim(), 0);
  if (x.truncation()) level = std::min(level, *x.truncation());
  auto base = std::make_shared<const FiniteCategory>(cube_category(level));
  return nerve(elements(presheaf_of(x, base)), dmax, budget);
}

ComplexMap triangulate_map(const ComplexMap& f, int dmax, std::size_t budget) {
  const Complex& x = *f.source;
  const Complex& y = *f.target;
  if (x.shape() != Shape::cubical || y.shape() != Shape::cubical)
    throw SemanticError("triangulate: cubical input required");
  int level = std::max(y.dim(), 0);
  if (y.truncation()) level = std::min(level, *y.truncation());
  auto base = std::make_shared<const FiniteCategory>(cube_category(level));
  const SetPresheaf px = presheaf_of(x, base);
  const SetPresheaf py = presheaf_of(y, base);
  PresheafMorphism phi;
  for (Index a = 0; a < base->object_count(); ++a) {
    phi.components.emplace_back();
    for (const auto& e : px.elements[a]) {
      const Ref image = f(*x.parse_ref(e));
      phi.components.back().push_back(*py.find_element(a, y.ref_string(image)));
    }
  }
  auto ex = std::make_shared<const FiniteCategory>(elements(px));
  auto ey = std::make_shared<const FiniteCategory>(elements(py));
  const FunctorData u = elements_functor(px, py, phi, ex, ey);
  auto nx = std::make_shared<const Complex>(nerve(*ex, dmax, budget));
  auto ny = std::make_shared<const Complex>(nerve(*ey, dmax, budget));
  return nerve_map(u, nx, ny);
}

}  // namespace shapekit
