#include "shapekit/complex.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>

#include "shapekit/error.hpp"

namespace shapekit {

std::size_t RefVectorHash::operator()(const std::vector<Ref>& v) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull ^ v.size();
  for (const Ref& r : v) {
    h ^= (std::uint64_t{r.cell} << 32 | r.mask) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

namespace mask {

std::uint32_t deposit(std::uint32_t inner, std::uint32_t outer) {
  std::uint32_t out = 0;
  for (int pos = 0; inner != 0 && pos < 32; ++pos) {
    if (outer >> pos & 1u) continue;
    if (inner & 1u) out |= 1u << pos;
    inner >>= 1;
  }
  return out;
}

std::uint32_t extract(std::uint32_t m, std::uint32_t removed) {
  std::uint32_t out = 0;
  int k = 0;
  for (int pos = 0; pos < 32; ++pos) {
    if (removed >> pos & 1u) continue;
    if (m >> pos & 1u) out |= 1u << k;
    ++k;
  }
  return out;
}

}  // namespace mask

namespace {

int op_length(Shape shape, const Op& op) { return shape == Shape::simplicial ? op.src + 1 : op.tgt; }

}  // namespace

bool operator==(const Op& a, const Op& b) {
  if (a.src != b.src || a.tgt != b.tgt) return false;
  // Simplicial ops carry src+1 values, cubical ones tgt; compare the longer
  // prefix, unused slots are always zero.
  const int n = std::max(a.src + 1, a.tgt);
  return std::equal(a.v.begin(), a.v.begin() + n, b.v.begin());
}

namespace ops {

int face_count(Shape shape, int n) {
  if (shape == Shape::simplicial) return n == 0 ? 0 : n + 1;
  return 2 * n;
}

Op identity(Shape shape, int n) {
  Op op;
  op.src = op.tgt = n;
  const int len = shape == Shape::simplicial ? n + 1 : n;
  for (int j = 0; j < len; ++j) op.v[j] = static_cast<std::int8_t>(j);
  return op;
}

Op face(Shape shape, int n, int a) {
  Op op;
  op.src = n - 1;
  op.tgt = n;
  if (shape == Shape::simplicial) {
    for (int j = 0; j <= n - 1; ++j) op.v[j] = static_cast<std::int8_t>(j < a ? j : j + 1);
  } else {
    const int i = a / 2;
    for (int c = 0; c < n; ++c)
      op.v[c] = static_cast<std::int8_t>(c < i ? c : c == i ? (a % 2 ? kConst1 : kConst0) : c - 1);
  }
  return op;
}

Op degeneracy(Shape shape, int n, std::uint32_t m) {
  Op op;
  op.src = n;
  op.tgt = n - std::popcount(m);
  if (shape == Shape::simplicial) {
    for (int j = 0; j <= n; ++j) op.v[j] = static_cast<std::int8_t>(j - std::popcount(m & ((1u << j) - 1u)));
  } else {
    int c = 0;
    for (int j = 0; j < n; ++j)
      if (!(m >> j & 1u)) op.v[c++] = static_cast<std::int8_t>(j);
  }
  return op;
}

Op compose(Shape shape, const Op& g, const Op& f) {
  if (f.tgt != g.src) throw SemanticError("operator composition: arity mismatch");
  Op r;
  r.src = f.src;
  r.tgt = g.tgt;
  if (shape == Shape::simplicial) {
    for (int j = 0; j <= f.src; ++j) r.v[j] = g.v[f.v[j]];
  } else {
    for (int c = 0; c < g.tgt; ++c) r.v[c] = g.v[c] < 0 ? g.v[c] : f.v[g.v[c]];
  }
  return r;
}

bool is_injective(Shape shape, const Op& op) {
  if (shape == Shape::simplicial) {
    for (int j = 0; j < op.src; ++j)
      if (op.v[j] == op.v[j + 1]) return false;
    return true;
  }
  int used = 0;
  for (int c = 0; c < op.tgt; ++c) used += op.v[c] >= 0;
  return used == op.src;
}

std::pair<Op, std::uint32_t> factor(Shape shape, const Op& op) {
  Op mono;
  std::uint32_t epi = 0;
  mono.tgt = op.tgt;
  if (shape == Shape::simplicial) {
    int l = 0;
    mono.v[0] = op.v[0];
    for (int j = 0; j < op.src; ++j) {
      if (op.v[j] == op.v[j + 1]) {
        epi |= 1u << j;
      } else {
        mono.v[++l] = op.v[j + 1];
      }
    }
    mono.src = l;
  } else {
    std::uint32_t used = 0;
    for (int c = 0; c < op.tgt; ++c)
      if (op.v[c] >= 0) used |= 1u << op.v[c];
    epi = ~used & ((1u << op.src) - 1u);
    for (int c = 0; c < op.tgt; ++c)
      mono.v[c] = op.v[c] < 0 ? op.v[c] : static_cast<std::int8_t>(std::popcount(used & ((1u << op.v[c]) - 1u)));
    mono.src = std::popcount(used);
  }
  return {mono, epi};
}

std::string to_string(Shape shape, const Op& op) {
  std::string s;
  const int len = op_length(shape, op);
  for (int j = 0; j < len; ++j) {
    const int x = op.v[j];
    if (shape == Shape::simplicial) {
      s += x < 10 ? static_cast<char>('0' + x) : static_cast<char>('A' + x - 10);
    } else {
      s += x == kConst0 ? '0' : x == kConst1 ? '1' : static_cast<char>('a' + x);
    }
  }
  return s;
}

}  // namespace ops

std::size_t Complex::count(int n) const {
  if (n < 0 || n > dim()) return 0;
  return first_[n + 1] - first_[n];
}

Index Complex::first(int n) const {
  if (n < 0) return 0;
  if (n > dim()) return static_cast<Index>(cells_.size());
  return first_[n];
}

std::vector<Index> Complex::cells_of_dim(int n) const {
  std::vector<Index> out(count(n));
  std::iota(out.begin(), out.end(), first(n));
  return out;
}

std::vector<std::size_t> Complex::counts() const {
  std::vector<std::size_t> out;
  for (int n = 0; n <= dim(); ++n) out.push_back(count(n));
  return out;
}

std::optional<Index> Complex::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Ref Complex::face(Ref r, int a) const {
  if (r.mask == 0) return cells_[r.cell].faces[a];
  return apply(r, ops::face(shape_, ref_dim(r), a));
}

Ref Complex::apply_mono(Index cell, const Op& mono) const {
  if (mono.src == mono.tgt) return {cell, 0};
  Op rest;
  int a = 0;
  if (shape_ == Shape::simplicial) {
    // Peel the largest missing vertex: mono = d^j o rest.
    std::uint32_t image = 0;
    for (int t = 0; t <= mono.src; ++t) image |= 1u << mono.v[t];
    int j = mono.tgt;
    while (image >> j & 1u) --j;
    a = j;
    rest.src = mono.src;
    rest.tgt = mono.tgt - 1;
    for (int t = 0; t <= mono.src; ++t) rest.v[t] = static_cast<std::int8_t>(mono.v[t] < j ? mono.v[t] : mono.v[t] - 1);
  } else {
    // Peel the last constant coordinate.
    int p = mono.tgt - 1;
    while (mono.v[p] >= 0) --p;
    a = 2 * p + (mono.v[p] == ops::kConst1 ? 1 : 0);
    rest.src = mono.src;
    rest.tgt = mono.tgt - 1;
    for (int c = 0, k = 0; c < mono.tgt; ++c)
      if (c != p) rest.v[k++] = mono.v[c];
  }
  return apply(cells_[cell].faces[a], rest);
}

Ref Complex::apply(Ref r, const Op& op) const {
  const int n = ref_dim(r);
  if (op.tgt != n) throw SemanticError("apply: dimension mismatch at " + cells_[r.cell].id);
  const Op phi = r.mask ? ops::compose(shape_, ops::degeneracy(shape_, n, r.mask), op) : op;
  const auto [mono, epi] = ops::factor(shape_, phi);
  const Ref y = apply_mono(r.cell, mono);
  return {y.cell, mask::compose_epi(epi, y.mask)};
}

std::vector<Ref> Complex::refs_of_dim(int n) const {
  std::vector<Ref> out;
  for (Index c = 0; c < cells_.size(); ++c) {
    const int k = cells_[c].dim;
    if (k > n) break;
    const int extra = n - k;
    // All n-bit masks with `extra` bits, increasing.
    for (std::uint32_t m = 0; m < (1u << n); ++m)
      if (std::popcount(m) == extra) out.push_back({c, m});
  }
  return out;
}

std::string Complex::ref_string(Ref r) const {
  std::string s;
  for (int j = 31; j >= 0; --j)
    if (r.mask >> j & 1u) s += "s" + std::to_string(shape_ == Shape::simplicial ? j : j + 1);
  if (!s.empty()) s += ".";
  return s + cells_[r.cell].id;
}

namespace {

/// Parses "[s<j>...].id"; `lookup` resolves an id.
template <typename Lookup>
std::optional<std::pair<Index, std::uint32_t>> parse_word(std::string_view text, Shape shape, Lookup lookup) {
  if (auto c = lookup(text)) return std::make_pair(*c, 0u);
  std::uint32_t m = 0;
  std::size_t pos = 0;
  int last = 1 << 20;
  while (pos < text.size() && text[pos] == 's') {
    std::size_t q = pos + 1;
    int j = 0;
    if (q >= text.size() || !std::isdigit(static_cast<unsigned char>(text[q]))) return std::nullopt;
    while (q < text.size() && std::isdigit(static_cast<unsigned char>(text[q]))) j = j * 10 + (text[q++] - '0');
    if (shape == Shape::cubical) --j;
    if (j < 0 || j >= 31 || j >= last) return std::nullopt;  // strictly decreasing
    last = j;
    m |= 1u << j;
    pos = q;
  }
  if (pos == 0 || pos >= text.size() || text[pos] != '.') return std::nullopt;
  auto c = lookup(text.substr(pos + 1));
  if (!c) return std::nullopt;
  return std::make_pair(*c, m);
}

}  // namespace

std::optional<Ref> Complex::parse_ref(std::string_view text) const {
  auto r = parse_word(text, shape_, [this](std::string_view id) { return find(id); });
  if (!r) return std::nullopt;
  return Ref{r->first, r->second};
}

Index ComplexBuilder::add_cell(std::string id, int dim, std::vector<Ref> faces) {
  cells_.push_back({std::move(id), dim, std::move(faces)});
  return static_cast<Index>(cells_.size() - 1);
}

void ComplexBuilder::set_faces(Index cell, std::vector<Ref> faces) { cells_[cell].faces = std::move(faces); }

Complex ComplexBuilder::build(std::optional<int> truncation, std::vector<Index>* renumber) {
  std::vector<Index> order(cells_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (cells_[a].dim != cells_[b].dim) return cells_[a].dim < cells_[b].dim;
    return cells_[a].id < cells_[b].id;
  });
  std::vector<Index> fresh(cells_.size());
  for (Index k = 0; k < order.size(); ++k) fresh[order[k]] = k;
  Complex x(shape_);
  x.truncation_ = truncation;
  x.cells_.reserve(cells_.size());
  for (Index k : order) {
    auto cell = std::move(cells_[k]);
    for (auto& r : cell.faces) r.cell = fresh[r.cell];
    x.cells_.push_back(std::move(cell));
  }
  const int top = x.cells_.empty() ? -1 : x.cells_.back().dim;
  x.first_.assign(top + 2, 0);
  for (int n = 0; n <= top + 1; ++n)
    x.first_[n] = static_cast<Index>(
        std::lower_bound(x.cells_.begin(), x.cells_.end(), n, [](const Complex::Cell& c, int d) { return c.dim < d; }) -
        x.cells_.begin());
  x.index_.reserve(x.cells_.size());
  for (Index c = 0; c < x.cells_.size(); ++c) x.index_.emplace(x.cells_[c].id, c);
  cells_.clear();
  if (renumber) *renumber = std::move(fresh);
  return x;
}

namespace {

const char* identity_law(Shape shape) { return shape == Shape::simplicial ? "simplicial identity" : "cubical identity"; }

void check_structure(const Complex& x, ValidationReport& report) {
  for (Index c = 0; c < x.size(); ++c) {
    const auto& cell = x.cell(c);
    if (cell.dim < 0 || cell.dim > kMaxDim) {
      report.malformed("dimension out of range", cell.id);
      continue;
    }
    if (x.truncation() && cell.dim > *x.truncation()) report.malformed("cell above truncation", cell.id);
    if (static_cast<int>(cell.faces.size()) != x.face_count(cell.dim)) {
      report.malformed("face count", cell.id);
      continue;
    }
    for (const Ref& r : cell.faces) {
      if (r.cell >= x.size()) {
        report.malformed("dangling cell id", cell.id);
      } else if (x.ref_dim(r) != cell.dim - 1) {
        report.malformed("face dimension", cell.id + " -> " + x.ref_string(r));
      } else if (r.mask >> (cell.dim - 1) != 0) {
        report.malformed("degeneracy index out of range", cell.id + " -> " + x.ref_string(r));
      }
    }
  }
}

}  // namespace

ValidationReport validate_complex(const Complex& x) {
  ValidationReport report;
  std::unordered_map<std::string, int> seen;
  for (const auto& cell : x.cells())
    if (seen[cell.id]++ == 1) report.malformed("duplicate cell id", cell.id);
  check_structure(x, report);
  if (!report.ok()) return report;
  const Shape shape = x.shape();
  for (Index c = 0; c < x.size(); ++c) {
    const auto& cell = x.cell(c);
    const int n = cell.dim;
    if (n < 2) continue;
    std::vector<std::pair<Op, Ref>> seen_ops;
    bool broken = false;
    for (int a = 0; a < x.face_count(n) && !broken; ++a) {
      const Op fa = ops::face(shape, n, a);
      for (int b = 0; b < x.face_count(n - 1) && !broken; ++b) {
        const Op fb = ops::face(shape, n - 1, b);
        const Op both = ops::compose(shape, fa, fb);
        const Ref value = x.apply(cell.faces[a], fb);
        for (const auto& [op, r] : seen_ops) {
          if (op == both && r != value) {
            report.law(identity_law(shape), cell.id + " face " + std::to_string(a) + "," + std::to_string(b));
            broken = true;
            break;
          }
        }
        seen_ops.emplace_back(both, value);
      }
    }
  }
  return report;
}

namespace {

struct DraftResolution {
  ComplexBuilder builder;
  bool ok = true;
};

DraftResolution resolve(const ComplexDraft& d, ValidationReport& report) {
  DraftResolution r{ComplexBuilder(d.shape)};
  std::unordered_map<std::string, Index> ids;
  for (const auto& c : d.cells) {
    if (c.id.empty()) {
      report.malformed("empty cell id", "");
      continue;
    }
    if (!ids.emplace(c.id, r.builder.add_cell(c.id, c.dim)).second) report.malformed("duplicate cell id", c.id);
  }
  auto lookup = [&](std::string_view id) -> std::optional<Index> {
    auto it = ids.find(std::string(id));
    if (it == ids.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& c : d.cells) {
    auto self = ids.find(c.id);
    if (self == ids.end() || r.builder.id_of(self->second) != c.id) continue;
    std::vector<Ref> faces;
    for (const auto& w : c.faces) {
      auto p = parse_word(w, d.shape, lookup);
      if (!p) {
        report.malformed("dangling cell id", c.id + " -> " + w);
        continue;
      }
      faces.push_back({p->first, p->second});
    }
    r.builder.set_faces(self->second, std::move(faces));
  }
  return r;
}

}  // namespace

ValidationReport validate_complex(const ComplexDraft& draft) {
  ValidationReport report;
  auto r = resolve(draft, report);
  if (report.has_malformed()) return report;
  return validate_complex(r.builder.build(draft.truncation));
}

Complex build_complex(const ComplexDraft& draft) {
  ValidationReport report;
  auto r = resolve(draft, report);
  require_valid(report, "complex");
  auto x = r.builder.build(draft.truncation);
  require_valid(validate_complex(x), "complex");
  return x;
}

ValidationReport validate_map(const ComplexMap& f) {
  ValidationReport report;
  const auto& x = *f.source;
  const auto& y = *f.target;
  if (x.shape() != y.shape()) {
    report.malformed("shape mismatch", "");
    return report;
  }
  if (f.images.size() != x.size()) {
    report.malformed("map not total", std::to_string(f.images.size()) + " of " + std::to_string(x.size()));
    return report;
  }
  for (Index c = 0; c < x.size(); ++c) {
    const Ref r = f.images[c];
    if (r.cell >= y.size()) {
      report.malformed("dangling cell id", x.cell(c).id);
    } else if (y.ref_dim(r) != x.cell(c).dim || (x.cell(c).dim < 32 && r.mask >> x.cell(c).dim)) {
      report.malformed("image dimension", x.cell(c).id + " -> " + y.ref_string(r));
    }
  }
  if (!report.ok()) return report;
  for (Index c = 0; c < x.size(); ++c) {
    const auto& cell = x.cell(c);
    for (int a = 0; a < static_cast<int>(cell.faces.size()); ++a) {
      if (f(cell.faces[a]) != y.face(f.images[c], a)) {
        report.law("map commutes with faces", cell.id + " face " + std::to_string(a));
        break;
      }
    }
  }
  return report;
}

ComplexMap identity_map(ComplexPtr x) {
  ComplexMap f{x, x, std::vector<Ref>(x->size())};
  for (Index c = 0; c < x->size(); ++c) f.images[c] = {c, 0};
  return f;
}

ComplexMap compose(const ComplexMap& g, const ComplexMap& f) {
  ComplexMap h{f.source, g.target, std::vector<Ref>(f.images.size())};
  for (Index c = 0; c < f.images.size(); ++c) h.images[c] = g(f.images[c]);
  return h;
}

bool is_injective(const ComplexMap& f) {
  std::vector<char> hit(f.target->size(), 0);
  for (const Ref& r : f.images) {
    if (r.mask != 0 || hit[r.cell]) return false;
    hit[r.cell] = 1;
  }
  return true;
}

ComplexMap inclusion(ComplexPtr sub, ComplexPtr ambient) {
  ComplexMap f{sub, ambient, std::vector<Ref>(sub->size())};
  for (Index c = 0; c < sub->size(); ++c) {
    auto a = ambient->find(sub->cell(c).id);
    if (!a) throw SemanticError("inclusion: cell " + sub->cell(c).id + " is not in the ambient complex");
    f.images[c] = {*a, 0};
  }
  return f;
}

std::vector<char> face_closure(const Complex& x, const std::vector<Index>& generators) {
  std::vector<char> in(x.size(), 0);
  std::vector<Index> stack(generators.begin(), generators.end());
  while (!stack.empty()) {
    const Index c = stack.back();
    stack.pop_back();
    if (in[c]) continue;
    in[c] = 1;
    for (const Ref& r : x.cell(c).faces) stack.push_back(r.cell);
  }
  return in;
}

Complex subcomplex(const Complex& x, const std::vector<Index>& generators) {
  const auto in = face_closure(x, generators);
  ComplexBuilder b(x.shape());
  std::vector<Index> local(x.size(), 0);
  for (Index c = 0; c < x.size(); ++c)
    if (in[c]) {
      std::vector<Ref> faces = x.cell(c).faces;
      for (auto& r : faces) r.cell = local[r.cell];
      local[c] = b.add_cell(x.cell(c).id, x.cell(c).dim, std::move(faces));
    }
  return b.build(x.truncation());
}

void FaceIndex::prepare(int n) {
  if (ready_[n]) return;
  ready_[n] = 1;
  if (n == 0) {
    for (Index c = 0; c < target_->first(1); ++c) vertices_.push_back({c, 0});
    return;
  }
  const int fc = target_->face_count(n);
  std::vector<Ref> faces(fc);
  for (const Ref& r : target_->refs_of_dim(n)) {
    for (int a = 0; a < fc; ++a) faces[a] = target_->face(r, a);
    by_faces_[n][faces].push_back(r);
  }
}

const std::vector<Ref>& FaceIndex::candidates(int n, const std::vector<Ref>& faces) {
  prepare(n);
  if (n == 0) return vertices_;
  auto it = by_faces_[n].find(faces);
  return it == by_faces_[n].end() ? none_ : it->second;
}

std::size_t search_maps(const MapSearch& p, const std::function<bool(const std::vector<Ref>&)>& visit) {
  const Complex& x = *p.source;
  const Complex& y = *p.target;
  if (x.shape() != y.shape()) throw SemanticError("map search: shape mismatch");
  const std::size_t n = x.size();
  std::vector<Ref> images(n);
  FaceIndex index(y, std::max(x.dim(), 0));
  std::size_t nodes = 0;
  std::vector<std::vector<Ref>> scratch(x.dim() + 2);
  for (int d = 0; d <= x.dim(); ++d) scratch[d].resize(x.face_count(d));

  auto image_of = [&](Ref r) {
    const Ref t = images[r.cell];
    return Ref{t.cell, mask::compose_epi(r.mask, t.mask)};
  };

  // Assign each cell right after its faces, starting with the prescribed
  // cells, so that incompatible choices are cut off early.
  std::vector<Index> order;
  order.reserve(n);
  std::vector<char> placed(n, 0);
  std::function<void(Index)> emit = [&](Index c) {
    if (placed[c]) return;
    placed[c] = 1;
    for (const Ref& f : x.cell(c).faces) emit(f.cell);
    order.push_back(c);
  };
  if (!p.fixed.empty())
    for (Index c = 0; c < n; ++c)
      if (p.fixed[c]) emit(c);
  for (Index c = static_cast<Index>(n); c-- > 0;) emit(c);

  std::function<bool(std::size_t)> rec = [&](std::size_t pos) -> bool {
    if (pos == n) return visit(images);
    const Index k = order[pos];
    const auto& cell = x.cell(k);
    auto& faces = scratch[cell.dim];
    for (std::size_t a = 0; a < cell.faces.size(); ++a) faces[a] = image_of(cell.faces[a]);
    const auto& cands = index.candidates(cell.dim, faces);
    if (!p.fixed.empty() && p.fixed[k]) {
      const Ref want = *p.fixed[k];
      if (!std::binary_search(cands.begin(), cands.end(), want)) return true;
      if (p.accept && !p.accept(k, want)) return true;
      if (++nodes > p.budget) throw BudgetExceeded("map search", p.budget);
      images[k] = want;
      return rec(pos + 1);
    }
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const Ref r = cands[i];
      if (p.accept && !p.accept(k, r)) continue;
      if (++nodes > p.budget) throw BudgetExceeded("map search", p.budget);
      images[k] = r;
      if (!rec(pos + 1)) return false;
    }
    return true;
  };
  rec(0);
  return nodes;
}

}  // namespace shapekit

namespace shapekit {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  // The smaller index stays the root, so roots are least members.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
};

}  // namespace

Colimit colimit(const ComplexDiagram& d, std::size_t budget) {
  const std::size_t k = d.objects.size();
  if (d.names.size() != k) throw SemanticError("colimit: one name per object required");
  if (k == 0) return {std::make_shared<const Complex>(Shape::simplicial), {}};
  const Shape shape = d.objects.front()->shape();
  int top = -1;
  std::optional<int> trunc;
  for (const auto& x : d.objects) {
    if (x->shape() != shape) throw SemanticError("colimit: shape mismatch");
    top = std::max(top, x->dim());
    if (x->truncation()) trunc = trunc ? std::min(*trunc, *x->truncation()) : *x->truncation();
  }
  if (trunc) top = std::min(top, *trunc);
  // Every reference of every object up to `top`, numbered per (object, dim).
  std::vector<std::vector<std::vector<Ref>>> refs(k, std::vector<std::vector<Ref>>(top + 1));
  std::vector<std::vector<std::size_t>> offset(k, std::vector<std::size_t>(top + 1));
  std::size_t total = 0;
  for (std::size_t a = 0; a < k; ++a)
    for (int n = 0; n <= top; ++n) {
      refs[a][n] = d.objects[a]->refs_of_dim(n);
      offset[a][n] = total;
      total += refs[a][n].size();
      if (total > budget) throw BudgetExceeded("colimit references", budget);
    }
  auto slot = [&](std::size_t a, Ref r) {
    const int n = d.objects[a]->ref_dim(r);
    const auto& v = refs[a][n];
    return offset[a][n] + static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), r) - v.begin());
  };
  UnionFind uf(total);
  for (const auto& arrow : d.arrows) {
    if (arrow.from >= k || arrow.to >= k) throw SemanticError("colimit: arrow endpoint out of range");
    for (int n = 0; n <= top; ++n)
      for (const Ref& r : refs[arrow.from][n]) uf.unite(slot(arrow.from, r), slot(arrow.to, arrow.map(r)));
  }
  // Owner (object, ref) of every slot, and which classes contain a degenerate member.
  std::vector<std::pair<std::size_t, Ref>> owner(total);
  for (std::size_t a = 0; a < k; ++a)
    for (int n = 0; n <= top; ++n)
      for (std::size_t t = 0; t < refs[a][n].size(); ++t) owner[offset[a][n] + t] = {a, refs[a][n][t]};
  std::vector<char> degenerate(total, 0);
  std::vector<std::size_t> witness(total, total);  // a degenerate member of each degenerate class
  std::vector<std::size_t> least_nd(total, total);  // least nondegenerate member
  for (std::size_t s = 0; s < total; ++s) {
    const std::size_t root = uf.find(s);
    if (owner[s].second.mask != 0) {
      degenerate[root] = 1;
      if (witness[root] == total) witness[root] = s;
    } else if (least_nd[root] == total) {
      least_nd[root] = s;
    }
  }
  // Nondegenerate classes become cells.
  ComplexBuilder b(shape);
  std::vector<Index> cell_of(total, 0);
  std::vector<std::size_t> classes;
  for (std::size_t s = 0; s < total; ++s) {
    if (uf.find(s) != s || degenerate[s]) continue;
    const auto [a, r] = owner[least_nd[s]];
    cell_of[s] = b.add_cell(d.names[a] + ":" + d.objects[a]->cell(r.cell).id, d.objects[a]->cell(r.cell).dim);
    classes.push_back(s);
  }
  // Normal form of a class: through a degenerate member when there is one.
  std::vector<std::optional<Ref>> memo(total);
  std::function<Ref(std::size_t)> normal = [&](std::size_t s) -> Ref {
    const std::size_t root = uf.find(s);
    if (memo[root]) return *memo[root];
    Ref out;
    if (!degenerate[root]) {
      out = {cell_of[root], 0};
    } else {
      const auto [a, r] = owner[witness[root]];
      const Ref base = normal(slot(a, Ref{r.cell, 0}));
      out = {base.cell, mask::compose_epi(r.mask, base.mask)};
    }
    memo[root] = out;
    return out;
  };
  for (std::size_t s : classes) {
    const auto [a, r] = owner[least_nd[s]];
    const auto& x = *d.objects[a];
    std::vector<Ref> faces;
    for (const Ref& f : x.cell(r.cell).faces) faces.push_back(normal(slot(a, f)));
    b.set_faces(cell_of[s], std::move(faces));
  }
  std::vector<Index> renumber;
  auto z = std::make_shared<const Complex>(b.build(trunc, &renumber));
  Colimit out{z, {}};
  for (std::size_t a = 0; a < k; ++a) {
    ComplexMap leg{d.objects[a], z, std::vector<Ref>(d.objects[a]->size())};
    for (Index c = 0; c < d.objects[a]->size(); ++c) {
      if (d.objects[a]->cell(c).dim > top) continue;
      Ref r = normal(slot(a, Ref{c, 0}));
      r.cell = renumber[r.cell];
      leg.images[c] = r;
    }
    out.legs.push_back(std::move(leg));
  }
  return out;
}

}  // namespace shapekit
