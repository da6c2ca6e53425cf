#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shapekit/category.hpp"
#include "shapekit/validation.hpp"

namespace shapekit {

enum class Shape : std::uint8_t { simplicial, cubical };

constexpr int kMaxDim = 30;

/// A cell reference in Eilenberg-Zilber form: a degeneracy applied to a stored
/// (nondegenerate) cell. Bit j of `mask`:
///   simplicial: vertices j and j+1 are collapsed (the word contains s_j);
///   cubical:    coordinate j+1 is dropped (the word contains s_{j+1}).
/// The dimension of the reference is dim(cell) + popcount(mask).
struct Ref {
  Index cell = 0;
  std::uint32_t mask = 0;

  bool degenerate() const { return mask != 0; }
  friend bool operator==(const Ref&, const Ref&) = default;
  friend auto operator<=>(const Ref&, const Ref&) = default;
};

struct RefHash {
  std::size_t operator()(const Ref& r) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{r.cell} << 32) | r.mask);
  }
};

struct RefVectorHash {
  std::size_t operator()(const std::vector<Ref>& v) const noexcept;
};

/// Mask algebra shared by both shapes.
namespace mask {
/// Scatter the bits of `inner` into the positions not set in `outer`.
std::uint32_t deposit(std::uint32_t inner, std::uint32_t outer);
/// Remove the positions set in `removed`, closing the gaps.
std::uint32_t extract(std::uint32_t m, std::uint32_t removed);
/// Mask of (tau o eps) for epis given by masks: eps first, then tau.
inline std::uint32_t compose_epi(std::uint32_t eps, std::uint32_t tau) { return eps | deposit(tau, eps); }
}  // namespace mask

/// A morphism [src] -> [tgt] of the simplex category (a monotone map, v[j] for
/// j <= src) or of the cube category (per output coordinate: -1 constant 0,
/// -2 constant 1, k >= 0 input coordinate k; used inputs strictly increasing).
struct Op {
  int src = 0;
  int tgt = 0;
  std::array<std::int8_t, kMaxDim + 2> v{};

  friend bool operator==(const Op& a, const Op& b);
};

namespace ops {
constexpr std::int8_t kConst0 = -1;
constexpr std::int8_t kConst1 = -2;

int face_count(Shape shape, int n);
Op identity(Shape shape, int n);
/// The a-th face map into dimension n (simplicial: d_a; cubical: a = 2(i-1)+xi).
Op face(Shape shape, int n, int a);
/// The epi [n] -> [n - popcount(m)] with the given degeneracy mask.
Op degeneracy(Shape shape, int n, std::uint32_t m);
/// g o f.
Op compose(Shape shape, const Op& g, const Op& f);
bool is_injective(Shape shape, const Op& op);
/// op = mono o epi; returns the mono and the epi's mask.
std::pair<Op, std::uint32_t> factor(Shape shape, const Op& op);
std::string to_string(Shape shape, const Op& op);
}  // namespace ops

/// A finite simplicial or cubical set stored in Eilenberg-Zilber normal form.
/// Cells are ordered by (dimension, id).
class Complex {
 public:
  struct Cell {
    std::string id;
    int dim = 0;
    std::vector<Ref> faces;
  };

  Complex() = default;
  explicit Complex(Shape shape) : shape_(shape) {}

  Shape shape() const { return shape_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }
  const Cell& cell(Index c) const { return cells_[c]; }
  const std::vector<Cell>& cells() const { return cells_; }
  /// Highest cell dimension, -1 when empty.
  int dim() const { return static_cast<int>(first_.size()) - 2; }
  /// Cells exist only up to this dimension although the object continues
  /// above it (truncated nerves and the like).
  std::optional<int> truncation() const { return truncation_; }
  std::size_t count(int n) const;
  Index first(int n) const;
  std::vector<Index> cells_of_dim(int n) const;
  std::vector<std::size_t> counts() const;
  std::optional<Index> find(std::string_view id) const;

  int ref_dim(Ref r) const { return cells_[r.cell].dim + std::popcount(r.mask); }
  int face_count(int n) const { return ops::face_count(shape_, n); }
  /// Face a of an arbitrary (possibly degenerate) cell.
  Ref face(Ref r, int a) const;
  /// r . op (precomposition with a morphism of the indexing category).
  Ref apply(Ref r, const Op& op) const;
  /// Every reference of total dimension n, ordered by (cell, mask).
  std::vector<Ref> refs_of_dim(int n) const;

  std::string ref_string(Ref r) const;
  std::optional<Ref> parse_ref(std::string_view text) const;

 private:
  friend class ComplexBuilder;
  Ref apply_mono(Index cell, const Op& mono) const;

  Shape shape_ = Shape::simplicial;
  std::vector<Cell> cells_;
  std::vector<Index> first_;  // first_[n] = first index of dimension n; size dim()+2
  std::optional<int> truncation_;
  std::unordered_map<std::string, Index> index_;
};

using ComplexPtr = std::shared_ptr<const Complex>;

/// Index-based construction; build() sorts by (dimension, id) and remaps the
/// face references. Nothing is validated here (see validate_complex).
class ComplexBuilder {
 public:
  explicit ComplexBuilder(Shape shape) : shape_(shape) {}
  Index add_cell(std::string id, int dim, std::vector<Ref> faces = {});
  void set_faces(Index cell, std::vector<Ref> faces);
  std::size_t size() const { return cells_.size(); }
  int dim_of(Index cell) const { return cells_[cell].dim; }
  const std::string& id_of(Index cell) const { return cells_[cell].id; }
  /// Builds; the returned vector maps builder indices to final indices when requested.
  Complex build(std::optional<int> truncation = std::nullopt, std::vector<Index>* renumber = nullptr);

 private:
  Shape shape_;
  std::vector<Complex::Cell> cells_;
};

/// String-level declarations as they appear in a file.
struct ComplexDraft {
  struct CellDecl {
    std::string id;
    int dim = 0;
    std::vector<std::string> faces;  // "[s..]id" words, in face order
  };
  Shape shape = Shape::simplicial;
  std::optional<int> truncation;
  std::vector<CellDecl> cells;
};

ValidationReport validate_complex(const Complex& x);
ValidationReport validate_complex(const ComplexDraft& draft);
Complex build_complex(const ComplexDraft& draft);

/// A map of complexes: the image of every stored cell of the source.
struct ComplexMap {
  ComplexPtr source;
  ComplexPtr target;
  std::vector<Ref> images;

  Ref operator()(Ref r) const {
    const Ref y = images[r.cell];
    return {y.cell, mask::compose_epi(r.mask, y.mask)};
  }
};

ValidationReport validate_map(const ComplexMap& f);
ComplexMap identity_map(ComplexPtr x);
/// g o f.
ComplexMap compose(const ComplexMap& g, const ComplexMap& f);
/// Stored cells of the source whose images are stored cells, injectively, and
/// nondegenerate (a levelwise injection).
bool is_injective(const ComplexMap& f);
/// The inclusion of a subcomplex whose cell ids are ids of the ambient.
ComplexMap inclusion(ComplexPtr sub, ComplexPtr ambient);

/// The subcomplex generated by the given cells (closed under faces), keeping ids.
Complex subcomplex(const Complex& x, const std::vector<Index>& generators);
/// Face closure of a set of cells, as a membership vector.
std::vector<char> face_closure(const Complex& x, const std::vector<Index>& generators);

/// A finite diagram of complexes; only the generating arrows are listed.
struct ComplexDiagram {
  struct Arrow {
    std::size_t from = 0;
    std::size_t to = 0;
    ComplexMap map;
  };
  std::vector<std::string> names;
  std::vector<ComplexPtr> objects;
  std::vector<Arrow> arrows;
};

struct Colimit {
  ComplexPtr complex;
  std::vector<ComplexMap> legs;  // one per object
};

/// Strict colimit, computed levelwise as a quotient of the disjoint union and
/// put back into normal form. A cell is named "name:id" after its least
/// nondegenerate representative. Throws BudgetExceeded past `budget` references.
Colimit colimit(const ComplexDiagram& diagram, std::size_t budget = 1u << 24);

/// Lookup of target references by their faces, used by the map search.
class FaceIndex {
 public:
  FaceIndex(const Complex& target, int max_dim)
      : target_(&target), by_faces_(max_dim + 1), ready_(max_dim + 1, 0) {}
  /// References of dimension n whose faces are exactly `faces`; for n = 0 all
  /// vertices. Ordered by (cell, mask).
  const std::vector<Ref>& candidates(int n, const std::vector<Ref>& faces);

 private:
  void prepare(int n);
  const Complex* target_;
  std::vector<std::unordered_map<std::vector<Ref>, std::vector<Ref>, RefVectorHash>> by_faces_;
  std::vector<Ref> vertices_;
  std::vector<char> ready_;
  std::vector<Ref> none_;
};

/// Backtracking search for maps source -> target. Each cell is assigned right
/// after its faces (prescribed cells first); candidates are tried in
/// (target cell, mask) order, so the visiting order is deterministic.
struct MapSearch {
  const Complex* source = nullptr;
  const Complex* target = nullptr;
  /// Prescribed images (e.g. on a subcomplex); empty means none.
  std::vector<std::optional<Ref>> fixed;
  /// Extra per-cell constraint; may be empty.
  std::function<bool(Index cell, Ref image)> accept;
  /// Maximum number of partial assignments tried.
  std::size_t budget = 1u << 22;
};

/// Calls visit on every complete map (as the image vector) until it returns
/// false. Returns the number of search nodes used. Throws BudgetExceeded.
std::size_t search_maps(const MapSearch& problem, const std::function<bool(const std::vector<Ref>&)>& visit);

}  // namespace shapekit
