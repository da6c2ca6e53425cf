#include "shapekit/snf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace shapekit {

IntMatrix identity_matrix(std::size_t n) {
  IntMatrix m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix zero_matrix(std::size_t rows, std::size_t cols) {
  return IntMatrix(rows, std::vector<mpz_class>(cols, 0));
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b, std::size_t inner) {
  const std::size_t cols = b.empty() ? 0 : b.front().size();
  IntMatrix out = zero_matrix(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

namespace {

// In-place reduction of d to Smith form; row operations are mirrored on *l
// and column operations on *r when given.
void reduce(IntMatrix& d, std::size_t cols, IntMatrix* l, IntMatrix* r) {
  const std::size_t rows = d.size();
  auto swap_rows = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap(d[a], d[b]);
    if (l) std::swap((*l)[a], (*l)[b]);
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (auto& row : d) std::swap(row[a], row[b]);
    if (r)
      for (auto& row : *r) std::swap(row[a], row[b]);
  };
  // row a -= q * row b
  auto add_row = [&](std::size_t a, std::size_t b, const mpz_class& q) {
    for (std::size_t j = 0; j < cols; ++j)
      if (d[b][j] != 0) d[a][j] -= q * d[b][j];
    if (l)
      for (std::size_t j = 0; j < rows; ++j)
        if ((*l)[b][j] != 0) (*l)[a][j] -= q * (*l)[b][j];
  };
  auto add_col = [&](std::size_t a, std::size_t b, const mpz_class& q) {
    for (std::size_t i = 0; i < rows; ++i)
      if (d[i][b] != 0) d[i][a] -= q * d[i][b];
    if (r)
      for (auto& row : *r)
        if (row[b] != 0) row[a] -= q * row[b];
  };
  const std::size_t n = std::min(rows, cols);
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (d[i][j] != 0 && (pr == rows || abs(d[i][j]) < abs(d[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == rows) return;
      swap_rows(t, pr);
      swap_cols(t, pc);
      bool clear = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d[i][t] == 0) continue;
        const mpz_class q = d[i][t] / d[t][t];
        if (q != 0) add_row(i, t, q);
        clear = clear && d[i][t] == 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d[t][j] == 0) continue;
        const mpz_class q = d[t][j] / d[t][t];
        if (q != 0) add_col(j, t, q);
        clear = clear && d[t][j] == 0;
      }
      if (!clear) continue;
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (d[i][j] % d[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      add_row(t, bad, -1);
    }
    if (d[t][t] < 0) {
      for (auto& x : d[t]) x = -x;
      if (l)
        for (auto& x : (*l)[t]) x = -x;
    }
  }
}

std::vector<mpz_class> diagonal_factors(const IntMatrix& d) {
  std::vector<mpz_class> out;
  for (std::size_t t = 0; t < d.size() && t < (d.empty() ? 0 : d.front().size()); ++t)
    if (d[t][t] != 0) out.push_back(d[t][t]);
  return out;
}

}  // namespace

bool check_smith_form(const IntMatrix& m, const SmithForm& s) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m.front().size() : s.right.size();
  const IntMatrix lm = multiply(s.left, m, rows);
  const IntMatrix lmr = multiply(lm, s.right, cols);
  if (rows && lmr != s.diagonal) return false;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (i != j && s.diagonal[i][j] != 0) return false;
  for (std::size_t k = 1; k < s.factors.size(); ++k)
    if (s.factors[k] % s.factors[k - 1] != 0) return false;
  for (const auto& f : s.factors)
    if (f <= 0) return false;
  // L and R are unimodular: |det| = 1, checked through their own Smith forms.
  for (const IntMatrix* u : {&s.left, &s.right}) {
    IntMatrix copy = *u;
    reduce(copy, copy.size(), nullptr, nullptr);
    for (std::size_t t = 0; t < copy.size(); ++t)
      if (copy[t][t] != 1) return false;
  }
  return true;
}

SmithForm smith_normal_form(const IntMatrix& m, bool verify) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m.front().size() : 0;
  for (const auto& row : m)
    if (row.size() != cols) throw std::invalid_argument("smith_normal_form: ragged matrix");
  SmithForm s{identity_matrix(rows), m, identity_matrix(cols), {}};
  reduce(s.diagonal, cols, &s.left, &s.right);
  s.factors = diagonal_factors(s.diagonal);
  if (verify && !check_smith_form(m, s)) throw std::logic_error("smith_normal_form: L*M*R != D");
  return s;
}

std::vector<mpz_class> invariant_factors(const IntMatrix& m) {
  IntMatrix d = m;
  reduce(d, d.empty() ? 0 : d.front().size(), nullptr, nullptr);
  return diagonal_factors(d);
}

IntMatrix to_dense(const SparseMatrix& m) {
  IntMatrix d = zero_matrix(m.rows, m.cols);
  for (std::size_t c = 0; c < m.cols; ++c)
    for (const auto& [r, v] : m.columns[c]) d[r][c] += v;
  return d;
}

namespace {

struct Overflow {};

long checked_sub_mul(long a, long q, long b) {  // a - q*b
  long p, out;
  if (__builtin_mul_overflow(q, b, &p) || __builtin_sub_overflow(a, p, &out)) throw Overflow{};
  return out;
}
mpz_class checked_sub_mul(const mpz_class& a, const mpz_class& q, const mpz_class& b) { return a - q * b; }

bool is_unit(long v) { return v == 1 || v == -1; }
bool is_unit(const mpz_class& v) { return v == 1 || v == -1; }

template <class T>
using SparseRow = std::vector<std::pair<std::size_t, T>>;  // sorted by column

// Sparse elimination of unit pivots. A row holding a single unit entry is
// eliminated first (no arithmetic); otherwise the column with the fewest
// entries that has a unit is pivoted on its shortest unit row. Returns the
// number of pivots and leaves the rest in `rows` (eliminated rows cleared).
template <class T>
std::size_t eliminate_units(std::vector<SparseRow<T>>& rows, std::size_t ncols) {
  const std::size_t nrows = rows.size();
  std::vector<std::vector<std::size_t>> in_col(ncols);  // may hold stale rows
  std::vector<std::size_t> col_count(ncols, 0);
  std::vector<char> col_dead(ncols, 0);
  for (std::size_t r = 0; r < nrows; ++r)
    for (const auto& [c, v] : rows[r]) {
      in_col[c].push_back(r);
      ++col_count[c];
    }
  auto find = [&](std::size_t r, std::size_t c) -> const T* {
    const auto& row = rows[r];
    auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, std::size_t k) { return e.first < k; });
    return it != row.end() && it->first == c ? &it->second : nullptr;
  };
  // Live rows of column c, compacting the list as a side effect.
  auto live = [&](std::size_t c) -> const std::vector<std::size_t>& {
    auto& list = in_col[c];
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    list.erase(std::remove_if(list.begin(), list.end(), [&](std::size_t r) { return !find(r, c); }), list.end());
    return list;
  };
  // Lazy min-heap of (count, column); entries whose count is stale are skipped.
  using Entry = std::pair<std::size_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::vector<std::size_t> row_queue;
  for (std::size_t c = 0; c < ncols; ++c)
    if (col_count[c]) heap.emplace(col_count[c], c);
  for (std::size_t r = 0; r < nrows; ++r)
    if (rows[r].size() == 1) row_queue.push_back(r);
  auto touched = [&](std::size_t c) {
    if (col_count[c]) heap.emplace(col_count[c], c);
  };

  auto drop_row = [&](std::size_t r) {
    for (const auto& [c, v] : rows[r]) {
      --col_count[c];
      touched(c);
    }
    rows[r].clear();
  };
  // row r -= q * prow
  auto subtract = [&](std::size_t r, const T& q, const SparseRow<T>& prow) {
    SparseRow<T> out;
    out.reserve(rows[r].size() + prow.size());
    auto a = rows[r].begin();
    auto b = prow.begin();
    while (a != rows[r].end() || b != prow.end()) {
      if (b == prow.end() || (a != rows[r].end() && a->first < b->first)) {
        out.push_back(std::move(*a++));
      } else if (a == rows[r].end() || b->first < a->first) {
        ++col_count[b->first];
        in_col[b->first].push_back(r);
        touched(b->first);
        out.emplace_back(b->first, checked_sub_mul(T(0), q, b->second));
        ++b;
      } else {
        T v = checked_sub_mul(a->second, q, b->second);
        if (v == 0) {
          --col_count[a->first];
          touched(a->first);
        } else {
          out.emplace_back(a->first, std::move(v));
        }
        ++a;
        ++b;
      }
    }
    rows[r] = std::move(out);
    if (rows[r].size() == 1) row_queue.push_back(r);
  };
  auto pivot = [&](std::size_t r, std::size_t c) {
    const T p = *find(r, c);
    const SparseRow<T> prow = rows[r];
    const std::vector<std::size_t> others = live(c);
    for (std::size_t o : others) {
      if (o == r) continue;
      const T q = *find(o, c) * p;  // p is its own inverse
      subtract(o, q, prow);
    }
    drop_row(r);
    col_dead[c] = 1;
    col_count[c] = 0;
  };

  std::size_t pivots = 0;
  for (;;) {
    if (!row_queue.empty()) {
      const std::size_t r = row_queue.back();
      row_queue.pop_back();
      if (rows[r].size() != 1 || !is_unit(rows[r].front().second)) continue;
      pivot(r, rows[r].front().first);
      ++pivots;
      continue;
    }
    if (heap.empty()) break;
    const auto [count, c] = heap.top();
    heap.pop();
    if (col_dead[c] || count != col_count[c]) continue;
    std::size_t best = nrows;
    for (std::size_t r : live(c))
      if (is_unit(*find(r, c)) && (best == nrows || rows[r].size() < rows[best].size())) best = r;
    if (best == nrows) continue;  // reconsidered when the column changes
    pivot(best, c);
    ++pivots;
  }
  return pivots;
}

template <class T>
std::vector<mpz_class> sparse_factors(const SparseMatrix& m) {
  // Works on the transpose (same invariant factors): boundary columns are
  // short, which keeps the fill-in small.
  std::vector<SparseRow<T>> rows(m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) {
    std::map<std::size_t, T> acc;
    for (const auto& [r, v] : m.columns[c]) acc[r] += T(v);
    for (auto& [r, v] : acc)
      if (v != 0) rows[c].emplace_back(r, std::move(v));
  }
  const std::size_t units = eliminate_units(rows, m.rows);
  std::vector<std::size_t> live_rows;
  std::map<std::size_t, std::size_t> live_cols;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].empty()) continue;
    live_rows.push_back(r);
    for (const auto& [c, v] : rows[r]) live_cols.emplace(c, 0);
  }
  std::size_t k = 0;
  for (auto& [c, slot] : live_cols) slot = k++;
  IntMatrix rest = zero_matrix(live_rows.size(), live_cols.size());
  for (std::size_t i = 0; i < live_rows.size(); ++i)
    for (const auto& [c, v] : rows[live_rows[i]]) rest[i][live_cols[c]] = mpz_class(v);
  std::vector<mpz_class> out(units, mpz_class(1));
  for (auto& f : invariant_factors(rest)) out.push_back(std::move(f));
  return out;
}

}  // namespace

std::vector<mpz_class> invariant_factors(const SparseMatrix& m) {
  try {
    return sparse_factors<long>(m);
  } catch (const Overflow&) {
    return sparse_factors<mpz_class>(m);
  }
}

}  // namespace shapekit
