#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace shapekit {

/// Dense integer matrix, row-major.
using IntMatrix = std::vector<std::vector<mpz_class>>;

IntMatrix identity_matrix(std::size_t n);
IntMatrix zero_matrix(std::size_t rows, std::size_t cols);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b, std::size_t inner);

/// L * M * R = D with L, R unimodular and D diagonal, d1 | d2 | ..., all d >= 0.
struct SmithForm {
  IntMatrix left;
  IntMatrix diagonal;
  IntMatrix right;
  /// The nonzero diagonal entries, in order.
  std::vector<mpz_class> factors;
};

/// Pivots on the nonzero entry of least absolute value (ties by position).
/// With `verify`, L * M * R = D is re-checked by multiplication and a
/// std::logic_error is thrown on mismatch.
SmithForm smith_normal_form(const IntMatrix& m, bool verify = false);
bool check_smith_form(const IntMatrix& m, const SmithForm& s);

/// Sparse integer matrix stored by columns as (row, value) pairs.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<std::pair<std::size_t, long>>> columns;
};

IntMatrix to_dense(const SparseMatrix& m);

/// Nonzero invariant factors of a sparse matrix. Unit pivots are eliminated
/// sparsely in machine integers first (redone in GMP arithmetic on overflow);
/// what is left goes through the dense form.
std::vector<mpz_class> invariant_factors(const SparseMatrix& m);
/// Nonzero invariant factors of a dense matrix (no transforms kept).
std::vector<mpz_class> invariant_factors(const IntMatrix& m);

}  // namespace shapekit
