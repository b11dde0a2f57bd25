#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "stochlab/errors.hpp"
#include "stochlab/rational.hpp"

// Exact Gaussian elimination over the rationals.  Matrices are dense
// row-major vectors of vectors; every routine is allocation-happy but exact,
// which is what the callers (conditioning, chains) need at their small sizes.
namespace stochlab::linalg {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;

inline void check_rectangular(const Matrix& A, const char* who) {
  for (const auto& row : A)
    if (row.size() != A.front().size())
      raise("DimensionMismatch", std::string(who) + ": ragged matrix");
}

inline Matrix identity(std::size_t n) {
  Matrix I(n, Vector(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

inline Vector mat_vec(const Matrix& A, const Vector& x) {
  if (!A.empty() && A.front().size() != x.size())
    raise("DimensionMismatch", "mat_vec: " + std::to_string(A.front().size()) +
                                   " columns vs vector of size " +
                                   std::to_string(x.size()));
  Vector y(A.size(), Rational(0));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
  return y;
}

inline Matrix mat_mul(const Matrix& A, const Matrix& B) {
  if (!A.empty() && A.front().size() != B.size())
    raise("DimensionMismatch", "mat_mul: inner dimensions " +
                                   std::to_string(A.front().size()) + " and " +
                                   std::to_string(B.size()) + " differ");
  const std::size_t rows = A.size();
  const std::size_t cols = B.empty() ? 0 : B.front().size();
  Matrix C(rows, Vector(cols, Rational(0)));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = 0; k < B.size(); ++k) {
      if (A[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) C[i][j] += A[i][k] * B[k][j];
    }
  return C;
}

inline Matrix transpose(const Matrix& A) {
  if (A.empty()) return {};
  check_rectangular(A, "transpose");
  Matrix T(A.front().size(), Vector(A.size()));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A.front().size(); ++j) T[j][i] = A[i][j];
  return T;
}

// Rough size of a rational, used only to pick pivots that keep intermediate
// entries small; correctness never depends on the choice.
inline unsigned long bit_size(const Rational& r) {
  const Integer num = abs(numerator(r));
  const Integer den = denominator(r);
  unsigned long bits = 0;
  if (num != 0) bits += msb(num) + 1;
  if (den != 0) bits += msb(den) + 1;
  return bits;
}

struct Reduction {
  Matrix rows;                     // reduced row-echelon form of [A | extra]
  std::vector<std::size_t> pivots; // pivot column per eliminated row
};

// Reduce an augmented system in place; only the first `lead` columns are
// eligible for pivoting, trailing columns ride along.
inline Reduction rref(Matrix M, std::size_t lead) {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < lead && rank < M.size(); ++col) {
    std::size_t best = M.size();
    unsigned long best_bits = 0;
    for (std::size_t r = rank; r < M.size(); ++r) {
      if (M[r][col] == 0) continue;
      const unsigned long bits = bit_size(M[r][col]);
      if (best == M.size() || bits < best_bits) {
        best = r;
        best_bits = bits;
      }
    }
    if (best == M.size()) continue;
    std::swap(M[rank], M[best]);
    const Rational pivot = M[rank][col];
    for (auto& entry : M[rank]) entry /= pivot;
    for (std::size_t r = 0; r < M.size(); ++r) {
      if (r == rank || M[r][col] == 0) continue;
      const Rational factor = M[r][col];
      for (std::size_t j = col; j < M[r].size(); ++j)
        M[r][j] -= factor * M[rank][j];
    }
    pivots.push_back(col);
    ++rank;
  }
  return {std::move(M), std::move(pivots)};
}

struct Solution {
  bool consistent = false;
  bool unique = false;
  Vector x;  // particular solution, free variables pinned to zero
};

inline Solution solve_general(const Matrix& A, const Vector& b) {
  if (A.size() != b.size())
    raise("DimensionMismatch", "solve_general: " + std::to_string(A.size()) +
                                   " rows vs rhs of size " +
                                   std::to_string(b.size()));
  if (A.empty()) return {true, true, {}};
  check_rectangular(A, "solve_general");
  const std::size_t cols = A.front().size();
  Matrix aug(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    aug[i] = A[i];
    aug[i].push_back(b[i]);
  }
  const Reduction red = rref(std::move(aug), cols);
  Solution sol;
  sol.consistent = true;
  for (std::size_t r = red.pivots.size(); r < red.rows.size(); ++r)
    if (red.rows[r][cols] != 0) sol.consistent = false;
  if (!sol.consistent) return sol;
  sol.unique = red.pivots.size() == cols;
  sol.x.assign(cols, Rational(0));
  for (std::size_t r = 0; r < red.pivots.size(); ++r)
    sol.x[red.pivots[r]] = red.rows[r][cols];
  return sol;
}

inline Vector solve_unique(const Matrix& A, const Vector& b) {
  const Solution sol = solve_general(A, b);
  if (!sol.consistent)
    raise("SingularMatrix", "solve_unique: inconsistent system");
  if (!sol.unique)
    raise("SingularMatrix", "solve_unique: solution space has free variables");
  return sol.x;
}

inline Matrix invert(const Matrix& A) {
  const std::size_t n = A.size();
  for (const auto& row : A)
    if (row.size() != n) raise("DimensionMismatch", "invert: matrix not square");
  Matrix aug(n);
  for (std::size_t i = 0; i < n; ++i) {
    aug[i] = A[i];
    for (std::size_t j = 0; j < n; ++j)
      aug[i].push_back(i == j ? Rational(1) : Rational(0));
  }
  const Reduction red = rref(std::move(aug), n);
  if (red.pivots.size() != n)
    raise("SingularMatrix", "invert: matrix is singular");
  Matrix inv(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = red.rows[i][n + j];
  return inv;
}

}  // namespace stochlab::linalg
