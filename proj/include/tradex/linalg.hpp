#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "tradex/rational.hpp"

namespace tradex {

// Solves the square system a * x = b by exact Gaussian elimination.
// Pivoting picks the first nonzero entry; with rational arithmetic there is
// no accuracy concern, only singularity detection. Returns nullopt when the
// matrix is singular.
inline std::optional<RationalVector> solve_linear_system(RationalMatrix a, RationalVector b) {
  const std::size_t n = a.size();
  if (b.size() != n) return std::nullopt;
  for (const auto& row : a) {
    if (row.size() != n) return std::nullopt;
  }

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      std::swap(b[pivot], b[col]);
    }
    const Rational inv = Rational(1) / a[col][col];
    for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
    b[col] *= inv;
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col].is_zero()) continue;
      const Rational factor = a[row][col];
      for (std::size_t j = col; j < n; ++j) a[row][j] -= factor * a[col][j];
      b[row] -= factor * b[col];
    }
  }
  return b;
}

}  // namespace tradex
