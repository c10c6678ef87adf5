#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace monofem {

/// Square matrix in compressed-row layout; column indices sorted within each
/// row, no duplicates.
struct CsrMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;  // n + 1 entries
  std::vector<std::int32_t> cols;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }

  /// Stored position of (i, j), or -1 if structurally zero.
  std::ptrdiff_t find(std::size_t i, std::size_t j) const;

  /// Entry value, 0 for structural zeros.
  double at(std::size_t i, std::size_t j) const;

  double diagonal(std::size_t i) const { return at(i, i); }

  /// Same pattern, values set to zero.
  CsrMatrix zeros_like() const;

  /// Entry-wise a*this + b*other; patterns must match.
  void add_scaled(double self_scale, const CsrMatrix& other, double other_scale);

  /// Max |a_ij - a_ji| <= rel_tol * max |a_ij|, with identical patterns.
  bool is_symmetric(double rel_tol) const;

  /// Smallest Gershgorin lower bound a_ii - sum_{j != i} |a_ij|.
  double min_gershgorin_bound() const;
};

}  // namespace monofem
