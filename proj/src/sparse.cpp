#include "monofem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace monofem {

std::ptrdiff_t CsrMatrix::find(std::size_t i, std::size_t j) const {
  const auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::int32_t>(j));
  if (it == last || *it != static_cast<std::int32_t>(j)) return -1;
  return it - cols.begin();
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto k = find(i, j);
  return k < 0 ? 0.0 : values[static_cast<std::size_t>(k)];
}

CsrMatrix CsrMatrix::zeros_like() const {
  CsrMatrix z;
  z.n = n;
  z.row_ptr = row_ptr;
  z.cols = cols;
  z.values.assign(values.size(), 0.0);
  return z;
}

void CsrMatrix::add_scaled(double self_scale, const CsrMatrix& other, double other_scale) {
  if (other.n != n || other.cols.size() != cols.size()) {
    throw std::invalid_argument("CsrMatrix::add_scaled: sparsity patterns differ");
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = self_scale * values[k] + other_scale * other.values[k];
  }
}

bool CsrMatrix::is_symmetric(double rel_tol) const {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      const auto j = static_cast<std::size_t>(cols[k]);
      const auto kt = find(j, i);
      if (kt < 0) return false;
      if (std::abs(values[k] - values[static_cast<std::size_t>(kt)]) > rel_tol * scale) return false;
    }
  }
  return true;
}

double CsrMatrix::min_gershgorin_bound() const {
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0, off = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (static_cast<std::size_t>(cols[k]) == i) {
        diag = values[k];
      } else {
        off += std::abs(values[k]);
      }
    }
    bound = std::min(bound, diag - off);
  }
  return bound;
}

}  // namespace monofem
