#include "monofem/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace monofem::kernels {

namespace {

std::size_t num_blocks(std::size_t n) { return (n + kReductionBlock - 1) / kReductionBlock; }

}  // namespace

// ---------------------------------------------------------------------------
// OpenMP

namespace omp {

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const auto nb = static_cast<std::ptrdiff_t>(num_blocks(n));
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
    const std::size_t hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
    partial[static_cast<std::size_t>(b)] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

double max_abs(std::span<const double> x) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  double m = 0.0;
#pragma omp parallel for schedule(static) reduction(max : m)
  for (std::ptrdiff_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[static_cast<std::size_t>(i)]));
  return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] += a * x[static_cast<std::size_t>(i)];
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    y[k] = x[k] + b * y[k];
  }
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::ptrdiff_t>(a.n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto i = static_cast<std::size_t>(r);
    double s = 0.0;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      s += a.values[k] * x[static_cast<std::size_t>(a.cols[k])];
    }
    y[i] = s;
  }
}

void gather_matrix(const ElementScatter& map, std::span<const double> local, std::span<double> values) {
  const auto n = static_cast<std::ptrdiff_t>(map.num_rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto row = static_cast<std::size_t>(r);
    for (std::size_t k = map.incidence_ptr[row]; k < map.incidence_ptr[row + 1]; ++k) {
      const std::size_t code = map.incidence[k];
      const std::size_t e = code / 3;
      const std::size_t li = code % 3;
      for (std::size_t lj = 0; lj < 3; ++lj) {
        const std::size_t q = 9 * e + 3 * li + lj;
        values[map.slots[q]] += local[q];
      }
    }
  }
}

void gather_vector(const ElementScatter& map, std::span<const double> local, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(map.num_rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < n; ++r) {
    const auto row = static_cast<std::size_t>(r);
    double s = out[row];
    for (std::size_t k = map.incidence_ptr[row]; k < map.incidence_ptr[row + 1]; ++k) {
      s += local[map.incidence[k]];
    }
    out[row] = s;
  }
}

}  // namespace omp

// ---------------------------------------------------------------------------
// Serial reference

namespace serial {

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + b * y[i];
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < a.n; ++i) {
    double s = 0.0;
    for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      s += a.values[k] * x[static_cast<std::size_t>(a.cols[k])];
    }
    y[i] = s;
  }
}

void gather_matrix(const ElementScatter& map, std::span<const double> local, std::span<double> values) {
  for (std::size_t q = 0; q < 9 * map.num_elements; ++q) values[map.slots[q]] += local[q];
}

void gather_vector(const ElementScatter& map, std::span<const double> local, std::span<double> out) {
  for (std::size_t e = 0; e < map.num_elements; ++e) {
    for (std::size_t l = 0; l < 3; ++l) {
      out[static_cast<std::size_t>(map.element_rows[3 * e + l])] += local[3 * e + l];
    }
  }
}

}  // namespace serial

}  // namespace monofem::kernels
