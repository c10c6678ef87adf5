#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP variant and a plain
// serial reference with the same contract; tests compare the two and the
// benchmark target times them.
//
// The OpenMP variants are deterministic: results do not depend on the thread
// count. Reductions sum fixed-size blocks and then combine the block sums in
// order; assembly gathers element contributions row by row in ascending
// element order, which reproduces the serial scatter exactly.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

#include "monofem/sparse.hpp"

namespace monofem {

enum class Exec { parallel, serial };

/// Element-to-matrix map used by the assembly gather.
struct ElementScatter {
  std::size_t num_rows = 0;
  std::size_t num_elements = 0;
  /// 9 CSR value positions per element, row-major over the local 3x3 block.
  std::span<const std::size_t> slots;
  /// Global row of each local vertex, 3 per element.
  std::span<const std::int32_t> element_rows;
  /// Per row, the (element * 3 + local vertex) codes touching it, ascending.
  std::span<const std::size_t> incidence_ptr;
  std::span<const std::uint32_t> incidence;
};

namespace kernels {

inline constexpr std::size_t kReductionBlock = 2048;

namespace omp {
double dot(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double b, std::span<double> y);  // y = x + b*y
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
void gather_matrix(const ElementScatter& map, std::span<const double> local, std::span<double> values);
void gather_vector(const ElementScatter& map, std::span<const double> local, std::span<double> out);
}  // namespace omp

namespace serial {
double dot(std::span<const double> x, std::span<const double> y);
double max_abs(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double b, std::span<double> y);
void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
void gather_matrix(const ElementScatter& map, std::span<const double> local, std::span<double> values);
void gather_vector(const ElementScatter& map, std::span<const double> local, std::span<double> out);
}  // namespace serial

inline double dot(Exec e, std::span<const double> x, std::span<const double> y) {
  return e == Exec::parallel ? omp::dot(x, y) : serial::dot(x, y);
}
inline double max_abs(Exec e, std::span<const double> x) {
  return e == Exec::parallel ? omp::max_abs(x) : serial::max_abs(x);
}
inline void axpy(Exec e, double a, std::span<const double> x, std::span<double> y) {
  e == Exec::parallel ? omp::axpy(a, x, y) : serial::axpy(a, x, y);
}
inline void xpby(Exec e, std::span<const double> x, double b, std::span<double> y) {
  e == Exec::parallel ? omp::xpby(x, b, y) : serial::xpby(x, b, y);
}
inline void spmv(Exec e, const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  e == Exec::parallel ? omp::spmv(a, x, y) : serial::spmv(a, x, y);
}
inline void gather_matrix(Exec e, const ElementScatter& m, std::span<const double> l, std::span<double> v) {
  e == Exec::parallel ? omp::gather_matrix(m, l, v) : serial::gather_matrix(m, l, v);
}
inline void gather_vector(Exec e, const ElementScatter& m, std::span<const double> l, std::span<double> v) {
  e == Exec::parallel ? omp::gather_vector(m, l, v) : serial::gather_vector(m, l, v);
}

inline double norm2(Exec e, std::span<const double> x) {
  return std::sqrt(dot(e, x, x));
}

/// Runs body(i) for i in [0, n); parallel variant uses a static OpenMP schedule.
template <class Body>
void for_each_index(Exec e, std::size_t n, Body&& body) {
  if (e == Exec::parallel) {
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) body(i);
  }
}

}  // namespace kernels
}  // namespace monofem
