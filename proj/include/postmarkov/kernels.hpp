#pragma once

// History-convolution kernels for the quadrature oracle.
//
// The memory integral of a convolution equation, discretised on a uniform
// grid, needs for every step n the sum
//
//   out = sum_{m = m_first}^{m_last} K_m y_{target - m}
//
// over d x d complex matrices K_m (column-major, stored back to back) and
// d-vectors y_k (stored back to back). This is the O(N^2) inner loop of the
// oracle; the scalar version is the reference and the SIMD variants must
// agree with it to rounding.

#include <complex>
#include <span>
#include <string_view>

namespace postmarkov::kernels {

using Complex = std::complex<double>;

enum class Backend { kScalar, kAvx2 };

std::string_view backend_name(Backend b);
bool backend_available(Backend b);
// Widest backend the running CPU supports.
Backend best_backend();

// Backend used by history_sum(...) without an explicit backend argument.
Backend active_backend();
// Throws std::invalid_argument if `b` is not available on this CPU.
void set_active_backend(Backend b);

struct HistoryArgs {
  std::span<const Complex> kernels;  // count * dim * dim
  std::span<const Complex> history;  // length * dim
  int dim = 0;
  long target = 0;
  long m_first = 0;
  long m_last = -1;  // inclusive; empty range when m_last < m_first
};

// Adds the sum into `out` (length dim). Bounds are checked.
void history_sum(Backend backend, const HistoryArgs& args, std::span<Complex> out);
void history_sum(const HistoryArgs& args, std::span<Complex> out);

namespace detail {
void history_sum_scalar(const HistoryArgs& args, std::span<Complex> out);
#if defined(POSTMARKOV_HAVE_AVX2)
void history_sum_avx2(const HistoryArgs& args, std::span<Complex> out);
#endif
}  // namespace detail

}  // namespace postmarkov::kernels
