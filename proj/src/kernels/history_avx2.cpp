#include <immintrin.h>

#include "postmarkov/kernels.hpp"

namespace postmarkov::kernels::detail {

namespace {

// R registers hold 2R consecutive complex rows starting at row0.
template <int R>
void row_block(const HistoryArgs& a, int row0, std::span<Complex> out) {
  const int d = a.dim;
  const auto* k = reinterpret_cast<const double*>(a.kernels.data());
  const auto* y = reinterpret_cast<const double*>(a.history.data());
  __m256d acc_re[R];
  __m256d acc_im[R];
  for (int r = 0; r < R; ++r) {
    acc_re[r] = _mm256_setzero_pd();
    acc_im[r] = _mm256_setzero_pd();
  }
  for (long m = a.m_first; m <= a.m_last; ++m) {
    const double* km = k + 2 * (m * d * d + row0);
    const double* ym = y + 2 * ((a.target - m) * d);
    for (int c = 0; c < d; ++c) {
      const __m256d br = _mm256_set1_pd(ym[2 * c]);
      const __m256d bi = _mm256_set1_pd(ym[2 * c + 1]);
      const double* col = km + 2 * c * d;
      for (int r = 0; r < R; ++r) {
        const __m256d v = _mm256_loadu_pd(col + 4 * r);
        acc_re[r] = _mm256_fmadd_pd(v, br, acc_re[r]);
        acc_im[r] = _mm256_fmadd_pd(_mm256_permute_pd(v, 0b0101), bi, acc_im[r]);
      }
    }
  }
  auto* o = reinterpret_cast<double*>(out.data()) + 2 * row0;
  for (int r = 0; r < R; ++r) {
    // even lanes: re*re - im*im, odd lanes: im*re + re*im
    const __m256d prod = _mm256_addsub_pd(acc_re[r], acc_im[r]);
    _mm256_storeu_pd(o + 4 * r, _mm256_add_pd(_mm256_loadu_pd(o + 4 * r), prod));
  }
}

}  // namespace

void history_sum_avx2(const HistoryArgs& a, std::span<Complex> out) {
  int row = 0;
  for (; row + 8 <= a.dim; row += 8) row_block<4>(a, row, out);
  if (row + 4 <= a.dim) {
    row_block<2>(a, row, out);
    row += 4;
  }
  if (row + 2 <= a.dim) {
    row_block<1>(a, row, out);
    row += 2;
  }
  if (row < a.dim) {
    // Odd trailing row.
    const int d = a.dim;
    Complex acc = 0.0;
    for (long m = a.m_first; m <= a.m_last; ++m) {
      for (int c = 0; c < d; ++c) {
        acc += a.kernels[m * d * d + c * d + row] * a.history[(a.target - m) * d + c];
      }
    }
    out[row] += acc;
  }
}

}  // namespace postmarkov::kernels::detail
