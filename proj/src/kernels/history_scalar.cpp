#include "postmarkov/kernels.hpp"

namespace postmarkov::kernels::detail {

void history_sum_scalar(const HistoryArgs& a, std::span<Complex> out) {
  const int d = a.dim;
  const auto* k = reinterpret_cast<const double*>(a.kernels.data());
  const auto* y = reinterpret_cast<const double*>(a.history.data());
  for (int r = 0; r < d; ++r) {
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (long m = a.m_first; m <= a.m_last; ++m) {
      const double* km = k + 2 * (m * d * d + r);
      const double* ym = y + 2 * ((a.target - m) * d);
      for (int c = 0; c < d; ++c) {
        const double kr = km[2 * c * d];
        const double ki = km[2 * c * d + 1];
        const double yr = ym[2 * c];
        const double yi = ym[2 * c + 1];
        acc_re += kr * yr - ki * yi;
        acc_im += kr * yi + ki * yr;
      }
    }
    out[r] += Complex(acc_re, acc_im);
  }
}

}  // namespace postmarkov::kernels::detail
