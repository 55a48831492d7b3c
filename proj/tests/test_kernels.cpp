#include <vector>

#include "doctest.h"
#include "postmarkov/kernels.hpp"
#include "test_support.hpp"

using namespace postmarkov;
namespace k = postmarkov::kernels;

namespace {

std::vector<Complex> random_vector(std::mt19937_64& rng, size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> v(n);
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return v;
}

// Straight transcription of the definition with std::complex arithmetic.
std::vector<Complex> reference(const k::HistoryArgs& a) {
  std::vector<Complex> out(a.dim, 0.0);
  for (long m = a.m_first; m <= a.m_last; ++m) {
    for (int r = 0; r < a.dim; ++r) {
      for (int c = 0; c < a.dim; ++c) {
        out[r] += a.kernels[m * a.dim * a.dim + c * a.dim + r] * a.history[(a.target - m) * a.dim + c];
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("scalar kernel matches the definition") {
  std::mt19937_64 rng(1);
  for (int dim : {1, 2, 4, 16}) {
    const long count = 37;
    const auto kern = random_vector(rng, count * dim * dim);
    const auto hist = random_vector(rng, count * dim);
    const k::HistoryArgs args{kern, hist, dim, 30, 1, 29};
    std::vector<Complex> out(dim, 0.0);
    k::history_sum(k::Backend::kScalar, args, out);
    const auto ref = reference(args);
    for (int r = 0; r < dim; ++r) CHECK(std::abs(out[r] - ref[r]) < 1e-11);
  }
}

TEST_CASE("SIMD kernels agree with the scalar reference") {
  if (!k::backend_available(k::Backend::kAvx2)) {
    MESSAGE("AVX2 not available; equivalence test skipped");
    return;
  }
  std::mt19937_64 rng(2);
  for (int dim = 1; dim <= 17; ++dim) {
    for (long target : {1L, 5L, 64L}) {
      const long count = target + 1;
      const auto kern = random_vector(rng, count * dim * dim);
      const auto hist = random_vector(rng, count * dim);
      const k::HistoryArgs args{kern, hist, dim, target, 1, target - 1};
      std::vector<Complex> scalar(dim, Complex(0.5, -0.25));
      std::vector<Complex> simd = scalar;
      k::history_sum(k::Backend::kScalar, args, scalar);
      k::history_sum(k::Backend::kAvx2, args, simd);
      double scale = 1.0;
      for (auto v : scalar) scale = std::max(scale, std::abs(v));
      for (int r = 0; r < dim; ++r) CHECK(std::abs(scalar[r] - simd[r]) < 1e-13 * scale * dim);
    }
  }
}

TEST_CASE("empty range leaves the output untouched") {
  std::vector<Complex> kern(16, 1.0), hist(4, 1.0), out(2, Complex(3.0));
  k::history_sum(k::HistoryArgs{kern, hist, 2, 0, 1, 0}, out);
  for (auto v : out) CHECK(v == Complex(3.0));
}

TEST_CASE("bounds are checked") {
  std::vector<Complex> kern(8, 1.0), hist(4, 1.0), out(2);
  CHECK_THROWS_AS(k::history_sum(k::HistoryArgs{kern, hist, 2, 1, 0, 2}, out),
                  std::invalid_argument);
  CHECK_THROWS_AS(k::history_sum(k::HistoryArgs{kern, hist, 2, 5, 0, 1}, out),
                  std::invalid_argument);
  std::vector<Complex> wrong(3);
  CHECK_THROWS_AS(k::history_sum(k::HistoryArgs{kern, hist, 2, 1, 0, 1}, wrong),
                  std::invalid_argument);
}

TEST_CASE("backend selection") {
  CHECK(k::backend_available(k::Backend::kScalar));
  const auto before = k::active_backend();
  k::set_active_backend(k::Backend::kScalar);
  CHECK(k::active_backend() == k::Backend::kScalar);
  k::set_active_backend(before);
  CHECK(k::backend_name(k::best_backend()).size() > 0);
}
