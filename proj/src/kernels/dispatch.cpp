#include <atomic>
#include <stdexcept>
#include <string>

#include "postmarkov/kernels.hpp"

namespace postmarkov::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(POSTMARKOV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Backend>& active() {
  static std::atomic<Backend> backend{best_backend()};
  return backend;
}

void check_args(const HistoryArgs& a, std::span<Complex> out) {
  const long d = a.dim;
  if (d <= 0 || static_cast<long>(out.size()) != d) {
    throw std::invalid_argument("history_sum: output length must equal dim");
  }
  if (a.m_last < a.m_first) return;
  if (a.m_first < 0 || static_cast<long>(a.kernels.size()) < (a.m_last + 1) * d * d) {
    throw std::invalid_argument("history_sum: kernel index out of range");
  }
  if (a.target - a.m_first >= static_cast<long>(a.history.size()) / d ||
      a.target - a.m_last < 0) {
    throw std::invalid_argument("history_sum: history index out of range");
  }
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::kScalar: return "scalar";
    case Backend::kAvx2: return "avx2";
  }
  return "?";
}

bool backend_available(Backend b) {
  if (b == Backend::kScalar) return true;
  static const bool avx2 = cpu_has_avx2();
  return avx2;
}

Backend best_backend() {
  return backend_available(Backend::kAvx2) ? Backend::kAvx2 : Backend::kScalar;
}

Backend active_backend() { return active().load(); }

void set_active_backend(Backend b) {
  if (!backend_available(b)) {
    throw std::invalid_argument("backend " + std::string(backend_name(b)) +
                                " is not available on this CPU");
  }
  active().store(b);
}

void history_sum(Backend backend, const HistoryArgs& args, std::span<Complex> out) {
  if (!backend_available(backend)) {
    throw std::invalid_argument("backend " + std::string(backend_name(backend)) +
                                " is not available on this CPU");
  }
  check_args(args, out);
  if (args.m_last < args.m_first) return;
#if defined(POSTMARKOV_HAVE_AVX2)
  if (backend == Backend::kAvx2) {
    detail::history_sum_avx2(args, out);
    return;
  }
#endif
  detail::history_sum_scalar(args, out);
}

void history_sum(const HistoryArgs& args, std::span<Complex> out) {
  history_sum(active_backend(), args, out);
}

}  // namespace postmarkov::kernels
