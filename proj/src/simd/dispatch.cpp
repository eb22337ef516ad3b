#include <atomic>

#include "femkit/common.hpp"
#include "femkit/simd/kernels.hpp"

namespace femkit::simd {

namespace {

Backend detect() {
#if defined(FEMKIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::avx2;
#endif
  return Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw InputError("simd kernel: vector length mismatch");
}

}  // namespace

std::string_view to_string(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool backend_supported(Backend b) { return b == Backend::scalar || detect() == Backend::avx2; }

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_supported(b)) throw InputError("SIMD backend '" + std::string(to_string(b)) + "' not supported here");
  current().store(b, std::memory_order_relaxed);
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_sizes(x.size(), y.size());
#if defined(FEMKIT_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return avx2::dot(x.data(), y.data(), x.size());
#endif
  return scalar::dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
#if defined(FEMKIT_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return avx2::axpy(a, x.data(), y.data(), x.size());
#endif
  scalar::axpy(a, x.data(), y.data(), x.size());
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
  check_sizes(x.size(), y.size());
#if defined(FEMKIT_HAVE_AVX2)
  if (active_backend() == Backend::avx2) return avx2::xpby(x.data(), b, y.data(), x.size());
#endif
  scalar::xpby(x.data(), b, y.data(), x.size());
}

void spmv(const CsrView& a, std::span<const double> x, std::span<double> y) {
  const std::size_t rows = a.row_ptr.empty() ? 0 : a.row_ptr.size() - 1;
  check_sizes(rows, y.size());
#if defined(FEMKIT_HAVE_AVX2)
  if (active_backend() == Backend::avx2) {
    return avx2::spmv(a.row_ptr.data(), a.col_idx.data(), a.values.data(), x.data(), y.data(), rows);
  }
#endif
  scalar::spmv(a.row_ptr.data(), a.col_idx.data(), a.values.data(), x.data(), y.data(), rows);
}

}  // namespace femkit::simd
