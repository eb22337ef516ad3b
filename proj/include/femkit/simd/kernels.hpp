#pragma once

// Data-parallel inner loops used by the sparse/dense solvers.
//
// Every kernel has a portable scalar reference implementation and, on x86-64
// builds, an AVX2+FMA variant compiled in its own translation unit. The
// variant is chosen once at runtime from CPUID; set_backend() lets tests pin
// either one. Results of the two backends agree to rounding (summation order
// differs), and each backend is deterministic.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace femkit::simd {

enum class Backend { scalar, avx2 };

std::string_view to_string(Backend b);
bool backend_supported(Backend b);
Backend active_backend();
/// Throws InputError if the backend is not supported on this CPU/build.
void set_backend(Backend b);

struct CsrView {
  std::span<const std::int32_t> row_ptr;
  std::span<const std::int32_t> col_idx;
  std::span<const double> values;
};

double dot(std::span<const double> x, std::span<const double> y);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y = x + b * y  (CG direction update)
void xpby(std::span<const double> x, double b, std::span<double> y);
/// y = A x
void spmv(const CsrView& a, std::span<const double> x, std::span<double> y);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void spmv(const std::int32_t* row_ptr, const std::int32_t* col, const double* val, const double* x, double* y,
          std::size_t rows);
}  // namespace scalar

#if defined(FEMKIT_HAVE_AVX2)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void xpby(const double* x, double b, double* y, std::size_t n);
void spmv(const std::int32_t* row_ptr, const std::int32_t* col, const double* val, const double* x, double* y,
          std::size_t rows);
}  // namespace avx2
#endif

}  // namespace femkit::simd
