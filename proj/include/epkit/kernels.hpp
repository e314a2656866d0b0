#pragma once

// Contiguous complex-double vector kernels used by the dense linear algebra.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2/FMA variant. The variant is picked once at startup from the CPU
// feature flags; setting EPKIT_KERNELS=scalar in the environment forces the
// reference path. Both variants are exposed directly so they can be compared.

#include <complex>
#include <span>
#include <string_view>

namespace epkit::kernels {

using Complex = std::complex<double>;

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend b) noexcept;

struct KernelTable {
  Backend backend;
  // sum conj(a_i) * b_i
  Complex (*dotc)(std::span<const Complex> a, std::span<const Complex> b);
  // sum a_i * b_i
  Complex (*dotu)(std::span<const Complex> a, std::span<const Complex> b);
  // y += alpha * x
  void (*axpy)(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
  // x *= alpha
  void (*scal)(Complex alpha, std::span<Complex> x);
  // plane rotation, LAPACK zrot convention:
  //   x <- c*x + s*y,  y <- c*y - conj(s)*x
  void (*rot)(std::span<Complex> x, std::span<Complex> y, double c, Complex s);
  // sum |x_i|^2
  double (*norm_sq)(std::span<const Complex> x);
};

namespace scalar {
Complex dotc(std::span<const Complex> a, std::span<const Complex> b);
Complex dotu(std::span<const Complex> a, std::span<const Complex> b);
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
void scal(Complex alpha, std::span<Complex> x);
void rot(std::span<Complex> x, std::span<Complex> y, double c, Complex s);
double norm_sq(std::span<const Complex> x);
}  // namespace scalar

namespace avx2 {
// True when the variant was compiled in and the running CPU supports it.
bool available() noexcept;
Complex dotc(std::span<const Complex> a, std::span<const Complex> b);
Complex dotu(std::span<const Complex> a, std::span<const Complex> b);
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y);
void scal(Complex alpha, std::span<Complex> x);
void rot(std::span<Complex> x, std::span<Complex> y, double c, Complex s);
double norm_sq(std::span<const Complex> x);
}  // namespace avx2

const KernelTable& scalar_table() noexcept;
// Null when the AVX2 variant is unavailable.
const KernelTable* avx2_table() noexcept;

// The table selected for this process. Resolved once, immutable afterwards.
const KernelTable& active() noexcept;

inline Complex dotc(std::span<const Complex> a, std::span<const Complex> b) { return active().dotc(a, b); }
inline Complex dotu(std::span<const Complex> a, std::span<const Complex> b) { return active().dotu(a, b); }
inline void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) { active().axpy(alpha, x, y); }
inline void scal(Complex alpha, std::span<Complex> x) { active().scal(alpha, x); }
inline void rot(std::span<Complex> x, std::span<Complex> y, double c, Complex s) { active().rot(x, y, c, s); }
inline double norm_sq(std::span<const Complex> x) { return active().norm_sq(x); }

}  // namespace epkit::kernels
