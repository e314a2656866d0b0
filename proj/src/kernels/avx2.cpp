// AVX2/FMA kernels. Two complex doubles per 256-bit register, stored in the
// std::complex interleaved layout [re0 im0 re1 im1]. This translation unit is
// built with -mavx2 -mfma and must only be entered after avx2::available().

#include "epkit/kernels.hpp"

#if defined(EPKIT_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace epkit::kernels::avx2 {

#if defined(EPKIT_HAVE_AVX2)

namespace {

inline const double* raw(std::span<const Complex> v) { return reinterpret_cast<const double*>(v.data()); }
inline double* raw(std::span<Complex> v) { return reinterpret_cast<double*>(v.data()); }

// [re im re im] -> [im re im re]
inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0x5); }

// alpha * x for a broadcast complex alpha = (pr, pi)
inline __m256d cmul(__m256d x, __m256d pr, __m256d pi) {
  return _mm256_fmaddsub_pd(x, pr, _mm256_mul_pd(swap_pairs(x), pi));
}

// conj(alpha) * x
inline __m256d cmul_conj(__m256d x, __m256d pr, __m256d pi) {
  return _mm256_fmsubadd_pd(x, pr, _mm256_mul_pd(swap_pairs(x), pi));
}

inline double lane(__m256d v, int i) {
  alignas(32) double tmp[4];
  _mm256_store_pd(tmp, v);
  return tmp[i];
}

}  // namespace

bool available() noexcept {
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
}

Complex dotc(std::span<const Complex> a, std::span<const Complex> b) {
  const std::size_t n = a.size();
  const double* pa = raw(a);
  const double* pb = raw(b);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);              // ar*br, ai*bi
    acc_im = _mm256_fmadd_pd(va, swap_pairs(vb), acc_im);  // ar*bi, ai*br
  }
  double re = lane(acc_re, 0) + lane(acc_re, 1) + lane(acc_re, 2) + lane(acc_re, 3);
  double im = (lane(acc_im, 0) - lane(acc_im, 1)) + (lane(acc_im, 2) - lane(acc_im, 3));
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

Complex dotu(std::span<const Complex> a, std::span<const Complex> b) {
  const std::size_t n = a.size();
  const double* pa = raw(a);
  const double* pb = raw(b);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    acc_im = _mm256_fmadd_pd(va, swap_pairs(vb), acc_im);
  }
  double re = (lane(acc_re, 0) - lane(acc_re, 1)) + (lane(acc_re, 2) - lane(acc_re, 3));
  double im = lane(acc_im, 0) + lane(acc_im, 1) + lane(acc_im, 2) + lane(acc_im, 3);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  const std::size_t n = x.size();
  const double* px = raw(x);
  double* py = raw(y);
  const __m256d pr = _mm256_set1_pd(alpha.real());
  const __m256d pi = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d vy = _mm256_loadu_pd(py + 2 * i);
    _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(vy, cmul(vx, pr, pi)));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + (xr * alpha.real() - xi * alpha.imag()),
            y[i].imag() + (xi * alpha.real() + xr * alpha.imag())};
  }
}

void scal(Complex alpha, std::span<Complex> x) {
  const std::size_t n = x.size();
  double* px = raw(x);
  const __m256d pr = _mm256_set1_pd(alpha.real());
  const __m256d pi = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    _mm256_storeu_pd(px + 2 * i, cmul(_mm256_loadu_pd(px + 2 * i), pr, pi));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    x[i] = {xr * alpha.real() - xi * alpha.imag(), xi * alpha.real() + xr * alpha.imag()};
  }
}

void rot(std::span<Complex> x, std::span<Complex> y, double c, Complex s) {
  const std::size_t n = x.size();
  double* px = raw(x);
  double* py = raw(y);
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d sr = _mm256_set1_pd(s.real());
  const __m256d si = _mm256_set1_pd(s.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = _mm256_loadu_pd(px + 2 * i);
    const __m256d vy = _mm256_loadu_pd(py + 2 * i);
    const __m256d nx = _mm256_fmadd_pd(vc, vx, cmul(vy, sr, si));
    const __m256d ny = _mm256_fmsub_pd(vc, vy, cmul_conj(vx, sr, si));
    _mm256_storeu_pd(px + 2 * i, nx);
    _mm256_storeu_pd(py + 2 * i, ny);
  }
  for (; i < n; ++i) {
    const Complex xv = x[i], yv = y[i];
    const double syr = s.real() * yv.real() - s.imag() * yv.imag();
    const double syi = s.real() * yv.imag() + s.imag() * yv.real();
    const double sxr = s.real() * xv.real() + s.imag() * xv.imag();
    const double sxi = s.real() * xv.imag() - s.imag() * xv.real();
    x[i] = {c * xv.real() + syr, c * xv.imag() + syi};
    y[i] = {c * yv.real() - sxr, c * yv.imag() - sxi};
  }
}

double norm_sq(std::span<const Complex> x) {
  const std::size_t n = x.size();
  const double* px = raw(x);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(px + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = (lane(acc, 0) + lane(acc, 1)) + (lane(acc, 2) + lane(acc, 3));
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

#else  // !EPKIT_HAVE_AVX2

bool available() noexcept { return false; }
Complex dotc(std::span<const Complex> a, std::span<const Complex> b) { return scalar::dotc(a, b); }
Complex dotu(std::span<const Complex> a, std::span<const Complex> b) { return scalar::dotu(a, b); }
void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) { scalar::axpy(alpha, x, y); }
void scal(Complex alpha, std::span<Complex> x) { scalar::scal(alpha, x); }
void rot(std::span<Complex> x, std::span<Complex> y, double c, Complex s) { scalar::rot(x, y, c, s); }
double norm_sq(std::span<const Complex> x) { return scalar::norm_sq(x); }

#endif

}  // namespace epkit::kernels::avx2
