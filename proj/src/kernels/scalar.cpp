// Reference kernels. Compiled with -ffp-contract=off so every product and
// sum is rounded separately; the SIMD variants are checked against these.

#include "epkit/kernels.hpp"

#include <cassert>

namespace epkit::kernels::scalar {

Complex dotc(std::span<const Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br + ai * bi;
    im += ar * bi - ai * br;
  }
  return {re, im};
}

Complex dotu(std::span<const Complex> a, std::span<const Complex> b) {
  assert(a.size() == b.size());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    re += ar * br - ai * bi;
    im += ar * bi + ai * br;
  }
  return {re, im};
}

void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  assert(x.size() == y.size());
  const double pr = alpha.real(), pi = alpha.imag();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = {y[i].real() + (xr * pr - xi * pi), y[i].imag() + (xi * pr + xr * pi)};
  }
}

void scal(Complex alpha, std::span<Complex> x) {
  const double pr = alpha.real(), pi = alpha.imag();
  for (auto& v : x) {
    const double xr = v.real(), xi = v.imag();
    v = {xr * pr - xi * pi, xi * pr + xr * pi};
  }
}

void rot(std::span<Complex> x, std::span<Complex> y, double c, Complex s) {
  assert(x.size() == y.size());
  const double sr = s.real(), si = s.imag();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    // s*y and conj(s)*x
    const double syr = sr * yr - si * yi, syi = sr * yi + si * yr;
    const double sxr = sr * xr + si * xi, sxi = sr * xi - si * xr;
    x[i] = {c * xr + syr, c * xi + syi};
    y[i] = {c * yr - sxr, c * yi - sxi};
  }
}

double norm_sq(std::span<const Complex> x) {
  double acc = 0.0;
  for (const auto& v : x) acc += v.real() * v.real() + v.imag() * v.imag();
  return acc;
}

}  // namespace epkit::kernels::scalar
