// Eigenvalues of a general complex matrix: Householder reduction to upper
// Hessenberg form, then single-shift implicit QR with deflation on the active
// window (eigenvalues only, so transformations never leave the window).

#include <algorithm>
#include <cmath>
#include <limits>

#include "epkit/cmatrix.hpp"
#include "epkit/errors.hpp"
#include "epkit/kernels.hpp"

namespace epkit {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min();

void reduce_to_hessenberg(ComplexMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  ComplexVector v, w(n), vconj;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    double tail = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail += std::norm(h(i, k));
    if (tail == 0.0) continue;

    v.assign(len, Complex{});
    for (std::size_t i = 0; i < len; ++i) v[i] = h(k + 1 + i, k);
    const double xnorm = std::sqrt(std::norm(v[0]) + tail);
    const double a0 = std::abs(v[0]);
    const Complex beta = -(a0 == 0.0 ? Complex{1.0} : v[0] / a0) * xnorm;
    v[0] -= beta;
    const double tau = 2.0 / kernels::norm_sq(v);

    // left: rows k+1.., columns k..
    std::fill(w.begin(), w.end(), Complex{});
    auto wk = std::span<Complex>(w).subspan(k);
    for (std::size_t i = 0; i < len; ++i) kernels::axpy(std::conj(v[i]), h.row(k + 1 + i).subspan(k), wk);
    for (std::size_t i = 0; i < len; ++i) kernels::axpy(-tau * v[i], wk, h.row(k + 1 + i).subspan(k));

    // right: all rows, columns k+1..
    vconj.resize(len);
    for (std::size_t j = 0; j < len; ++j) vconj[j] = std::conj(v[j]);
    for (std::size_t r = 0; r < n; ++r) {
      auto seg = h.row(r).subspan(k + 1, len);
      const Complex s = kernels::dotu(seg, v);
      kernels::axpy(-tau * s, vconj, seg);
    }

    h(k + 1, k) = beta;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

// Ahues-Tisseur style test for a negligible subdiagonal h(k, k-1).
bool negligible(const ComplexMatrix& h, std::size_t k) {
  const double sub = std::abs(h(k, k - 1));
  if (sub <= kSafeMin) return true;
  double tst = std::abs(h(k - 1, k - 1)) + std::abs(h(k, k));
  if (tst == 0.0) {
    if (k >= 2) tst += std::abs(h(k - 1, k - 2));
    if (k + 1 < h.rows()) tst += std::abs(h(k + 1, k));
  }
  if (sub <= kUlp * tst) return true;
  const double ab = std::max(sub, std::abs(h(k - 1, k)));
  const double ba = std::min(sub, std::abs(h(k - 1, k)));
  const double diff = std::abs(h(k - 1, k - 1) - h(k, k));
  const double aa = std::max(std::abs(h(k, k)), diff);
  const double bb = std::min(std::abs(h(k, k)), diff);
  const double s = aa + ab;
  return ba * (ab / s) <= std::max(kSafeMin, kUlp * (bb * (aa / s)));
}

// Eigenvalue of the trailing 2x2 block [[a, b], [c, d]] closest to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half = 0.5 * (a - d);
  const Complex disc = std::sqrt(half * half + b * c);
  const Complex denom = std::abs(half + disc) >= std::abs(half - disc) ? half + disc : half - disc;
  if (std::abs(denom) == 0.0) return d;
  return d - b * c / denom;
}

// Rotation G = [[c, s], [-conj(s), c]] with G [x; y] = [r; 0].
void make_rotation(Complex x, Complex y, double& c, Complex& s) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ay == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (ax == 0.0) {
    c = 0.0;
    s = std::conj(y) / ay;
    return;
  }
  const double r = std::hypot(ax, ay);
  c = ax / r;
  s = (x / ax) * std::conj(y) / r;
}

}  // namespace

void sort_lexicographic(std::vector<Complex>& values) {
  std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

std::vector<Complex> eigenvalues(const ComplexMatrix& a) {
  if (!a.is_square()) throw ShapeError("eigenvalues: matrix is not square");
  const std::size_t n = a.rows();
  std::vector<Complex> ev(n);
  if (n == 0) return ev;

  ComplexMatrix h = a;
  reduce_to_hessenberg(h);

  const std::size_t cap = 100 * n;
  std::size_t total = 0;
  std::size_t since_deflation = 0;
  std::size_t hi = n - 1;
  ComplexVector colk, colk1;

  for (;;) {
    std::size_t lo = hi;
    while (lo > 0 && !negligible(h, lo)) --lo;
    if (lo > 0) h(lo, lo - 1) = 0.0;

    if (lo == hi) {
      ev[hi] = h(hi, hi);
      since_deflation = 0;
      if (hi == 0) break;
      --hi;
      continue;
    }

    if (++total > cap) throw ConvergenceError("eigenvalues: QR iteration did not converge");
    ++since_deflation;

    Complex mu;
    if (since_deflation % 10 == 0) {
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    for (std::size_t k = lo; k < hi; ++k) {
      const Complex x = k == lo ? h(k, k) - mu : h(k, k - 1);
      const Complex y = k == lo ? h(k + 1, k) : h(k + 1, k - 1);
      double c;
      Complex s;
      make_rotation(x, y, c, s);

      const std::size_t c0 = k == lo ? lo : k - 1;
      const std::size_t width = hi + 1 - c0;
      kernels::rot(h.row(k).subspan(c0, width), h.row(k + 1).subspan(c0, width), c, s);
      if (k > lo) h(k + 1, k - 1) = 0.0;

      const std::size_t r_end = std::min(k + 2, hi);
      for (std::size_t r = lo; r <= r_end; ++r) {
        const Complex hk = h(r, k);
        const Complex hk1 = h(r, k + 1);
        h(r, k) = c * hk + std::conj(s) * hk1;
        h(r, k + 1) = -s * hk + c * hk1;
      }
    }
  }

  sort_lexicographic(ev);
  return ev;
}

}  // namespace epkit
