// Golub-Kahan SVD: Householder bidiagonalization, a diagonal phase change that
// makes the bidiagonal real, then implicit-shift QR on the real bidiagonal.
//
// Left and right singular vectors are accumulated as rows ("U^T", "V^T") so
// that every Givens rotation and reflector update runs on contiguous memory.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "epkit/cmatrix.hpp"
#include "epkit/errors.hpp"
#include "epkit/kernels.hpp"

namespace epkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Complex phase_of(Complex z) {
  const double a = std::abs(z);
  return a == 0.0 ? Complex{1.0, 0.0} : z / a;
}

// Hermitian reflector P = I - tau v v^H with P x = beta e1.
struct Reflector {
  ComplexVector v;
  double tau = 0.0;
  Complex beta;
};

Reflector make_reflector(ComplexVector x) {
  Reflector h;
  double tail = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) tail += std::norm(x[i]);
  if (tail == 0.0) {
    h.beta = x.empty() ? Complex{} : x[0];
    h.v = std::move(x);
    return h;  // tau = 0: identity
  }
  const double xnorm = std::sqrt(std::norm(x[0]) + tail);
  h.beta = -phase_of(x[0]) * xnorm;
  x[0] -= h.beta;
  h.tau = 2.0 / kernels::norm_sq(x);
  h.v = std::move(x);
  return h;
}

// M[r0 + i, c0:] <- (I - tau v v^H) M[r0 + i, c0:]
void reflect_rows(ComplexMatrix& m, std::size_t r0, std::size_t c0, const Reflector& h) {
  if (h.tau == 0.0) return;
  const std::size_t width = m.cols() - c0;
  ComplexVector w(width);
  for (std::size_t i = 0; i < h.v.size(); ++i)
    kernels::axpy(std::conj(h.v[i]), m.row(r0 + i).subspan(c0), w);
  for (std::size_t i = 0; i < h.v.size(); ++i)
    kernels::axpy(-h.tau * h.v[i], w, m.row(r0 + i).subspan(c0));
}

// M[r0 + i, c0:] <- conj(I - tau v v^H) M[r0 + i, c0:]
void reflect_rows_conj(ComplexMatrix& m, std::size_t r0, std::size_t c0, const Reflector& h) {
  if (h.tau == 0.0) return;
  const std::size_t width = m.cols() - c0;
  ComplexVector w(width);
  for (std::size_t i = 0; i < h.v.size(); ++i) kernels::axpy(h.v[i], m.row(r0 + i).subspan(c0), w);
  for (std::size_t i = 0; i < h.v.size(); ++i)
    kernels::axpy(-h.tau * std::conj(h.v[i]), w, m.row(r0 + i).subspan(c0));
}

// M[r, c0:] <- M[r, c0:] (I - tau v v^H) for rows r in [r_begin, r_end)
void reflect_cols(ComplexMatrix& m, std::size_t r_begin, std::size_t r_end, std::size_t c0,
                  const Reflector& h) {
  if (h.tau == 0.0) return;
  ComplexVector vconj(h.v.size());
  for (std::size_t j = 0; j < h.v.size(); ++j) vconj[j] = std::conj(h.v[j]);
  for (std::size_t r = r_begin; r < r_end; ++r) {
    auto seg = m.row(r).subspan(c0, h.v.size());
    const Complex s = kernels::dotu(seg, h.v);
    kernels::axpy(-h.tau * s, vconj, seg);
  }
}

void rotate_rows(ComplexMatrix* m, std::size_t i, std::size_t j, double c, double s) {
  if (m != nullptr) kernels::rot(m->row(i), m->row(j), c, Complex{s, 0.0});
}

// Real bidiagonal with diagonal d and superdiagonal e, reduced to diagonal form
// by implicit-shift QR. Rotations are mirrored into ut / vt (rows = vectors).
void bidiagonal_qr(std::vector<double>& d, std::vector<double>& e, ComplexMatrix* ut,
                   ComplexMatrix* vt) {
  const std::size_t n = d.size();
  if (n <= 1) return;

  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    anorm = std::max(anorm, std::abs(d[i]) + (i + 1 < n ? std::abs(e[i]) : 0.0));
  if (anorm == 0.0) return;

  const std::size_t cap = 100 * n * n;
  std::size_t iterations = 0;

  for (;;) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(e[i]) <= kEps * (std::abs(d[i]) + std::abs(d[i + 1])) ||
          std::abs(e[i]) <= std::numeric_limits<double>::min()) {
        e[i] = 0.0;
      }
    }
    // unreduced block [lo, hi]
    std::size_t hi = n - 1;
    while (hi > 0 && e[hi - 1] == 0.0) --hi;
    if (hi == 0) break;
    std::size_t lo = hi - 1;
    while (lo > 0 && e[lo - 1] != 0.0) --lo;

    if (++iterations > cap) throw ConvergenceError("svd: bidiagonal QR did not converge");

    // A zero on the diagonal decouples the block after a rotation chase.
    bool chased = false;
    for (std::size_t i = lo; i < hi; ++i) {
      if (std::abs(d[i]) > kEps * anorm) continue;
      d[i] = 0.0;
      double f = e[i];
      e[i] = 0.0;
      for (std::size_t j = i + 1; j <= hi && f != 0.0; ++j) {
        const double r = std::hypot(d[j], f);
        const double c = d[j] / r;
        const double s = f / r;
        d[j] = r;
        rotate_rows(ut, j, i, c, s);
        if (j < hi) {
          f = -s * e[j];
          e[j] = c * e[j];
        }
      }
      chased = true;
      break;
    }
    if (chased) continue;
    if (std::abs(d[hi]) <= kEps * anorm) {
      d[hi] = 0.0;
      double f = e[hi - 1];
      e[hi - 1] = 0.0;
      for (std::size_t jj = hi; jj-- > lo && f != 0.0;) {
        const double r = std::hypot(d[jj], f);
        const double c = d[jj] / r;
        const double s = f / r;
        d[jj] = r;
        rotate_rows(vt, jj, hi, c, s);
        if (jj > lo) {
          f = -s * e[jj - 1];
          e[jj - 1] = c * e[jj - 1];
        }
      }
      continue;
    }

    // Wilkinson shift from the trailing 2x2 of B^T B.
    const double t11 = d[hi - 1] * d[hi - 1] + (hi - 1 > lo ? e[hi - 2] * e[hi - 2] : 0.0);
    const double t12 = d[hi - 1] * e[hi - 1];
    const double t22 = d[hi] * d[hi] + e[hi - 1] * e[hi - 1];
    const double delta = 0.5 * (t11 - t22);
    double mu = t22;
    if (t12 != 0.0) {
      const double root = std::hypot(delta, t12);
      mu = t22 - t12 * t12 / (delta + (delta >= 0.0 ? root : -root));
    }

    double y = d[lo] * d[lo] - mu;
    double z = d[lo] * e[lo];
    for (std::size_t k = lo; k < hi; ++k) {
      double r = std::hypot(y, z);
      double c = r == 0.0 ? 1.0 : y / r;
      double s = r == 0.0 ? 0.0 : z / r;
      if (k > lo) e[k - 1] = r;
      // right rotation on columns k, k+1
      const double dk = d[k], ek = e[k], dk1 = d[k + 1];
      d[k] = c * dk + s * ek;
      e[k] = -s * dk + c * ek;
      double bulge = s * dk1;
      d[k + 1] = c * dk1;
      rotate_rows(vt, k, k + 1, c, s);

      // left rotation on rows k, k+1 removes the subdiagonal bulge
      y = d[k];
      z = bulge;
      r = std::hypot(y, z);
      c = r == 0.0 ? 1.0 : y / r;
      s = r == 0.0 ? 0.0 : z / r;
      d[k] = r;
      const double ek2 = e[k], dk2 = d[k + 1];
      e[k] = c * ek2 + s * dk2;
      d[k + 1] = -s * ek2 + c * dk2;
      rotate_rows(ut, k, k + 1, c, s);
      if (k + 1 < hi) {
        bulge = s * e[k + 1];
        e[k + 1] = c * e[k + 1];
        y = e[k];
        z = bulge;
      }
    }
  }
}

// SVD of a matrix with rows >= cols.
Svd svd_tall(const ComplexMatrix& a, bool want_vectors) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  ComplexMatrix b = a;
  ComplexMatrix ut, vt;
  if (want_vectors) {
    ut = ComplexMatrix::identity(m);
    vt = ComplexMatrix::identity(n);
  }

  for (std::size_t k = 0; k < n; ++k) {
    ComplexVector x(m - k);
    for (std::size_t i = k; i < m; ++i) x[i - k] = b(i, k);
    const Reflector left = make_reflector(std::move(x));
    reflect_rows(b, k, k, left);
    b(k, k) = left.beta;
    for (std::size_t i = k + 1; i < m; ++i) b(i, k) = 0.0;
    if (want_vectors) reflect_rows_conj(ut, k, 0, left);

    if (k + 2 < n) {
      ComplexVector y(n - k - 1);
      for (std::size_t j = k + 1; j < n; ++j) y[j - k - 1] = std::conj(b(k, j));
      const Reflector right = make_reflector(std::move(y));
      reflect_cols(b, k, m, k + 1, right);
      b(k, k + 1) = std::conj(right.beta);
      for (std::size_t j = k + 2; j < n; ++j) b(k, j) = 0.0;
      if (want_vectors) reflect_rows_conj(vt, k + 1, 0, right);
    }
  }

  // Phase changes that make the bidiagonal real and nonnegative.
  std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
  Complex carry = 1.0;  // accumulated column phase acting on the next diagonal
  for (std::size_t k = 0; k < n; ++k) {
    const Complex dk = b(k, k) * carry;
    const Complex p = phase_of(dk);
    d[k] = std::abs(dk);
    if (want_vectors) kernels::scal(p, ut.row(k));
    if (k + 1 < n) {
      const Complex ek = b(k, k + 1) * std::conj(p);
      const Complex q = std::conj(phase_of(ek));
      e[k] = std::abs(ek);
      carry = q;
      if (want_vectors) kernels::scal(q, vt.row(k + 1));
    }
  }

  bidiagonal_qr(d, e, want_vectors ? &ut : nullptr, want_vectors ? &vt : nullptr);

  for (std::size_t k = 0; k < n; ++k) {
    if (d[k] < 0.0) {
      d[k] = -d[k];
      if (want_vectors) kernels::scal(-1.0, vt.row(k));
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return d[i] > d[j]; });

  Svd out;
  out.s.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.s[k] = d[order[k]];
  if (want_vectors) {
    out.u = ComplexMatrix(m, n);
    out.v = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t src = order[k];
      for (std::size_t r = 0; r < m; ++r) out.u(r, k) = ut(src, r);
      for (std::size_t r = 0; r < n; ++r) out.v(r, k) = vt(src, r);
    }
  }
  return out;
}

}  // namespace

Svd svd(const ComplexMatrix& a) {
  if (a.rows() >= a.cols()) return svd_tall(a, true);
  Svd t = svd_tall(adjoint(a), true);
  return Svd{std::move(t.v), std::move(t.s), std::move(t.u)};
}

std::vector<double> singular_values(const ComplexMatrix& a) {
  if (a.rows() >= a.cols()) return svd_tall(a, false).s;
  return svd_tall(adjoint(a), false).s;
}

int rank(const ComplexMatrix& a, double rtol) {
  if (a.empty()) return 0;
  const auto s = singular_values(a);
  const double threshold = rtol * static_cast<double>(std::max(a.rows(), a.cols())) * s.front();
  return static_cast<int>(std::count_if(s.begin(), s.end(), [&](double v) { return v > threshold; }));
}

ComplexVector kernel_vector(const ComplexMatrix& a, double rtol) {
  // Pad wide matrices with zero rows so V spans the whole domain.
  ComplexMatrix sq = a;
  if (a.rows() < a.cols()) {
    sq = ComplexMatrix(a.cols(), a.cols());
    sq.set_block(0, 0, a);
  }
  const Svd f = svd(sq);
  const std::size_t n = sq.cols();
  const double threshold = rtol * static_cast<double>(std::max(sq.rows(), n)) * f.s.front();
  const auto r = static_cast<std::size_t>(
      std::count_if(f.s.begin(), f.s.end(), [&](double v) { return v > threshold; }));
  if (n - r != 1) {
    throw DegeneracyError("kernel_vector: numerical kernel has dimension " + std::to_string(n - r) +
                          ", expected 1");
  }
  ComplexVector x = f.v.column(n - 1);
  const double nrm = norm2(x);
  double biggest = 0.0;
  for (const auto& z : x) biggest = std::max(biggest, std::abs(z));
  for (const auto& z : x) {
    if (std::abs(z) >= (1.0 - 1e-12) * biggest) {
      const Complex fix = std::conj(phase_of(z)) / nrm;
      for (auto& w : x) w *= fix;
      break;
    }
  }
  return x;
}

ComplexVector min_norm_solve(const ComplexMatrix& a, std::span<const Complex> b, double rtol) {
  if (a.rows() != b.size()) throw ShapeError("min_norm_solve: rhs length does not match rows");
  const Svd f = svd(a);
  const std::size_t k = f.s.size();
  const double smax = f.s.empty() ? 0.0 : f.s.front();
  const double threshold = rtol * static_cast<double>(std::max(a.rows(), a.cols())) * smax;

  ComplexVector x(a.cols());
  double smallest_kept = smax;
  for (std::size_t i = 0; i < k; ++i) {
    if (f.s[i] <= threshold) break;
    smallest_kept = f.s[i];
    Complex coef{};
    for (std::size_t r = 0; r < a.rows(); ++r) coef += std::conj(f.u(r, i)) * b[r];
    coef /= f.s[i];
    for (std::size_t r = 0; r < a.cols(); ++r) x[r] += coef * f.v(r, i);
  }

  // Consistency: the residual may grow with the conditioning of the kept part.
  ComplexVector res = matvec(a, x);
  for (std::size_t r = 0; r < res.size(); ++r) res[r] -= b[r];
  const double bnorm = norm2(b);
  const double cond = smallest_kept > 0.0 ? smax / smallest_kept : 1.0;
  const double allowed =
      rtol * static_cast<double>(std::max(a.rows(), a.cols())) * cond * bnorm;
  if (norm2(res) > allowed) {
    throw NoSolutionError("min_norm_solve: right-hand side is not in the range (residual " +
                          std::to_string(norm2(res)) + ")");
  }
  return x;
}

}  // namespace epkit
