#pragma once

// Random generators and small helpers shared by the test binaries.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "epkit/cmatrix.hpp"

namespace epkit::test {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Complex random_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

inline ComplexMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (auto& z : m.entries()) z = random_complex(rng);
  return m;
}

inline ComplexVector random_vector(Rng& rng, std::size_t n) {
  ComplexVector v(n);
  for (auto& z : v) z = random_complex(rng);
  return v;
}

/// Product of a rows x r and an r x cols Gaussian matrix: rank r almost surely.
inline ComplexMatrix random_rank_matrix(Rng& rng, std::size_t rows, std::size_t cols, std::size_t r) {
  if (r == 0) return ComplexMatrix(rows, cols);
  return random_matrix(rng, rows, r) * random_matrix(rng, r, cols);
}

/// Haar-ish unitary from modified Gram-Schmidt on a Gaussian matrix.
inline ComplexMatrix random_unitary(Rng& rng, std::size_t n) {
  std::vector<ComplexVector> cols;
  for (std::size_t c = 0; c < n; ++c) {
    ComplexVector v = random_vector(rng, n);
    for (const auto& q : cols) {
      const Complex p = inner(q, v);
      for (std::size_t i = 0; i < n; ++i) v[i] -= p * q[i];
    }
    const double nv = norm2(v);
    for (auto& z : v) z /= nv;
    cols.push_back(std::move(v));
  }
  ComplexMatrix q(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) q(r, c) = cols[c][r];
  return q;
}

/// Well-conditioned similarity S = U diag(d) V with d in [1/2, 2] and its exact-form inverse.
struct Similarity {
  ComplexMatrix s;
  ComplexMatrix s_inv;
};

inline Similarity random_similarity(Rng& rng, std::size_t n) {
  const ComplexMatrix u = random_unitary(rng, n);
  const ComplexMatrix v = random_unitary(rng, n);
  ComplexVector d(n), d_inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = uniform(rng, 0.5, 2.0);
    d_inv[i] = 1.0 / d[i];
  }
  return {u * ComplexMatrix::diagonal(d) * v, adjoint(v) * ComplexMatrix::diagonal(d_inv) * adjoint(u)};
}

inline ComplexMatrix jordan_block(std::size_t n, Complex diag = 0.0) {
  ComplexMatrix j(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    j(i, i) = diag;
    if (i + 1 < n) j(i, i + 1) = 1.0;
  }
  return j;
}

inline ComplexMatrix transform(const Similarity& t, const ComplexMatrix& a) { return t.s * a * t.s_inv; }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

}  // namespace epkit::test
