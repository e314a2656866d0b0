#pragma once

// Dense complex matrices and the small set of factorizations the EP analysis
// needs: SVD (norms, rank, kernel, minimum-norm solves) and the eigenvalues of
// a general complex matrix.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace epkit {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kDefaultRtol = 1e-12;

/// Row-major dense complex matrix with value semantics.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major `entries`; throws ShapeError on a length
  /// mismatch and ParameterError on non-finite entries.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const Complex> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const Complex> entries() const noexcept { return data_; }
  std::span<Complex> entries() noexcept { return data_; }

  ComplexVector column(std::size_t c) const;

  /// Copy of the block [r0, r0+nr) x [c0, c0+nc).
  ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);

  bool all_finite() const noexcept;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector matvec(const ComplexMatrix& a, std::span<const Complex> x);
ComplexMatrix adjoint(const ComplexMatrix& a);
ComplexMatrix conjugate(const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);
/// a^k by repeated multiplication; a^0 is the identity.
ComplexMatrix power(const ComplexMatrix& a, int k);

Complex inner(std::span<const Complex> a, std::span<const Complex> b);  // <a|b>
double norm2(std::span<const Complex> x);
ComplexVector scaled(std::span<const Complex> x, Complex s);

double frobenius_norm(const ComplexMatrix& a);
double spectral_norm(const ComplexMatrix& a);

/// Thin SVD A = U diag(s) V^H. For an m x n matrix with k = min(m, n), U is
/// m x k, V is n x k and s is descending and nonnegative.
struct Svd {
  ComplexMatrix u;
  std::vector<double> s;
  ComplexMatrix v;
};

Svd svd(const ComplexMatrix& a);
std::vector<double> singular_values(const ComplexMatrix& a);

/// Number of singular values above rtol * max(rows, cols) * sigma_max.
int rank(const ComplexMatrix& a, double rtol = kDefaultRtol);

/// Unit vector spanning a one-dimensional numerical kernel. The phase is fixed
/// so the first component of largest modulus is real and positive.
ComplexVector kernel_vector(const ComplexMatrix& a, double rtol = kDefaultRtol);

/// Minimum-norm least-squares solution of A x = b via the truncated SVD.
/// Throws NoSolutionError when b is not in the numerical range of A.
ComplexVector min_norm_solve(const ComplexMatrix& a, std::span<const Complex> b,
                             double rtol = kDefaultRtol);

/// All eigenvalues with multiplicity, sorted by real part then imaginary part.
std::vector<Complex> eigenvalues(const ComplexMatrix& a);

/// Sorting convention used by eigenvalues().
void sort_lexicographic(std::vector<Complex>& values);

}  // namespace epkit
