#include "epkit/cmatrix.hpp"

#include <cmath>
#include <string>

#include "epkit/errors.hpp"
#include "epkit/kernels.hpp"

namespace epkit {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("matrix: expected " + std::to_string(rows_ * cols_) + " entries, got " +
                     std::to_string(data_.size()));
  }
  if (!all_finite()) throw ParameterError("matrix: non-finite entry");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("matrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
  ComplexVector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeError("block: out of range");
  ComplexMatrix b(nr, nc);
  for (std::size_t r = 0; r < nr; ++r)
    for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
  return b;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw ShapeError("set_block: out of range");
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
}

bool ComplexMatrix::all_finite() const noexcept {
  for (const auto& z : data_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "add");
  kernels::axpy(1.0, o.data_, data_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "subtract");
  kernels::axpy(-1.0, o.data_, data_);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  kernels::scal(s, data_);
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                     std::to_string(b.rows()) + " differ");
  }
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik != Complex{}) kernels::axpy(aik, b.row(k), out);
    }
  }
  return c;
}

ComplexVector matvec(const ComplexMatrix& a, std::span<const Complex> x) {
  if (a.cols() != x.size()) throw ShapeError("matvec: dimension mismatch");
  ComplexVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = kernels::dotu(a.row(i), x);
  return y;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
  ComplexMatrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = std::conj(a(r, c));
  return t;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
  ComplexMatrix t = a;
  for (auto& z : t.entries()) z = std::conj(z);
  return t;
}

Complex trace(const ComplexMatrix& a) {
  if (!a.is_square()) throw ShapeError("trace: matrix is not square");
  Complex t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

ComplexMatrix power(const ComplexMatrix& a, int k) {
  if (!a.is_square()) throw ShapeError("power: matrix is not square");
  if (k < 0) throw ParameterError("power: negative exponent");
  ComplexMatrix p = ComplexMatrix::identity(a.rows());
  for (int i = 0; i < k; ++i) p = matmul(p, a);
  return p;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("inner: dimension mismatch");
  return kernels::dotc(a, b);
}

double norm2(std::span<const Complex> x) { return std::sqrt(kernels::norm_sq(x)); }

ComplexVector scaled(std::span<const Complex> x, Complex s) {
  ComplexVector y(x.begin(), x.end());
  kernels::scal(s, y);
  return y;
}

double frobenius_norm(const ComplexMatrix& a) { return std::sqrt(kernels::norm_sq(a.entries())); }

double spectral_norm(const ComplexMatrix& a) {
  if (a.empty()) return 0.0;
  return singular_values(a).front();
}

}  // namespace epkit
