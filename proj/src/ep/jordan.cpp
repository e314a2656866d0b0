#include "epkit/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "epkit/errors.hpp"

namespace epkit {

double ChainResiduals::worst() const { return std::max({kernel, chain, normalization, orthogonality}); }

ChainResiduals chain_residuals(const ComplexMatrix& nilpotent, const std::vector<ComplexVector>& vectors) {
  ChainResiduals r;
  if (vectors.empty()) return r;
  const double nnorm = spectral_norm(nilpotent);
  const ComplexVector n1 = matvec(nilpotent, vectors[0]);
  r.kernel = nnorm > 0.0 ? norm2(n1) / nnorm : norm2(n1);
  for (std::size_t l = 1; l < vectors.size(); ++l) {
    ComplexVector d = matvec(nilpotent, vectors[l]);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] -= vectors[l - 1][i];
    r.chain = std::max(r.chain, norm2(d) / norm2(vectors[l - 1]));
  }
  r.normalization = std::abs(inner(vectors[0], vectors[0]) - 1.0);
  const ComplexVector& last = vectors.back();
  const double last_norm = norm2(last);
  for (std::size_t l = 0; l + 1 < vectors.size(); ++l) {
    r.orthogonality =
        std::max(r.orthogonality, std::abs(inner(last, vectors[l])) / (last_norm * norm2(vectors[l])));
  }
  return r;
}

namespace {

// argmin_a ||M a - b|| for M with full column rank.
ComplexVector least_squares(const ComplexMatrix& m, std::span<const Complex> b) {
  const Svd f = svd(m);
  ComplexVector x(m.cols());
  for (std::size_t i = 0; i < f.s.size(); ++i) {
    if (f.s[i] == 0.0) continue;
    Complex coef{};
    for (std::size_t r = 0; r < m.rows(); ++r) coef += std::conj(f.u(r, i)) * b[r];
    coef /= f.s[i];
    for (std::size_t r = 0; r < m.cols(); ++r) x[r] += coef * f.v(r, i);
  }
  return x;
}

}  // namespace

JordanChain jordan_chain(const EpReport& report, double tol) {
  if (!report.full_order()) {
    throw PreconditionError("jordan_chain: matrix is not an EP of full order " + std::to_string(report.dim));
  }
  const ComplexMatrix& nil = report.nilpotent;
  const std::size_t n = report.dim;

  std::vector<ComplexVector> raw;
  raw.reserve(n);
  try {
    raw.push_back(kernel_vector(nil));
    for (std::size_t l = 1; l < n; ++l) raw.push_back(min_norm_solve(nil, raw.back()));
  } catch (const Error& e) {
    throw StructureError(std::string("jordan_chain: not a single Jordan block: ") + e.what());
  }

  // Gauge: j'_l = j_l + sum_{m=1}^{l-1} a_m j_{l-m}, with a chosen so that
  // j'_n is orthogonal to span{j_1, ..., j_{n-1}}.
  std::vector<Complex> a(n, Complex{});
  if (n > 1) {
    ComplexMatrix m(n, n - 1);
    for (std::size_t col = 0; col + 1 < n; ++col)
      for (std::size_t r = 0; r < n; ++r) m(r, col) = raw[n - 2 - col][r];  // column m-1 holds j_{n-m}
    const ComplexVector sol = least_squares(m, scaled(raw[n - 1], -1.0));
    for (std::size_t i = 0; i + 1 < n; ++i) a[i + 1] = sol[i];
  }

  JordanChain chain;
  chain.nilpotent = nil;
  chain.vectors.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    ComplexVector v = raw[l];
    for (std::size_t m = 1; m <= l; ++m)
      for (std::size_t r = 0; r < n; ++r) v[r] += a[m] * raw[l - m][r];
    chain.vectors[l] = std::move(v);
  }
  chain.residuals = chain_residuals(nil, chain.vectors);
  if (chain.residuals.worst() > tol) {
    throw StructureError("jordan_chain: chain conditions violated (worst residual " +
                         std::to_string(chain.residuals.worst()) + ")");
  }
  return chain;
}

double response_from_chain(const JordanChain& chain) {
  if (chain.vectors.empty()) throw PreconditionError("response_from_chain: empty chain");
  return 1.0 / norm2(chain.last());
}

Complex coupling_amplitude(const JordanChain& chain_b, std::span<const Complex> psi_ep_a,
                           const ComplexMatrix& k) {
  if (chain_b.vectors.empty()) throw PreconditionError("coupling_amplitude: empty chain");
  if (k.rows() != chain_b.last().size() || k.cols() != psi_ep_a.size()) {
    throw ShapeError("coupling_amplitude: coupling must map subsystem a onto subsystem b");
  }
  if (std::abs(norm2(psi_ep_a) - 1.0) > 1e-12) {
    throw ParameterError("coupling_amplitude: EP state of subsystem a must be unit normalized");
  }
  const ComplexVector unit_last = scaled(chain_b.last(), 1.0 / norm2(chain_b.last()));
  return inner(unit_last, matvec(k, psi_ep_a));
}

}  // namespace epkit
