#pragma once

// Exceptional-point detection through the nilpotency of the traceless part,
// the spectral response strength, the resolvent expansion around the EP and
// the leading-order splitting predictions and bounds.

#include <optional>
#include <vector>

#include "epkit/cmatrix.hpp"

namespace epkit {

/// Default scale-aware nilpotency threshold for a dim x dim matrix.
inline double default_nil_tol(std::size_t dim) { return 1e-10 * static_cast<double>(dim); }

inline constexpr double kMachineEpsilon = 2.22e-16;

struct TracelessPart {
  Complex shift;      // trace / dim
  ComplexMatrix nilpotent;  // H - shift * I
};

TracelessPart traceless_part(const ComplexMatrix& h);

/// Smallest k <= dim with ||N^k||_2 <= nil_tol * ||N||_2^k, or nullopt.
std::optional<int> nilpotency_index(const ComplexMatrix& n, double nil_tol);
inline std::optional<int> nilpotency_index(const ComplexMatrix& n) {
  return nilpotency_index(n, default_nil_tol(n.rows()));
}

struct EpReport {
  std::size_t dim = 0;
  std::optional<int> order;  // nullopt: traceless part is not nilpotent
  Complex ep_eigenvalue;
  ComplexMatrix nilpotent;
  std::optional<double> response_strength;  // present only at a full-order EP

  /// True when the matrix is an EP of order dim.
  bool full_order() const { return order && static_cast<std::size_t>(*order) == dim; }
  /// Nilpotent, but of index below dim.
  bool partial() const { return order && static_cast<std::size_t>(*order) < dim; }
};

EpReport detect_ep(const ComplexMatrix& h, double nil_tol);
inline EpReport detect_ep(const ComplexMatrix& h) { return detect_ep(h, default_nil_tol(h.rows())); }

/// xi = ||N^{n-1}||_2; checks that it agrees with the Frobenius norm.
/// Throws PreconditionError unless H is a full-order EP.
double response_strength(const ComplexMatrix& h, double nil_tol);
inline double response_strength(const ComplexMatrix& h) {
  return response_strength(h, default_nil_tol(h.rows()));
}

/// G(E) = sum_{k<n} N^k / (E - eps_EP)^{k+1}.
ComplexMatrix greens_function(const EpReport& report, Complex energy);

/// (eps * ||H1||_2 * xi)^{1/n}
double splitting_bound(double xi, double eps, double h1_spectral_norm, int n);

/// (2 sqrt(n) * eps_mp * xi)^{1/n}, with 2 sqrt(n) the random-matrix norm estimate.
double machine_precision_bound(double xi, int n, double eps_mp = kMachineEpsilon);

struct SplittingPrediction {
  int n = 0;
  Complex radicand;           // eps * tr(N^{n-1} H1)
  Complex sandwich_radicand;  // eps * <psi_EP| N^{n-1} H1 |psi_EP>
  std::vector<Complex> predicted_eigenvalues;
};

/// Leading-order eigenvalue fan of H + eps*H1 around a full-order EP.
SplittingPrediction predicted_splitting(const EpReport& report, const ComplexMatrix& h1, double eps);

/// Same prediction, but with N^{n-1} and psi_EP supplied by the caller (used
/// when the top power is known in structured form).
SplittingPrediction predicted_splitting(Complex ep_eigenvalue, const ComplexMatrix& top_power,
                                        std::span<const Complex> psi_ep, const ComplexMatrix& h1,
                                        double eps);

/// The n values ep + radicand^{1/n} * exp(2 pi i k / n).
std::vector<Complex> root_fan(Complex ep_eigenvalue, Complex radicand, int n);

/// Minimum-cost matching (cost |a_i - b_j|) between two equally long sets;
/// returns assignment[i] = j.
std::vector<std::size_t> match_min_cost(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace epkit
