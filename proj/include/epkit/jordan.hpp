#pragma once

// Gauge-fixed Jordan chains of a full-order EP, the response strength read
// off the last Jordan vector, and the coupling amplitude between two EPs.

#include <vector>

#include "epkit/cmatrix.hpp"
#include "epkit/ep_core.hpp"

namespace epkit {

/// Achieved residuals of the chain conditions, all dimensionless.
struct ChainResiduals {
  double kernel = 0.0;         // ||N j_1|| / ||N||
  double chain = 0.0;          // max_l ||N j_l - j_{l-1}|| / ||j_{l-1}||, l >= 2
  double normalization = 0.0;  // |<j_1|j_1> - 1|
  double orthogonality = 0.0;  // max_{l<n} |<j_n|j_l>| / (||j_n|| ||j_l||)

  double worst() const;
};

struct JordanChain {
  ComplexMatrix nilpotent;
  std::vector<ComplexVector> vectors;  // j_1 ... j_n, j_1 = psi_EP
  ChainResiduals residuals;

  std::size_t length() const { return vectors.size(); }
  const ComplexVector& eigenvector() const { return vectors.front(); }
  const ComplexVector& last() const { return vectors.back(); }
};

inline constexpr double kDefaultChainTol = 1e-10;

ChainResiduals chain_residuals(const ComplexMatrix& nilpotent, const std::vector<ComplexVector>& vectors);

/// Builds j_1 from the kernel of N, later vectors by minimum-norm solves, then
/// fixes the gauge so <j_1|j_1> = 1 and j_n is orthogonal to j_1..j_{n-1}.
/// Throws StructureError when any residual exceeds tol.
JordanChain jordan_chain(const EpReport& report, double tol = kDefaultChainTol);

/// xi = 1 / ||j_n||
double response_from_chain(const JordanChain& chain);

/// <j~_b | K | psi_a> with j~_b the unit-normalized last Jordan vector of b.
Complex coupling_amplitude(const JordanChain& chain_b, std::span<const Complex> psi_ep_a,
                           const ComplexMatrix& k);

}  // namespace epkit
