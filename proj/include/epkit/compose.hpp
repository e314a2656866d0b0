#pragma once

// Hierarchical composition of two EPs through a unidirectional coupling:
//
//        | H_a  0  |
//    H = |         |      K maps subsystem a (n_a) into subsystem b (n_b).
//        | K    H_b|
//
// The composite is an EP of order n_a + n_b iff C = N_b^{n_b-1} K N_a^{n_a-1}
// is nonzero, and then its response strength is ||C||.

#include <vector>

#include "epkit/cmatrix.hpp"
#include "epkit/ep_core.hpp"

namespace epkit {

inline constexpr double kEigenvalueMatchTol = 1e-10;

struct CompositeSystem {
  ComplexMatrix h_a;
  ComplexMatrix h_b;
  ComplexMatrix k;
  ComplexMatrix h;
  Complex ep_eigenvalue;
  EpReport report_a;
  EpReport report_b;

  std::size_t n_a() const { return h_a.rows(); }
  std::size_t n_b() const { return h_b.rows(); }
  std::size_t dim() const { return h.rows(); }
  const ComplexMatrix& nilpotent_a() const { return report_a.nilpotent; }
  const ComplexMatrix& nilpotent_b() const { return report_b.nilpotent; }
  /// Traceless part of the assembled H.
  ComplexMatrix nilpotent() const;
};

struct ComposeOptions {
  double eigenvalue_tol = kEigenvalueMatchTol;
  /// Shift H_b by (eps_a - eps_b) I instead of rejecting a mismatch.
  bool shift_b = false;
};

/// Throws PreconditionError unless both subsystems are full-order EPs,
/// IncompatibleSubsystemsError on an eigenvalue mismatch and ShapeError when
/// K is not n_b x n_a.
CompositeSystem block_compose(const ComplexMatrix& h_a, const ComplexMatrix& h_b, const ComplexMatrix& k,
                              const ComposeOptions& options = {});

/// Folds block_compose left to right: ((H_0, H_1; K_0), H_2; K_1) ...
/// couplings[i] maps the accumulated system onto subsystems[i + 1].
CompositeSystem compose_chain(const std::vector<ComplexMatrix>& subsystems,
                              const std::vector<ComplexMatrix>& couplings,
                              const ComposeOptions& options = {});

/// C = N_b^{n_b-1} K N_a^{n_a-1}
ComplexMatrix genericity_product(const CompositeSystem& sys);

/// Scale-aware threshold below which C counts as zero.
double genericity_threshold(const CompositeSystem& sys);
bool is_generic(const CompositeSystem& sys);

/// N^{n_a+n_b-1} in structured form: zero except the lower-left block C.
ComplexMatrix structured_top_power(const CompositeSystem& sys);

/// xi = ||C||_2 (= ||C||_F). Throws DegenerateCouplingError naming the lower
/// order that the assembled system actually reaches when C vanishes.
double composite_response(const CompositeSystem& sys);

/// xi_a * xi_b * ||K||_2
double response_upper_bound(double xi_a, double xi_b, const ComplexMatrix& k);

/// Leading-order splitting of H + eps*H1 using the structured top power, so
/// block-preserving perturbations give an exactly vanishing radicand.
SplittingPrediction predicted_splitting(const CompositeSystem& sys, const ComplexMatrix& h1, double eps);

}  // namespace epkit
