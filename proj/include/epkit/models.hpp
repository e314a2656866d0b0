#pragma once

// PT-symmetric dimer and trimer with their EP conditions built in, and the
// single-entry unidirectional coupling used to chain them. All parameters are
// dimensionless.

#include "epkit/cmatrix.hpp"
#include "epkit/compose.hpp"

namespace epkit::models {

/// [[w0 + i a, g], [g, w0 - i a]] with a = g (EP of order 2, xi = 2g).
ComplexMatrix pt_dimer(double omega0, double g_a);

/// Trimer with gain/loss a on the outer sites and a = sqrt(2) g
/// (EP of order 3, xi = 4 g^2).
ComplexMatrix pt_trimer(double omega0, double g_b);

/// Free gain/loss variants for off-EP studies; no EP certification.
ComplexMatrix pt_dimer_detuned(double omega0, double g_a, double alpha_a);
ComplexMatrix pt_trimer_detuned(double omega0, double g_b, double alpha_b);

/// n_b x n_a matrix holding k at the 1-based position (row, col).
ComplexMatrix single_entry_coupling(Complex k, std::size_t n_b, std::size_t n_a, std::size_t row,
                                    std::size_t col);

/// Dimer coupled into the trimer, gain site to gain site (K(1,1) = k).
CompositeSystem dimer_trimer_system(double omega0, double g_a, double g_b, Complex k);

// Closed forms for the built-in systems.
inline double dimer_response(double g_a) { return 2.0 * g_a; }
inline double trimer_response(double g_b) { return 4.0 * g_b * g_b; }
double dimer_trimer_response(double g_a, double g_b, Complex k);

}  // namespace epkit::models
