#include "epkit/models.hpp"

#include <cmath>
#include <string>
#include <numbers>

#include "epkit/errors.hpp"

namespace epkit::models {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be positive");
}

}  // namespace

ComplexMatrix pt_dimer_detuned(double omega0, double g_a, double alpha_a) {
  require_positive(g_a, "pt_dimer: g_a");
  require_positive(alpha_a, "pt_dimer: alpha_a");
  return {{Complex{omega0, alpha_a}, g_a}, {g_a, Complex{omega0, -alpha_a}}};
}

ComplexMatrix pt_trimer_detuned(double omega0, double g_b, double alpha_b) {
  require_positive(g_b, "pt_trimer: g_b");
  require_positive(alpha_b, "pt_trimer: alpha_b");
  return {{Complex{omega0, alpha_b}, g_b, 0.0},
          {g_b, omega0, g_b},
          {0.0, g_b, Complex{omega0, -alpha_b}}};
}

ComplexMatrix pt_dimer(double omega0, double g_a) { return pt_dimer_detuned(omega0, g_a, g_a); }

ComplexMatrix pt_trimer(double omega0, double g_b) {
  return pt_trimer_detuned(omega0, g_b, std::numbers::sqrt2 * g_b);
}

ComplexMatrix single_entry_coupling(Complex k, std::size_t n_b, std::size_t n_a, std::size_t row,
                                    std::size_t col) {
  if (row < 1 || row > n_b || col < 1 || col > n_a) {
    throw ParameterError("single_entry_coupling: position out of range");
  }
  ComplexMatrix m(n_b, n_a);
  m(row - 1, col - 1) = k;
  return m;
}

CompositeSystem dimer_trimer_system(double omega0, double g_a, double g_b, Complex k) {
  return block_compose(pt_dimer(omega0, g_a), pt_trimer(omega0, g_b), single_entry_coupling(k, 3, 2, 1, 1));
}

double dimer_trimer_response(double g_a, double g_b, Complex k) {
  return std::sqrt(8.0) * std::abs(k) * g_a * g_b * g_b;
}

}  // namespace epkit::models
