#include "epkit/compose.hpp"

#include <cmath>
#include <string>

#include "epkit/errors.hpp"

namespace epkit {

ComplexMatrix CompositeSystem::nilpotent() const { return traceless_part(h).nilpotent; }

CompositeSystem block_compose(const ComplexMatrix& h_a, const ComplexMatrix& h_b, const ComplexMatrix& k,
                              const ComposeOptions& options) {
  if (!h_a.is_square() || !h_b.is_square()) throw ShapeError("block_compose: subsystems must be square");
  if (k.rows() != h_b.rows() || k.cols() != h_a.rows()) {
    throw ShapeError("block_compose: coupling must be " + std::to_string(h_b.rows()) + "x" +
                     std::to_string(h_a.rows()) + ", got " + std::to_string(k.rows()) + "x" +
                     std::to_string(k.cols()));
  }
  if (!k.all_finite()) throw ParameterError("block_compose: non-finite coupling entry");

  CompositeSystem sys;
  sys.report_a = detect_ep(h_a);
  if (!sys.report_a.full_order()) {
    throw PreconditionError("block_compose: subsystem a is not an EP of full order " +
                            std::to_string(h_a.rows()));
  }
  sys.h_a = h_a;
  sys.h_b = h_b;
  sys.report_b = detect_ep(h_b);
  if (!sys.report_b.full_order()) {
    throw PreconditionError("block_compose: subsystem b is not an EP of full order " +
                            std::to_string(h_b.rows()));
  }

  const Complex ea = sys.report_a.ep_eigenvalue;
  const Complex eb = sys.report_b.ep_eigenvalue;
  if (std::abs(ea - eb) > options.eigenvalue_tol) {
    if (!options.shift_b) {
      throw IncompatibleSubsystemsError("block_compose: EP eigenvalues differ (" + std::to_string(ea.real()) +
                                        "+" + std::to_string(ea.imag()) + "i vs " +
                                        std::to_string(eb.real()) + "+" + std::to_string(eb.imag()) + "i)");
    }
    for (std::size_t i = 0; i < sys.h_b.rows(); ++i) sys.h_b(i, i) += ea - eb;
    sys.report_b = detect_ep(sys.h_b);
  }

  const std::size_t na = h_a.rows();
  const std::size_t nb = h_b.rows();
  sys.k = k;
  sys.h = ComplexMatrix(na + nb, na + nb);
  sys.h.set_block(0, 0, sys.h_a);
  sys.h.set_block(na, 0, k);
  sys.h.set_block(na, na, sys.h_b);
  sys.ep_eigenvalue = trace(sys.h) / static_cast<double>(na + nb);
  return sys;
}

CompositeSystem compose_chain(const std::vector<ComplexMatrix>& subsystems,
                              const std::vector<ComplexMatrix>& couplings, const ComposeOptions& options) {
  if (subsystems.size() < 2) throw ParameterError("compose_chain: need at least two subsystems");
  if (couplings.size() + 1 != subsystems.size()) {
    throw ParameterError("compose_chain: need one coupling per adjacent pair");
  }
  CompositeSystem sys = block_compose(subsystems[0], subsystems[1], couplings[0], options);
  for (std::size_t i = 2; i < subsystems.size(); ++i) {
    sys = block_compose(sys.h, subsystems[i], couplings[i - 1], options);
  }
  return sys;
}

ComplexMatrix genericity_product(const CompositeSystem& sys) {
  const ComplexMatrix left = power(sys.nilpotent_b(), static_cast<int>(sys.n_b()) - 1);
  const ComplexMatrix right = power(sys.nilpotent_a(), static_cast<int>(sys.n_a()) - 1);
  return matmul(matmul(left, sys.k), right);
}

double genericity_threshold(const CompositeSystem& sys) {
  return 1e-8 * spectral_norm(sys.k) *
         std::pow(spectral_norm(sys.nilpotent_a()), static_cast<double>(sys.n_a()) - 1.0) *
         std::pow(spectral_norm(sys.nilpotent_b()), static_cast<double>(sys.n_b()) - 1.0);
}

bool is_generic(const CompositeSystem& sys) {
  return frobenius_norm(genericity_product(sys)) > genericity_threshold(sys);
}

ComplexMatrix structured_top_power(const CompositeSystem& sys) {
  ComplexMatrix top(sys.dim(), sys.dim());
  top.set_block(sys.n_a(), 0, genericity_product(sys));
  return top;
}

double composite_response(const CompositeSystem& sys) {
  const ComplexMatrix c = genericity_product(sys);
  const double frob = frobenius_norm(c);
  if (!(frob > genericity_threshold(sys))) {
    const auto order = nilpotency_index(sys.nilpotent());
    throw DegenerateCouplingError(
        "composite_response: degenerate coupling, N_b^(n_b-1) K N_a^(n_a-1) vanishes; the composite "
        "reaches order " +
        (order ? std::to_string(*order) : std::string("none")) + " < " + std::to_string(sys.dim()));
  }
  const double spec = spectral_norm(c);
  if (std::abs(spec - frob) > 1e-10 * frob) {
    throw StructureError("composite_response: genericity product is not rank one");
  }
  return spec;
}

double response_upper_bound(double xi_a, double xi_b, const ComplexMatrix& k) {
  if (xi_a < 0.0 || xi_b < 0.0) throw ParameterError("response_upper_bound: negative response strength");
  return xi_a * xi_b * spectral_norm(k);
}

SplittingPrediction predicted_splitting(const CompositeSystem& sys, const ComplexMatrix& h1, double eps) {
  if (h1.rows() != sys.dim() || h1.cols() != sys.dim()) {
    throw ShapeError("predicted_splitting: perturbation shape does not match the composite");
  }
  if (!is_generic(sys)) throw DegenerateCouplingError("predicted_splitting: composite is not a full-order EP");
  const ComplexMatrix c = genericity_product(sys);
  // psi_EP spans the image of C, embedded in the subsystem-b block.
  const Svd f = svd(c);
  ComplexVector psi(sys.dim());
  for (std::size_t i = 0; i < sys.n_b(); ++i) psi[sys.n_a() + i] = f.u(i, 0);
  ComplexMatrix top(sys.dim(), sys.dim());
  top.set_block(sys.n_a(), 0, c);
  return predicted_splitting(sys.ep_eigenvalue, top, psi, h1, eps);
}

}  // namespace epkit
