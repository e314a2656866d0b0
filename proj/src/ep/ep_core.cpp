#include "epkit/ep_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "epkit/errors.hpp"

namespace epkit {

TracelessPart traceless_part(const ComplexMatrix& h) {
  if (!h.is_square()) throw ShapeError("traceless_part: matrix is not square");
  if (h.rows() == 0) throw ShapeError("traceless_part: empty matrix");
  const Complex shift = trace(h) / static_cast<double>(h.rows());
  ComplexMatrix n = h;
  for (std::size_t i = 0; i < h.rows(); ++i) n(i, i) -= shift;
  return {shift, std::move(n)};
}

std::optional<int> nilpotency_index(const ComplexMatrix& n, double nil_tol) {
  if (!n.is_square()) throw ShapeError("nilpotency_index: matrix is not square");
  if (nil_tol <= 0.0) throw ParameterError("nilpotency_index: nil_tol must be positive");
  const double base = spectral_norm(n);
  ComplexMatrix p = n;
  double scale = base;
  for (std::size_t k = 1; k <= n.rows(); ++k) {
    if (k > 1) {
      p = matmul(p, n);
      scale *= base;
    }
    if (spectral_norm(p) <= nil_tol * scale) return static_cast<int>(k);
  }
  return std::nullopt;
}

EpReport detect_ep(const ComplexMatrix& h, double nil_tol) {
  if (!h.all_finite()) throw ParameterError("detect_ep: non-finite entry");
  auto [shift, n] = traceless_part(h);
  EpReport report;
  report.dim = h.rows();
  report.ep_eigenvalue = shift;
  report.order = nilpotency_index(n, nil_tol);
  report.nilpotent = std::move(n);
  if (report.full_order()) {
    const ComplexMatrix top = power(report.nilpotent, *report.order - 1);
    const double spec = spectral_norm(top);
    const double frob = frobenius_norm(top);
    if (std::abs(spec - frob) > 1e-10 * frob) {
      throw StructureError("detect_ep: N^(n-1) is not rank one (spectral " + std::to_string(spec) +
                           ", Frobenius " + std::to_string(frob) + ")");
    }
    report.response_strength = spec;
  }
  return report;
}

double response_strength(const ComplexMatrix& h, double nil_tol) {
  const EpReport r = detect_ep(h, nil_tol);
  if (!r.full_order()) {
    throw PreconditionError("response_strength: matrix is not an EP of full order " +
                            std::to_string(r.dim));
  }
  return *r.response_strength;
}

ComplexMatrix greens_function(const EpReport& report, Complex energy) {
  if (!report.order) throw PreconditionError("greens_function: report carries no nilpotency index");
  const Complex z = energy - report.ep_eigenvalue;
  if (z == Complex{}) throw PoleError("greens_function: energy coincides with the EP eigenvalue");
  const Complex inv = 1.0 / z;
  ComplexMatrix term = inv * ComplexMatrix::identity(report.dim);
  ComplexMatrix g = term;
  for (int k = 1; k < *report.order; ++k) {
    term = inv * matmul(term, report.nilpotent);
    g += term;
  }
  return g;
}

double splitting_bound(double xi, double eps, double h1_spectral_norm, int n) {
  if (xi < 0.0 || eps < 0.0 || h1_spectral_norm < 0.0 || n < 1) {
    throw ParameterError("splitting_bound: inputs must be nonnegative and n >= 1");
  }
  return std::pow(eps * h1_spectral_norm * xi, 1.0 / n);
}

double machine_precision_bound(double xi, int n, double eps_mp) {
  if (xi <= 0.0 || eps_mp <= 0.0 || n < 1) {
    throw ParameterError("machine_precision_bound: inputs must be positive");
  }
  return std::pow(2.0 * std::sqrt(static_cast<double>(n)) * eps_mp * xi, 1.0 / n);
}

std::vector<Complex> root_fan(Complex ep_eigenvalue, Complex radicand, int n) {
  std::vector<Complex> out(static_cast<std::size_t>(n));
  const double mag = std::pow(std::abs(radicand), 1.0 / n);
  const double arg = std::arg(radicand) / n;
  for (int k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] =
        ep_eigenvalue + std::polar(mag, arg + 2.0 * std::numbers::pi * k / n);
  }
  return out;
}

SplittingPrediction predicted_splitting(Complex ep_eigenvalue, const ComplexMatrix& top_power,
                                        std::span<const Complex> psi_ep, const ComplexMatrix& h1,
                                        double eps) {
  if (top_power.rows() != h1.rows() || top_power.cols() != h1.cols()) {
    throw ShapeError("predicted_splitting: perturbation shape does not match the Hamiltonian");
  }
  if (psi_ep.size() != h1.rows()) throw ShapeError("predicted_splitting: eigenvector length mismatch");
  const int n = static_cast<int>(h1.rows());
  const ComplexMatrix prod = matmul(top_power, h1);

  SplittingPrediction p;
  p.n = n;
  p.radicand = eps * trace(prod);
  const ComplexVector image = matvec(prod, psi_ep);
  p.sandwich_radicand = eps * inner(psi_ep, image);

  const double scale = eps * frobenius_norm(top_power) * frobenius_norm(h1);
  if (std::abs(p.radicand - p.sandwich_radicand) > 1e-10 * std::max(std::abs(p.radicand), scale)) {
    throw StructureError("predicted_splitting: trace and EP-state forms of the radicand disagree");
  }
  p.predicted_eigenvalues = root_fan(ep_eigenvalue, p.radicand, n);
  return p;
}

SplittingPrediction predicted_splitting(const EpReport& report, const ComplexMatrix& h1, double eps) {
  if (!report.full_order()) throw PreconditionError("predicted_splitting: not a full-order EP");
  if (h1.rows() != report.dim || h1.cols() != report.dim) {
    throw ShapeError("predicted_splitting: perturbation shape does not match the Hamiltonian");
  }
  const ComplexMatrix top = power(report.nilpotent, *report.order - 1);
  // psi_EP spans the image of N^{n-1}: its leading left singular vector.
  const Svd f = svd(top);
  const ComplexVector psi = f.u.column(0);
  return predicted_splitting(report.ep_eigenvalue, top, psi, h1, eps);
}

std::vector<std::size_t> match_min_cost(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("match_min_cost: sets differ in size");
  const std::size_t n = a.size();
  // Hungarian algorithm with potentials, 1-based internally.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1), v(n + 1), minv(n + 1);
  std::vector<std::size_t> p(n + 1), way(n + 1);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = std::abs(a[i0 - 1] - b[j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

}  // namespace epkit
