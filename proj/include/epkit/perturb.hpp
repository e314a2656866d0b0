#pragma once

// Randomized perturbation experiments around an EP: generic and
// block-preserving perturbations, eigenvalue splitting sweeps over the
// perturbation strength and log-log slope fits of the result.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "epkit/cmatrix.hpp"

namespace epkit {

/// SplitMix64 (Steele, Lea, Flood 2014): state advances by the golden-ratio
/// increment and each output is a fixed 64-bit mix of the state, so the n-th
/// draw depends only on (seed, n).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  static std::uint64_t mix(std::uint64_t z);

 private:
  std::uint64_t state_;
};

/// Seed used by trial `trial` of a sweep seeded with `seed`.
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t trial);

enum class PerturbationMode { Generic, Preserving };

std::string_view mode_name(PerturbationMode m);
PerturbationMode parse_mode(std::string_view s);

struct Perturbation {
  ComplexMatrix matrix;
  PerturbationMode mode = PerturbationMode::Generic;
  std::uint64_t seed = 0;
};

/// dim x dim, real and imaginary parts i.i.d. uniform on [-1/2, 1/2).
Perturbation random_generic(std::size_t dim, std::uint64_t seed);

/// Same distribution, with the block coupling subsystem b back into subsystem a
/// (rows < n_a, columns >= n_a) set to exactly zero.
Perturbation random_preserving(std::size_t n_a, std::size_t n_b, std::uint64_t seed);

/// max_j |E_j - ep| over the eigenvalues of H + eps * H1.
double max_splitting(const ComplexMatrix& h, Complex ep_eigenvalue, const ComplexMatrix& h1, double eps);

struct SweepRecord {
  double eps = 0.0;
  double max_splitting = 0.0;
  int trial = 0;
};

struct SweepOptions {
  PerturbationMode mode = PerturbationMode::Generic;
  std::size_t split = 0;  // n_a; required for preserving perturbations
  int trials = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// One record per (eps, trial), sorted by eps then trial. Trial t draws a
/// single H1 from child_seed(seed, t) and reuses it for every eps.
std::vector<SweepRecord> sweep(const ComplexMatrix& h, Complex ep_eigenvalue, std::span<const double> eps_grid,
                               const SweepOptions& options);

/// `points` values spaced evenly in log10 between lo and hi (inclusive).
std::vector<double> log_grid(double lo, double hi, int points);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double eps_lo = 0.0;
  double eps_hi = 0.0;
  double residual = 0.0;  // RMS deviation in log10 units
  int points = 0;
};

/// Least squares on (log10 eps, log10 median splitting over trials) for the
/// records with eps in [eps_lo, eps_hi]. Throws FitError with fewer than three
/// distinct usable eps values.
SlopeFit fit_slope(std::span<const SweepRecord> records, double eps_lo, double eps_hi);

}  // namespace epkit
