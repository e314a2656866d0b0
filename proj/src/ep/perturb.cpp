#include "epkit/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <thread>

#include "epkit/errors.hpp"

namespace epkit {

std::uint64_t SplitMix64::mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix(state_);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t child_seed(std::uint64_t seed, std::uint64_t trial) {
  return seed ^ SplitMix64::mix(trial + 0x9e3779b97f4a7c15ULL);
}

std::string_view mode_name(PerturbationMode m) {
  return m == PerturbationMode::Generic ? "generic" : "preserving";
}

PerturbationMode parse_mode(std::string_view s) {
  if (s == "generic") return PerturbationMode::Generic;
  if (s == "preserving") return PerturbationMode::Preserving;
  throw ParameterError("unknown perturbation mode '" + std::string(s) + "'");
}

Perturbation random_generic(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw ParameterError("random_generic: dim must be >= 1");
  SplitMix64 rng(seed);
  ComplexMatrix m(dim, dim);
  for (auto& z : m.entries()) {
    const double re = rng.uniform() - 0.5;
    const double im = rng.uniform() - 0.5;
    z = {re, im};
  }
  return {std::move(m), PerturbationMode::Generic, seed};
}

Perturbation random_preserving(std::size_t n_a, std::size_t n_b, std::uint64_t seed) {
  if (n_a < 1 || n_b < 1) throw ParameterError("random_preserving: block sizes must be >= 1");
  Perturbation p = random_generic(n_a + n_b, seed);
  for (std::size_t r = 0; r < n_a; ++r)
    for (std::size_t c = n_a; c < n_a + n_b; ++c) p.matrix(r, c) = 0.0;
  p.mode = PerturbationMode::Preserving;
  return p;
}

double max_splitting(const ComplexMatrix& h, Complex ep_eigenvalue, const ComplexMatrix& h1, double eps) {
  if (h.rows() != h1.rows() || h.cols() != h1.cols()) throw ShapeError("max_splitting: shape mismatch");
  if (eps < 0.0) throw ParameterError("max_splitting: eps must be nonnegative");
  ComplexMatrix perturbed = h;
  if (eps != 0.0) perturbed += eps * h1;
  double worst = 0.0;
  for (const Complex e : eigenvalues(perturbed)) worst = std::max(worst, std::abs(e - ep_eigenvalue));
  return worst;
}

std::vector<SweepRecord> sweep(const ComplexMatrix& h, Complex ep_eigenvalue, std::span<const double> eps_grid,
                               const SweepOptions& options) {
  if (options.trials < 1) throw ParameterError("sweep: trials must be >= 1");
  if (eps_grid.empty()) throw ParameterError("sweep: empty eps grid");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0) || (i > 0 && !(eps_grid[i] > eps_grid[i - 1]))) {
      throw ParameterError("sweep: eps grid must be positive and strictly ascending");
    }
  }
  if (!h.is_square()) throw ShapeError("sweep: Hamiltonian is not square");
  const std::size_t dim = h.rows();
  if (options.mode == PerturbationMode::Preserving && (options.split < 1 || options.split >= dim)) {
    throw ParameterError("sweep: preserving perturbations need a block split 1 <= n_a < dim");
  }

  const auto trials = static_cast<std::size_t>(options.trials);
  const std::size_t npts = eps_grid.size();
  // table[trial * npts + i] holds the record for (eps_grid[i], trial)
  std::vector<SweepRecord> table(trials * npts);

  auto run_trial = [&](std::size_t t) {
    const std::uint64_t s = child_seed(options.seed, t);
    const Perturbation p = options.mode == PerturbationMode::Generic
                               ? random_generic(dim, s)
                               : random_preserving(options.split, dim - options.split, s);
    for (std::size_t i = 0; i < npts; ++i) {
      table[t * npts + i] = {eps_grid[i], max_splitting(h, ep_eigenvalue, p.matrix, eps_grid[i]),
                             static_cast<int>(t)};
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(trials)));
  if (workers == 1) {
    for (std::size_t t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t t = w; t < trials; t += workers) run_trial(t);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::vector<SweepRecord> out;
  out.reserve(table.size());
  for (std::size_t i = 0; i < npts; ++i)
    for (std::size_t t = 0; t < trials; ++t) out.push_back(table[t * npts + i]);
  return out;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo) || points < 2) {
    throw ParameterError("log_grid: need 0 < lo < hi and at least two points");
  }
  std::vector<double> g(static_cast<std::size_t>(points));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < points; ++i) {
    g[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (points - 1));
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SlopeFit fit_slope(std::span<const SweepRecord> records, double eps_lo, double eps_hi) {
  if (!(eps_lo > 0.0) || !(eps_hi > eps_lo)) throw FitError("fit_slope: window must satisfy 0 < lo < hi");
  // Grid points computed through pow() may sit an ulp outside a decade boundary.
  const double lo = eps_lo * (1.0 - 1e-9);
  const double hi = eps_hi * (1.0 + 1e-9);
  std::map<double, std::vector<double>> by_eps;
  for (const auto& r : records) {
    if (r.eps >= lo && r.eps <= hi) by_eps[r.eps].push_back(r.max_splitting);
  }
  std::vector<double> xs, ys;
  for (auto& [eps, vals] : by_eps) {
    const double m = median(vals);
    if (m > 0.0) {
      xs.push_back(std::log10(eps));
      ys.push_back(std::log10(m));
    }
  }
  if (xs.size() < 3) {
    throw FitError("fit_slope: need at least 3 distinct eps values with positive splitting in the window, got " +
                   std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.eps_lo = eps_lo;
  fit.eps_hi = eps_hi;
  fit.points = static_cast<int>(xs.size());
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace epkit
