#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <numbers>

#include "epkit/compose.hpp"
#include "epkit/ep_core.hpp"
#include "epkit/errors.hpp"
#include "epkit/models.hpp"
#include "epkit/perturb.hpp"
#include "support.hpp"

using namespace epkit;
using namespace std::complex_literals;

namespace {

CompositeSystem example_system() { return models::dimer_trimer_system(1.0, 1.5, 1.3, 1.0); }

Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
  Eigen::MatrixXcd e(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) e(r, c) = a(r, c);
  return e;
}

}  // namespace

TEST_CASE("traceless_part examples") {
  const TracelessPart t0 = traceless_part(5.0 * ComplexMatrix::identity(3));
  CHECK(t0.shift == 5.0);
  CHECK(t0.nilpotent == ComplexMatrix(3, 3));

  const TracelessPart ta = traceless_part(models::pt_dimer(1.0, 1.5));
  CHECK(ta.shift == 1.0);
  CHECK(ta.nilpotent == ComplexMatrix{{1.5i, 1.5}, {1.5, -1.5i}});

  const CompositeSystem sys = example_system();
  const TracelessPart tc = traceless_part(sys.h);
  CHECK(std::abs(tc.shift - 1.0) <= 1e-15);
  CHECK(test::max_abs_diff(tc.nilpotent, sys.h - ComplexMatrix::identity(5)) <= 1e-15);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 2; c < 5; ++c) CHECK(tc.nilpotent(r, c) == 0.0);
  CHECK(std::abs(trace(tc.nilpotent)) <= 1e-12 * frobenius_norm(sys.h));

  CHECK_THROWS_AS(traceless_part(ComplexMatrix(2, 3)), ShapeError);
}

TEST_CASE("nilpotency_index examples") {
  CHECK(nilpotency_index(test::jordan_block(3)) == 3);
  CHECK(nilpotency_index(traceless_part(models::pt_dimer(1.0, 1.5)).nilpotent) == 2);
  CHECK(nilpotency_index(example_system().nilpotent()) == 5);
  CHECK(nilpotency_index(ComplexMatrix(4, 4)) == 1);
  CHECK_FALSE(nilpotency_index(ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}}).has_value());
  CHECK_THROWS_AS(nilpotency_index(test::jordan_block(2), 0.0), ParameterError);
}

TEST_CASE("detect_ep examples") {
  const EpReport j = detect_ep(test::jordan_block(3, 2.0));
  CHECK(j.order == 3);
  CHECK(j.ep_eigenvalue == 2.0);
  CHECK(*j.response_strength == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(j.full_order());

  const EpReport t = detect_ep(models::pt_trimer(1.0, 1.3));
  CHECK(t.order == 3);
  CHECK(std::abs(t.ep_eigenvalue - 1.0) <= 1e-15);
  CHECK(*t.response_strength == doctest::Approx(6.76).epsilon(1e-12));

  const EpReport d = detect_ep(ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}});
  CHECK_FALSE(d.order.has_value());
  CHECK_FALSE(d.response_strength.has_value());
  CHECK_FALSE(d.partial());

  // Block-diagonal dimer pair: nilpotent of index 2 in dimension 4.
  ComplexMatrix two(4, 4);
  two.set_block(0, 0, models::pt_dimer(0.0, 1.0));
  two.set_block(2, 2, models::pt_dimer(0.0, 2.0));
  const EpReport p = detect_ep(two);
  CHECK(p.order == 2);
  CHECK(p.partial());
  CHECK_FALSE(p.response_strength.has_value());

  // The zero traceless part is not an EP unless dim = 1.
  CHECK(detect_ep(3.0 * ComplexMatrix::identity(3)).order == 1);
  CHECK_FALSE(detect_ep(3.0 * ComplexMatrix::identity(3)).full_order());
}

TEST_CASE("response_strength examples") {
  CHECK(response_strength(models::pt_dimer(1.0, 1.5)) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(response_strength(models::pt_trimer(1.0, 1.3)) == doctest::Approx(6.76).epsilon(1e-12));
  const double xi = response_strength(example_system().h);
  CHECK(test::rel_diff(xi, std::sqrt(8.0) * 1.5 * 1.69) <= 1e-10);
  CHECK_THROWS_AS(response_strength(ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}}), PreconditionError);
}

TEST_CASE("detection biconditional on random similarity-transformed Jordan blocks") {
  test::Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 7;
    const Complex eps = test::random_complex(rng);
    const test::Similarity s = test::random_similarity(rng, n);
    const ComplexMatrix h = test::transform(s, test::jordan_block(n)) + eps * ComplexMatrix::identity(n);
    const EpReport r = detect_ep(h);
    CHECK(r.order == static_cast<int>(n));
    CHECK(std::abs(r.ep_eigenvalue - eps) <= 1e-9);
    REQUIRE(r.response_strength.has_value());
    const ComplexMatrix top = power(r.nilpotent, static_cast<int>(n) - 1);
    CHECK(std::abs(spectral_norm(top) - frobenius_norm(top)) <= 1e-10 * frobenius_norm(top));
  }
}

TEST_CASE("detection biconditional on diagonalizable matrices with separated eigenvalues") {
  test::Rng rng(22);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 7;
    // Half the cases are a tight cluster of width ~1e-5 around a random center.
    const double width = t % 2 == 0 ? 1.0 : 1e-5;
    const Complex center = test::random_complex(rng);
    std::vector<Complex> d;
    while (d.size() < n) {
      const Complex z = center + width * test::random_complex(rng);
      bool far = true;
      for (const Complex w : d) far = far && std::abs(z - w) > 1e-6;
      if (far) d.push_back(z);
    }
    const ComplexMatrix h = test::transform(test::random_similarity(rng, n), ComplexMatrix::diagonal(d));
    CHECK(detect_ep(h).order != std::optional<int>(static_cast<int>(n)));
  }
}

TEST_CASE("greens_function examples") {
  const EpReport one = detect_ep(ComplexMatrix{{2.0 + 1i}});
  const ComplexMatrix g1 = greens_function(one, 5.0);
  CHECK(std::abs(g1(0, 0) - 1.0 / (3.0 - 1i)) <= 1e-15);

  const EpReport ra = detect_ep(models::pt_dimer(1.0, 1.5));
  const ComplexMatrix ga = greens_function(ra, ra.ep_eigenvalue + 1.0);
  CHECK(test::max_abs_diff(ga, ComplexMatrix::identity(2) + ra.nilpotent) <= 1e-15);

  const CompositeSystem sys = example_system();
  const EpReport rc = detect_ep(sys.h);
  const Complex e = rc.ep_eigenvalue + 0.5;
  const ComplexMatrix g = greens_function(rc, e);
  const ComplexMatrix a = e * ComplexMatrix::identity(5) - sys.h;
  CHECK(frobenius_norm(a * g - ComplexMatrix::identity(5)) <= 1e-8);
  // Independent oracle: dense inverse.
  const Eigen::MatrixXcd inv = to_eigen(a).inverse();
  CHECK((to_eigen(g) - inv).norm() <= 1e-9 * inv.norm());

  CHECK_THROWS_AS(greens_function(rc, rc.ep_eigenvalue), PoleError);
}

TEST_CASE("greens_function residual over |E - eps| in [0.1, 10]") {
  const CompositeSystem sys = example_system();
  const EpReport r = detect_ep(sys.h);
  test::Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    const double rad = std::pow(10.0, test::uniform(rng, -1.0, 1.0));
    const Complex e = r.ep_eigenvalue + std::polar(rad, test::uniform(rng, 0.0, 2 * std::numbers::pi));
    const ComplexMatrix g = greens_function(r, e);
    CHECK(frobenius_norm((e * ComplexMatrix::identity(5) - sys.h) * g - ComplexMatrix::identity(5)) <= 1e-8);
  }
}

TEST_CASE("splitting_bound examples") {
  CHECK(splitting_bound(1.0, 1.0, 1.0, 2) == doctest::Approx(1.0));
  const double b = splitting_bound(7.170056, 2.22e-16, 2.0 * std::sqrt(5.0), 5);
  CHECK(b == doctest::Approx(1.48e-3).epsilon(0.01));
  const double b1 = splitting_bound(3.0, 1e-6, 2.0, 5);
  const double b2 = splitting_bound(3.0, 2e-6, 2.0, 5);
  CHECK(b2 / b1 == doctest::Approx(std::pow(2.0, 0.2)).epsilon(1e-14));
  CHECK_THROWS_AS(splitting_bound(1.0, -1.0, 1.0, 2), ParameterError);
}

TEST_CASE("machine_precision_bound examples") {
  CHECK(machine_precision_bound(7.170056, 5) == doctest::Approx(1.5e-3).epsilon(0.1));
  CHECK(machine_precision_bound(32 * 7.0, 5) / machine_precision_bound(7.0, 5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(machine_precision_bound(1.0, 1) == doctest::Approx(2 * kMachineEpsilon).epsilon(1e-14));
  CHECK_THROWS_AS(machine_precision_bound(0.0, 5), ParameterError);
}

TEST_CASE("predicted_splitting examples") {
  const CompositeSystem sys = example_system();
  const EpReport r = detect_ep(sys.h);

  ComplexMatrix h1(5, 5);
  h1(0, 2) = 1.0;
  const double eps = 1e-6;
  const SplittingPrediction p = predicted_splitting(r, h1, eps);
  CHECK(p.n == 5);
  CHECK(std::abs(p.radicand - eps * (-2.535i)) <= 1e-10 * eps);
  CHECK(std::abs(p.sandwich_radicand - p.radicand) <= 1e-10 * std::abs(p.radicand));
  REQUIRE(p.predicted_eigenvalues.size() == 5);
  for (const Complex z : p.predicted_eigenvalues) {
    CHECK(std::abs(std::pow(z - r.ep_eigenvalue, 5) - p.radicand) <= 1e-10 * std::abs(p.radicand));
  }

  const SplittingPrediction z = predicted_splitting(r, h1, 0.0);
  CHECK(z.radicand == Complex{});
  for (const Complex e : z.predicted_eigenvalues) CHECK(e == r.ep_eigenvalue);

  // Dense route on a preserving perturbation: zero up to the roundoff in N_b^4.
  const ComplexMatrix pres = random_preserving(2, 3, 99).matrix;
  CHECK(std::abs(predicted_splitting(r, pres, 1.0).radicand) <= 1e-13);

  CHECK_THROWS_AS(predicted_splitting(r, ComplexMatrix(4, 4), eps), ShapeError);
  CHECK_THROWS_AS(predicted_splitting(detect_ep(ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}}), ComplexMatrix(2, 2), eps),
                  PreconditionError);
}

TEST_CASE("computed eigenvalues approach the predicted root fan") {
  const CompositeSystem sys = example_system();
  const EpReport r = detect_ep(sys.h);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ComplexMatrix h1 = random_generic(5, seed).matrix;
    const double eps = 1e-10;
    const SplittingPrediction p = predicted_splitting(r, h1, eps);
    const std::vector<Complex> ev = eigenvalues(sys.h + eps * h1);
    const std::vector<std::size_t> m = match_min_cost(ev, p.predicted_eigenvalues);
    double worst = 0.0;
    for (std::size_t j = 0; j < ev.size(); ++j) worst = std::max(worst, std::abs(ev[j] - p.predicted_eigenvalues[m[j]]));
    CHECK(worst / std::pow(std::abs(p.radicand), 0.2) <= 0.05);
  }
}

TEST_CASE("eigenvalue bound holds for random perturbations of the EP5") {
  const CompositeSystem sys = example_system();
  const double xi = composite_response(sys);
  test::Rng rng(24);
  for (int t = 0; t < 400; ++t) {
    const double eps = std::pow(10.0, test::uniform(rng, -12.0, -4.0));
    const ComplexMatrix h1 = random_generic(5, rng()).matrix;
    const double rhs = eps * spectral_norm(h1) * xi;
    for (const Complex e : eigenvalues(sys.h + eps * h1)) {
      CHECK(std::pow(std::abs(e - sys.ep_eigenvalue), 5) <= rhs * (1.0 + 1e-6) + 1e-12);
    }
  }
}

TEST_CASE("root_fan and match_min_cost") {
  const std::vector<Complex> fan = root_fan(1.0, 16.0, 4);
  REQUIRE(fan.size() == 4);
  for (const Complex z : fan) CHECK(std::abs(std::pow(z - 1.0, 4) - 16.0) <= 1e-12);

  const std::vector<Complex> a{0.0, 10.0, 5.0};
  const std::vector<Complex> b{9.0, 4.0, 1.0};
  const std::vector<std::size_t> m = match_min_cost(a, b);
  CHECK(m == std::vector<std::size_t>{2, 0, 1});

  // Brute force over all permutations as the oracle.
  test::Rng rng(25);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng() % 6;
    const ComplexVector x = test::random_vector(rng, n), y = test::random_vector(rng, n);
    const auto mm = match_min_cost(x, y);
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) cost += std::abs(x[i] - y[mm[i]]);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double best = 1e300;
    do {
      double c = 0.0;
      for (std::size_t i = 0; i < n; ++i) c += std::abs(x[i] - y[perm[i]]);
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(cost <= best + 1e-12);
  }
  CHECK_THROWS_AS(match_min_cost(a, std::vector<Complex>{1.0}), ShapeError);
}
