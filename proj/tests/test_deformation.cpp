#include <doctest.h>

#include <random>

#include "mvshape/deformation.hpp"
#include "mvshape/synth.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mvshape;

TEST_CASE("center_and_scale produces a pre-shape and reports T and rho") {
  std::mt19937_64 rng(10);
  const MultiCurve<double> c = testing_support::random_curve(rng, 3, 22, 50.0);
  const CenterScaleResult<double> r = center_and_scale(c);
  CHECK(squared_norm(r.preshape.curve()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(PreShape<double>::joint_center(r.preshape.curve()).norm() < 1e-14);
  // Undo: C = rho * preshape + 1 kron T.
  Eigen::VectorXd B = r.rho * r.preshape.curve().B();
  for (int j = 0; j < 3; ++j) B.segment<2>(2 * j) += r.T;
  CHECK((B - c.B()).norm() < 1e-10);
  CHECK((r.rho * r.preshape.curve().A() - c.A()).norm() < 1e-10);
}

TEST_CASE("translation and scale do not change the pre-shape") {
  std::mt19937_64 rng(11);
  const MultiCurve<double> c = testing_support::random_curve(rng, 2, 10);
  Eigen::VectorXd shift(4);
  shift << 3.0, -2.0, 3.0, -2.0;
  const MultiCurve<double> moved(4.5 * c.A(), 4.5 * c.B() + shift);
  CHECK(norm(center_and_scale(c).preshape.curve() - center_and_scale(moved).preshape.curve()) < 1e-14);
}

TEST_CASE("a curve made of coincident points is degenerate") {
  Eigen::VectorXd B(4);
  B << 1.0, 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(center_and_scale(MultiCurve<double>(Eigen::MatrixXd::Zero(4, 4), B)), DegenerateError);
  // Distinct constant components still carry a configuration.
  B << 1.0, 1.0, -1.0, 0.0;
  CHECK_NOTHROW(center_and_scale(MultiCurve<double>(Eigen::MatrixXd::Zero(4, 4), B)));
}

TEST_CASE("PreShape checks its invariants") {
  std::mt19937_64 rng(12);
  const MultiCurve<double> c = testing_support::random_curve(rng, 2, 6);
  CHECK_THROWS_AS(PreShape<double>{c}, DomainError);
  const PreShape<double> ok = PreShape<double>::renormalized(c);
  CHECK_NOTHROW(PreShape<double>{ok.curve()});
  CHECK_THROWS_AS(PreShape<double>::renormalized(MultiCurve<double>::zeros(2, BasisSpec(6))), DegenerateError);
}

TEST_CASE("estimate_rotation agrees with a grid search") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 20; ++i) {
    const MultiCurve<double> templ = testing_support::random_curve(rng, 2, 10);
    const MultiCurve<double> obs = rotate(templ, testing_support::uniform(rng, 0, 6.28)) +
                                   0.5 * testing_support::random_curve(rng, 2, 10);
    const Eigen::Vector2d delta(testing_support::uniform(rng), testing_support::uniform(rng));
    const RotationEstimate<double> r = estimate_rotation(obs, templ, delta);
    const MultiCurve<double> moved = reparametrize(templ, delta);
    const double grid = oracle::grid_argmin_theta(obs.A(), obs.B(), moved.A(), moved.B(), 20000);
    CHECK(oracle::cyclic_gap(r.theta, grid, oracle::kTwoPi) < 1e-3);
    CHECK(r.theta >= 0.0);
    CHECK(r.theta < oracle::kTwoPi);
    CHECK(r.objective == doctest::Approx(alignment_objective(obs, templ, r.theta, delta)).epsilon(1e-12));
    CHECK_FALSE(r.indeterminate);
  }
}

TEST_CASE("rotation of an orthogonal template is indeterminate") {
  const MultiCurve<double> zero = MultiCurve<double>::zeros(1, BasisSpec(4));
  std::mt19937_64 rng(14);
  const MultiCurve<double> obs = testing_support::random_curve(rng, 1, 4);
  const RotationEstimate<double> r = estimate_rotation(obs, zero, Eigen::VectorXd::Zero(1));
  CHECK(r.indeterminate);
  CHECK(r.theta == 0.0);
}

TEST_CASE("solve_reparam agrees with a grid search and returns the global minimum") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 30; ++i) {
    const MultiCurve<double> templ = testing_support::random_curve(rng, 1, 22);
    const double d0 = testing_support::uniform(rng);
    const MultiCurve<double> obs =
        reparametrize(templ, Eigen::VectorXd::Constant(1, d0)) + 0.4 * testing_support::random_curve(rng, 1, 22);
    const double theta = testing_support::uniform(rng, -0.2, 0.2);
    const ReparamEstimate<double> r = solve_reparam(obs.component(0), templ.component(0), theta);
    const double grid = oracle::grid_argmin_delta(obs.A(), templ.A(), theta, 20000);
    CHECK(oracle::cyclic_gap(r.delta, grid, 1.0) < 1e-3);
    CHECK(r.objective == doctest::Approx(oracle::reparam_objective(obs.A(), templ.A(), theta, r.delta)).epsilon(1e-10));
    CHECK(r.objective <= oracle::reparam_objective(obs.A(), templ.A(), theta, grid) + 1e-12);
    CHECK(r.roots >= 2);
    CHECK(r.delta >= 0.0);
    CHECK(r.delta < 1.0);
  }
}

TEST_CASE("solve_reparam recovers an exact shift") {
  std::mt19937_64 rng(16);
  const MultiCurve<double> templ = testing_support::random_curve(rng, 1, 22);
  for (double d0 : {0.0, 0.1, 0.5, 0.999}) {
    const MultiCurve<double> obs = reparametrize(templ, Eigen::VectorXd::Constant(1, d0));
    const ReparamEstimate<double> r = solve_reparam(obs.component(0), templ.component(0), 0.0);
    CHECK(oracle::cyclic_gap(r.delta, d0, 1.0) < 1e-9);
    CHECK(r.objective < 1e-16);
  }
}

TEST_CASE("solve_reparam on a zero template is degenerate") {
  std::mt19937_64 rng(17);
  const MultiCurve<double> obs = testing_support::random_curve(rng, 1, 6);
  const ComponentCoefficients<double> zero{Eigen::Vector2d::Zero(), Eigen::MatrixXd::Zero(2, 6)};
  const ReparamEstimate<double> r = solve_reparam(obs.component(0), zero, 0.3);
  CHECK(r.degenerate);
  CHECK(r.delta == 0.0);
}

TEST_CASE("ICF recovers a noiseless deformation and is monotone") {
  const MultiCurve<double> c0 = centered_template(builtin_template());
  const PreShape<double> mu(c0 / norm(c0));
  std::mt19937_64 rng(18);
  for (int i = 0; i < 10; ++i) {
    const double theta = testing_support::uniform(rng, 0, oracle::kTwoPi);
    const Eigen::Vector3d delta(testing_support::uniform(rng), testing_support::uniform(rng),
                                testing_support::uniform(rng));
    const PreShape<double> obs = PreShape<double>::renormalized(rotate(reparametrize(mu.curve(), delta), theta));
    IcfOptions<double> opts;
    opts.seed = 100 + i;
    const IcfResult<double> r = icf_align(obs, mu, opts);
    // Coordinate descent stops once the decrease falls below tol, so the parameters are
    // accurate to about sqrt(tol).
    CHECK(r.objective <= opts.tol);
    CHECK(oracle::cyclic_gap(r.theta, theta, oracle::kTwoPi) < 1e-5);
    for (int j = 0; j < 3; ++j) CHECK(oracle::cyclic_gap(r.delta(j), delta(j), 1.0) < 1e-5);
    CHECK(r.monotone);
    CHECK(r.converged);
    // The aligned shape coincides with the template.
    CHECK(norm(r.shape.preshape.curve() - mu.curve()) < 1e-5);
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1] + 1e-12);
  }
}

TEST_CASE("ICF objective equals the distance between the aligned shape and the template") {
  std::mt19937_64 rng(19);
  const PreShape<double> mu = testing_support::random_preshape(rng, 3, 12);
  const PreShape<double> obs = testing_support::random_preshape(rng, 3, 12);
  IcfOptions<double> opts;
  opts.template_id = "mu";
  const IcfResult<double> r = icf_align(obs, mu, opts);
  CHECK(r.shape.template_id == "mu");
  CHECK(squared_norm(r.shape.preshape.curve() - mu.curve()) == doctest::Approx(r.objective).epsilon(1e-9));
  // No start does better than the reported optimum.
  for (int s = 0; s < 20; ++s) {
    Eigen::VectorXd d(3);
    for (int j = 0; j < 3; ++j) d(j) = testing_support::uniform(rng);
    const double th = estimate_rotation(obs.curve(), mu.curve(), d).theta;
    CHECK(alignment_objective(obs.curve(), mu.curve(), th, d) >= r.objective - 1e-12);
  }
}

TEST_CASE("ICF is deterministic under a seed and validates its inputs") {
  std::mt19937_64 rng(20);
  const PreShape<double> mu = testing_support::random_preshape(rng, 2, 8);
  const PreShape<double> obs = testing_support::random_preshape(rng, 2, 8);
  IcfOptions<double> opts;
  opts.seed = 42;
  const IcfResult<double> a = icf_align(obs, mu, opts);
  const IcfResult<double> b = icf_align(obs, mu, opts);
  CHECK(a.theta == b.theta);
  CHECK(a.delta == b.delta);
  opts.n_starts = 0;
  CHECK_THROWS_AS(icf_align(obs, mu, opts), DomainError);
  opts.extra_starts.push_back(Eigen::VectorXd::Zero(3));
  CHECK_THROWS_AS(icf_align(obs, mu, opts), DimensionError);
  const PreShape<double> other = testing_support::random_preshape(rng, 3, 8);
  CHECK_THROWS_AS(icf_align(other, mu), DimensionError);
}

TEST_CASE("wrap_angle reduces to [0, 2 pi)") {
  CHECK(wrap_angle(-0.5) == doctest::Approx(oracle::kTwoPi - 0.5));
  CHECK(wrap_angle(oracle::kTwoPi) == doctest::Approx(0.0));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - oracle::kTwoPi));
}
