#include <doctest.h>

#include <random>

#include "mvshape/sphere.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mvshape;

namespace {

Eigen::VectorXd flat(const MultiCurve<double>& c) {
  Eigen::VectorXd v(c.coefficient_count());
  v << c.A().reshaped(), c.B();
  return v;
}

}  // namespace

TEST_CASE("geodesic distance is the arc length between unit vectors") {
  std::mt19937_64 rng(30);
  const PreShape<double> a = testing_support::random_preshape(rng, 2, 8);
  const PreShape<double> b = testing_support::random_preshape(rng, 2, 8);
  CHECK(geodesic_distance(a, a) == doctest::Approx(0.0));
  CHECK(geodesic_distance(a, b) == doctest::Approx(std::acos(flat(a.curve()).dot(flat(b.curve())))));
  CHECK(geodesic_distance(a, b) == doctest::Approx(geodesic_distance(b, a)));
}

TEST_CASE("log map at the base point is zero and the antipode is rejected") {
  std::mt19937_64 rng(31);
  const PreShape<double> mu = testing_support::random_preshape(rng, 3, 10);
  CHECK(log_map(mu, mu).norm() == 0.0);
  const PreShape<double> anti(-1.0 * mu.curve());
  CHECK_THROWS_AS(log_map(anti, mu), NumericalError);
}

TEST_CASE("log and exp maps are inverse and preserve distance") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i) {
    const PreShape<double> mu = testing_support::random_preshape(rng, 3, 22);
    const PreShape<double> f = testing_support::random_preshape(rng, 3, 22);
    const TangentVector<double> v = log_map(f, mu);
    CHECK(std::abs(inner_product(v.coefficients(), mu.curve())) < 1e-12);
    CHECK(v.norm() == doctest::Approx(geodesic_distance(f, mu)).epsilon(1e-12));
    CHECK(norm(exp_map(v).curve() - f.curve()) < 1e-9);
    CHECK(norm(exp_map(v, mu).curve() - f.curve()) < 1e-9);
  }
}

TEST_CASE("exp map of zero is the base point and stays on the pre-shape sphere") {
  std::mt19937_64 rng(33);
  const PreShape<double> mu = testing_support::random_preshape(rng, 2, 6);
  const TangentVector<double> zero(MultiCurve<double>::zeros(2, BasisSpec(6)), mu);
  CHECK(norm(exp_map(zero).curve() - mu.curve()) == 0.0);
  const MultiCurve<double> raw = testing_support::random_curve(rng, 2, 6, 0.0);
  const TangentVector<double> v = TangentVector<double>::project(raw, mu);
  const PreShape<double> e = exp_map(TangentVector<double>(2.5 * v.coefficients() / v.norm(), mu));
  CHECK(norm(e.curve()) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("tangent vectors must be orthogonal to their base") {
  std::mt19937_64 rng(34);
  const PreShape<double> mu = testing_support::random_preshape(rng, 1, 4);
  CHECK_THROWS_AS(TangentVector<double>(mu.curve(), mu), DomainError);
}

TEST_CASE("geodesic_point follows the slerp oracle") {
  std::mt19937_64 rng(35);
  const PreShape<double> a = testing_support::random_preshape(rng, 2, 8);
  const PreShape<double> b = testing_support::random_preshape(rng, 2, 8);
  for (double s : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    const Eigen::VectorXd want = oracle::slerp(flat(a.curve()), flat(b.curve()), s);
    CHECK((flat(geodesic_point(a, b, s).curve()) - want).norm() < 1e-12);
  }
}

TEST_CASE("Frechet mean of identical shapes is that shape") {
  std::mt19937_64 rng(36);
  const PreShape<double> a = testing_support::random_preshape(rng, 3, 6);
  const FrechetMeanResult<double> m = frechet_mean(std::vector<PreShape<double>>(4, a));
  CHECK(m.mean.curve().A() == a.curve().A());
  CHECK(m.mean.curve().B() == a.curve().B());
  CHECK(m.variance == 0.0);
  CHECK(m.converged);
  CHECK(m.iterations == 0);
}

TEST_CASE("Frechet mean of two points is the geodesic midpoint") {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 10; ++i) {
    const PreShape<double> a = testing_support::random_preshape(rng, 2, 8);
    const PreShape<double> b = testing_support::random_preshape(rng, 2, 8);
    const FrechetMeanResult<double> m = frechet_mean(std::vector<PreShape<double>>{a, b});
    CHECK((flat(m.mean.curve()) - oracle::slerp_midpoint(flat(a.curve()), flat(b.curve()))).norm() < 1e-8);
  }
}

TEST_CASE("at convergence the tangent mean vanishes and the variance is minimal") {
  std::mt19937_64 rng(38);
  const PreShape<double> centre = testing_support::random_preshape(rng, 3, 10);
  std::vector<PreShape<double>> cloud;
  for (int i = 0; i < 30; ++i)
    cloud.push_back(PreShape<double>::renormalized(centre.curve() + 0.4 * testing_support::random_preshape(rng, 3, 10).curve()));
  const FrechetMeanResult<double> m = frechet_mean(cloud);
  REQUIRE(m.converged);
  MultiCurve<double> sum = MultiCurve<double>::zeros(3, BasisSpec(10));
  for (const auto& s : cloud) sum += log_map(s, m.mean).coefficients();
  CHECK(norm(sum) / 30.0 < 1e-8);
  CHECK(m.variance == doctest::Approx(distance_variance(std::span<const PreShape<double>>(cloud), m.mean)));
  // Moving away along any geodesic increases the variance.
  for (int k = 0; k < 5; ++k) {
    const TangentVector<double> dir =
        TangentVector<double>::project(testing_support::random_curve(rng, 3, 10, 0.0), m.mean);
    const PreShape<double> moved = exp_map(TangentVector<double>(0.05 * dir.coefficients() / dir.norm(), m.mean));
    CHECK(distance_variance(std::span<const PreShape<double>>(cloud), moved) > m.variance);
  }
}

TEST_CASE("Frechet mean reports non-convergence with the best iterate") {
  std::mt19937_64 rng(39);
  std::vector<PreShape<double>> cloud;
  for (int i = 0; i < 10; ++i) cloud.push_back(testing_support::random_preshape(rng, 2, 6));
  FrechetOptions<double> opts;
  opts.max_iter = 1;
  const FrechetMeanResult<double> m = frechet_mean(cloud, opts);
  CHECK_FALSE(m.converged);
  CHECK(m.variance <= distance_variance(std::span<const PreShape<double>>(cloud), cloud.front()));
  CHECK_THROWS_AS(frechet_mean(std::vector<PreShape<double>>{}), DataError);
}

TEST_CASE("antipodal shapes are excluded from the tangent average") {
  std::mt19937_64 rng(40);
  const PreShape<double> a = testing_support::random_preshape(rng, 1, 4);
  const PreShape<double> near = PreShape<double>::renormalized(a.curve() + 0.1 * testing_support::random_preshape(rng, 1, 4).curve());
  const PreShape<double> anti(-1.0 * a.curve());
  FrechetOptions<double> opts;
  opts.initial = a;
  const FrechetMeanResult<double> m = frechet_mean(std::vector<PreShape<double>>{a, near, anti}, opts);
  CHECK(m.antipodal_exclusions >= 1);
}
