#include <doctest.h>

#include <random>

#include "mvshape/synth.hpp"
#include "oracles.hpp"

using namespace mvshape;

TEST_CASE("the built-in template is jointly centered") {
  const MultiCurve<double> t = builtin_template();
  CHECK(t.p() == 3);
  CHECK(t.basis_size() == 22);
  CHECK(PreShape<double>::joint_center(t).norm() < 1e-9);
  CHECK(norm(centered_template(t) - t) < 1e-9);
}

TEST_CASE("generated curves are pre-shapes built from the drawn deformation") {
  const SynthConfig cfg{.templ = builtin_template(), .n = 20, .sigma = 0.5, .seed = 3};
  const SynthSample s = generate(cfg);
  REQUIRE(s.preshapes.size() == 20);
  CHECK(s.true_delta.rows() == 20);
  CHECK(s.true_delta.cols() == 3);
  const MultiCurve<double> c0 = centered_template(cfg.templ);
  for (int i = 0; i < 20; ++i) {
    CHECK(s.true_theta(i) >= 0.0);
    CHECK(s.true_theta(i) < oracle::kTwoPi);
    for (int j = 0; j < 3; ++j) {
      CHECK(s.true_delta(i, j) >= 0.0);
      CHECK(s.true_delta(i, j) < 1.0);
    }
    const MultiCurve<double> want =
        s.kappa(i) * rotate(reparametrize(MultiCurve<double>(s.perturbed[i], c0.B()), s.true_delta.row(i).transpose()),
                            s.true_theta(i));
    CHECK(norm(want - s.preshapes[i].curve()) < 1e-12);
  }
}

TEST_CASE("generation is deterministic and validates its config") {
  const SynthConfig cfg{.templ = builtin_template(), .n = 4, .sigma = 1.0, .seed = 8};
  const SynthSample a = generate(cfg), b = generate(cfg);
  CHECK(a.true_theta == b.true_theta);
  CHECK(a.preshapes[3].curve().A() == b.preshapes[3].curve().A());
  CHECK_THROWS_AS(generate(SynthConfig{.templ = builtin_template(), .n = 0}), DomainError);
  CHECK_THROWS_AS(generate(SynthConfig{.templ = builtin_template(), .n = 2, .sigma = -1.0}), DomainError);
  CHECK_THROWS_AS(generate(SynthConfig{.templ = builtin_template(), .n = 2, .sigma = 0.0}), DomainError);
}

TEST_CASE("cyclic MSE follows its definition") {
  const std::vector<double> t{0.1, 6.2, 3.0};
  CHECK(cyclic_mse_theta(t, t) == 0.0);
  // Angles 2 pi apart are identical.
  const std::vector<double> wrapped{0.1 + oracle::kTwoPi, 6.2 - oracle::kTwoPi, 3.0};
  CHECK(cyclic_mse_theta(t, wrapped) < 1e-24);
  const std::vector<double> e{0.3, 0.0, 1.0};
  double want = 0.0;
  for (int i = 0; i < 3; ++i) want += 2.0 - 2.0 * std::cos(t[i] - e[i]);
  CHECK(cyclic_mse_theta(t, e) == doctest::Approx(want / 3.0));
  const std::vector<double> d{0.0, 0.99}, de{0.5, 0.01};
  CHECK(cyclic_mse_delta(d, de) == doctest::Approx((4.0 + 2.0 - 2.0 * std::cos(oracle::kTwoPi * 0.98)) / 2.0));
  CHECK_THROWS(cyclic_mse_theta(t, d));
}

TEST_CASE("scenario 2 deformation is a seeded rotation and shift") {
  const MultiCurve<double> t = builtin_template();
  const std::vector<MultiCurve<double>> curves{t, 2.0 * t};
  const auto a = scenario2_deform(curves, 5);
  const auto b = scenario2_deform(curves, 5);
  CHECK(norm(a[1] - b[1]) == 0.0);
  CHECK(norm(a[0]) == doctest::Approx(norm(t)));
  const Scenario2Draws draws = draw_scenario2(2, 3, 5);
  const auto c = apply_scenario2(curves, draws);
  CHECK(norm(c[0] - rotate(reparametrize(t, draws.delta.row(0).transpose()), oracle::kTwoPi * draws.zeta(0))) < 1e-12);
}

TEST_CASE("two-class contours alternate labels and enlarge one component") {
  const TwoClassConfig cfg{.templ = builtin_template(), .n = 10, .points = 80, .scenario2 = false, .seed = 2};
  const auto recs = make_two_class_contours(cfg);
  REQUIRE(recs.size() == 10);
  int ones = 0;
  for (const auto& r : recs) {
    REQUIRE(r.label.has_value());
    ones += *r.label;
    CHECK(r.contours.size() == 3);
    CHECK(r.contours[0].points.size() == 80);
  }
  CHECK(ones == 5);
  CHECK(make_two_class_contours(cfg)[7].contours[1].points == recs[7].contours[1].points);
}
