#include "mvshape/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "mvshape/random.hpp"

namespace mvshape {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cyclic_mse(std::span<const double> truth, std::span<const double> estimate, double period_scale) {
  if (truth.size() != estimate.size()) throw DimensionError("cyclic MSE needs equally long inputs");
  if (truth.empty()) throw DataError("cyclic MSE of an empty sample");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double a = period_scale * truth[i], b = period_scale * estimate[i];
    const double dc = std::cos(a) - std::cos(b), ds = std::sin(a) - std::sin(b);
    sum += dc * dc + ds * ds;
  }
  return sum / static_cast<double>(truth.size());
}

struct OvalSpec {
  Eigen::Vector2d center;
  double semi_x, semi_y;
  double harmonic_scale;
  double phase;
};

}  // namespace

MultiCurve<double> builtin_template() {
  const BasisSpec spec(kDefaultBasisSize);
  const OvalSpec ovals[3] = {
      {{-260.0, -20.0}, 90.0, 210.0, 60.0, 0.3},
      {{20.0, 140.0}, 110.0, 85.0, 45.0, 1.9},
      {{260.0, -30.0}, 85.0, 200.0, 55.0, 4.1},
  };
  std::vector<ComponentCoefficients<double>> comps;
  for (const auto& o : ovals) {
    ComponentCoefficients<double> c;
    c.B = o.center;
    c.A = CoefficientRows<double>::Zero(2, spec.size());
    // Frequency 1: counter-clockwise ellipse x = cx + a cos, y = cy + b sin.
    c.A(0, 1) = o.semi_x / std::numbers::sqrt2;
    c.A(1, 0) = o.semi_y / std::numbers::sqrt2;
    for (int l = 2; l <= spec.frequencies(); ++l) {
      const double amp = o.harmonic_scale / (double(l) * double(l));
      for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
          c.A(r, 2 * l - 2 + s) = amp * std::sin(o.phase + 1.7 * l + 2.3 * r + 0.9 * s + 0.4 * l * r);
    }
    comps.push_back(std::move(c));
  }
  return centered_template(MultiCurve<double>::from_components(comps));
}

MultiCurve<double> centered_template(const MultiCurve<double>& templ) {
  const Eigen::Vector2d T = PreShape<double>::joint_center(templ);
  Eigen::VectorXd B = templ.B();
  for (int j = 0; j < templ.p(); ++j) B.segment<2>(2 * j) -= T;
  return MultiCurve<double>(templ.A(), B);
}

SynthSample generate(const SynthConfig& config) {
  if (config.n < 1) throw DomainError("synthetic sample size must be >= 1");
  if (!(config.sigma > 0.0)) throw DomainError("sigma must be positive");
  const MultiCurve<double> c0 = centered_template(config.templ);
  const int p = c0.p();
  const BasisSpec spec = c0.basis();

  SynthSample out;
  out.true_theta.resize(config.n);
  out.true_delta.resize(config.n, p);
  out.kappa.resize(config.n);
  out.preshapes.reserve(config.n);
  out.perturbed.reserve(config.n);
  for (int i = 0; i < config.n; ++i) {
    Rng rng = make_rng(config.seed, stream::kSynth, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal(0.0, 1.0);
    const double theta = kTwoPi * uniform01(rng);
    Eigen::VectorXd delta(p);
    for (int j = 0; j < p; ++j) delta(j) = uniform01(rng);
    Eigen::MatrixXd a = c0.A();
    for (Eigen::Index r = 0; r < a.rows(); ++r)
      for (Eigen::Index m = 0; m < a.cols(); ++m) a(r, m) += config.sigma * normal(rng);

    const double kappa = 1.0 / std::sqrt(c0.B().squaredNorm() + a.squaredNorm());
    const Matrix2<double> o = rotation_matrix(theta);
    Eigen::MatrixXd A(2 * p, spec.size());
    Eigen::VectorXd B(2 * p);
    for (int j = 0; j < p; ++j) {
      A.middleRows(2 * j, 2) = kappa * o * ReparamMatrix<double>(delta(j), spec).apply_right(a.middleRows(2 * j, 2));
      B.segment<2>(2 * j) = kappa * o * c0.B(j);
    }
    out.preshapes.push_back(PreShape<double>::renormalized(MultiCurve<double>(std::move(A), std::move(B))));
    out.true_theta(i) = theta;
    out.true_delta.row(i) = delta.transpose();
    out.kappa(i) = kappa;
    out.perturbed.push_back(std::move(a));
  }
  return out;
}

double cyclic_mse_theta(std::span<const double> truth, std::span<const double> estimate) {
  return cyclic_mse(truth, estimate, 1.0);
}

double cyclic_mse_delta(std::span<const double> truth, std::span<const double> estimate) {
  return cyclic_mse(truth, estimate, kTwoPi);
}

Scenario2Draws draw_scenario2(std::size_t n, int p, std::uint64_t seed) {
  Scenario2Draws d;
  d.zeta.resize(static_cast<Eigen::Index>(n));
  d.delta.resize(static_cast<Eigen::Index>(n), p);
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = make_rng(seed, stream::kScenario2, i);
    d.zeta(i) = uniform01(rng);
    for (int j = 0; j < p; ++j) d.delta(i, j) = uniform01(rng);
  }
  return d;
}

std::vector<MultiCurve<double>> apply_scenario2(std::span<const MultiCurve<double>> curves, const Scenario2Draws& draws) {
  if (draws.zeta.size() != static_cast<Eigen::Index>(curves.size()))
    throw DimensionError("one deformation draw per curve expected");
  std::vector<MultiCurve<double>> out;
  out.reserve(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const Eigen::VectorXd delta = draws.delta.row(i).transpose();
    out.push_back(rotate(reparametrize(curves[i], delta), kTwoPi * draws.zeta(i)));
  }
  return out;
}

std::vector<MultiCurve<double>> scenario2_deform(std::span<const MultiCurve<double>> curves, std::uint64_t seed) {
  if (curves.empty()) return {};
  return apply_scenario2(curves, draw_scenario2(curves.size(), curves.front().p(), seed));
}

AlignmentStudyRow run_alignment_study(const MultiCurve<double>& templ, double sigma, int n, std::uint64_t seed,
                                      int starts) {
  const SynthSample sample = generate({templ, n, sigma, seed});
  const MultiCurve<double> c0 = centered_template(templ);
  const PreShape<double> mu(c0 / norm(c0));
  const int p = c0.p();

  std::vector<double> theta_true(n), theta_est(n);
  std::vector<std::vector<double>> delta_true(p, std::vector<double>(n)), delta_est(p, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    IcfOptions<double> opts;
    opts.n_starts = starts;
    opts.seed = derive_seed(seed, stream::kIcfStarts, static_cast<std::uint64_t>(i));
    const IcfResult<double> r = icf_align(sample.preshapes[i], mu, opts);
    theta_true[i] = sample.true_theta(i);
    theta_est[i] = r.theta;
    for (int j = 0; j < p; ++j) {
      delta_true[j][i] = sample.true_delta(i, j);
      delta_est[j][i] = r.delta(j);
    }
  }
  AlignmentStudyRow row;
  row.sigma = sigma;
  row.n = n;
  row.cmse_theta = cyclic_mse_theta(theta_true, theta_est);
  row.cmse_delta.resize(p);
  for (int j = 0; j < p; ++j) row.cmse_delta(j) = cyclic_mse_delta(delta_true[j], delta_est[j]);
  return row;
}

RawContour sample_contour(const ComponentCoefficients<double>& c, int points) {
  if (points < 3) throw DomainError("at least 3 sample points required");
  const BasisSpec spec(c.basis_size());
  RawContour rc;
  rc.points.reserve(points);
  for (int k = 0; k < points; ++k) {
    const double t = double(k) / double(points);
    rc.points.push_back(c.B + c.A * eval_basis(t, spec));
  }
  return rc;
}

std::vector<RawMultiContour> make_two_class_contours(const TwoClassConfig& config) {
  if (config.n < 2) throw DomainError("two-class data needs n >= 2");
  const MultiCurve<double> c0 = centered_template(config.templ);
  const int p = c0.p();
  if (config.scaled_component < 0 || config.scaled_component >= p)
    throw DomainError("scaled component index out of range");

  std::vector<MultiCurve<double>> curves;
  curves.reserve(config.n);
  for (int i = 0; i < config.n; ++i) {
    Rng rng = make_rng(config.seed, stream::kClassData, static_cast<std::uint64_t>(i));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd A = c0.A();
    Eigen::VectorXd B = c0.B();
    if (i % 2 == 1) A.middleRows(2 * config.scaled_component, 2) *= config.scale_factor;
    for (Eigen::Index k = 0; k < A.size(); ++k) A.data()[k] += config.coefficient_noise * normal(rng);
    for (Eigen::Index k = 0; k < B.size(); ++k) B(k) += config.center_noise * normal(rng);
    const double scale = 0.8 + 0.45 * uniform01(rng);
    const Eigen::Vector2d shift(100.0 * (uniform01(rng) - 0.5), 100.0 * (uniform01(rng) - 0.5));
    A *= scale;
    B *= scale;
    for (int j = 0; j < p; ++j) B.segment<2>(2 * j) += shift;
    curves.emplace_back(std::move(A), std::move(B));
  }
  if (config.scenario2) curves = scenario2_deform(curves, config.seed);

  std::vector<RawMultiContour> out;
  out.reserve(curves.size());
  for (int i = 0; i < config.n; ++i) {
    RawMultiContour rec;
    rec.id = "synth" + std::to_string(i);
    rec.label = i % 2;
    for (int j = 0; j < p; ++j) rec.contours.push_back(sample_contour(curves[i].component(j), config.points));
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace mvshape
