#pragma once

// Deformation removal for multivariate closed curves: closed-form translation and
// scale, then rotation and per-component starting-point shifts by alternating
// minimization (Iterative Closest Function, ICF) against a template.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "mvshape/fourier.hpp"
#include "mvshape/random.hpp"

namespace mvshape {

/** Translation T, scale rho, rotation theta and reparametrizations delta_1..delta_p. */
template <typename Scalar>
struct DeformationParams {
  Vector2<Scalar> T = Vector2<Scalar>::Zero();
  Scalar rho = Scalar(1);
  Scalar theta = Scalar(0);
  VectorX<Scalar> delta;
};

/** Reduce an angle to [0, 2 pi). */
template <typename Scalar>
Scalar wrap_angle(Scalar theta) {
  using std::floor;
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar w = theta - two_pi * floor(theta / two_pi);
  return w >= two_pi ? Scalar(0) : w;
}

/**
 * A jointly centered, unit-norm multivariate curve (an element of the pre-shape
 * sphere). Construction checks both invariants to 1e-10.
 */
template <typename Scalar>
class PreShape {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit PreShape(MultiCurve<Scalar> curve) : curve_(std::move(curve)) {
    using std::abs;
    if (abs(squared_norm(curve_) - Scalar(1)) > Scalar(kTolerance))
      throw DomainError("pre-shape must have unit norm");
    if (joint_center(curve_).norm() > Scalar(kTolerance))
      throw DomainError("pre-shape must be jointly centered");
  }

  /** Rescale to unit norm after removing the joint center; for values already on the sphere up to roundoff. */
  static PreShape renormalized(MultiCurve<Scalar> curve) {
    const Vector2<Scalar> c = joint_center(curve);
    auto B = curve.B();
    for (int j = 0; j < curve.p(); ++j) B.template segment<2>(2 * j) -= c;
    MultiCurve<Scalar> centered(curve.A(), std::move(B));
    const Scalar n = norm(centered);
    if (!(n > Scalar(0))) throw DegenerateError("cannot normalize a zero curve");
    return PreShape(centered / n);
  }

  static Vector2<Scalar> joint_center(const MultiCurve<Scalar>& c) {
    Vector2<Scalar> t = Vector2<Scalar>::Zero();
    for (int j = 0; j < c.p(); ++j) t += c.B(j);
    return t / Scalar(c.p());
  }

  const MultiCurve<Scalar>& curve() const { return curve_; }
  int p() const { return curve_.p(); }
  int basis_size() const { return curve_.basis_size(); }

 private:
  MultiCurve<Scalar> curve_;
};

/** A pre-shape aligned to a template. */
template <typename Scalar>
struct Shape {
  PreShape<Scalar> preshape;
  std::string template_id;
};

template <typename Scalar>
struct CenterScaleResult {
  PreShape<Scalar> preshape;
  Vector2<Scalar> T;
  Scalar rho;
};

/**
 * T = mean of the B_j, rho = sqrt(|A|_F^2 + |B - 1_p kron T|^2), pre-shape (C - 1_p kron T) / rho.
 */
template <typename Scalar>
CenterScaleResult<Scalar> center_and_scale(const MultiCurve<Scalar>& c) {
  using std::sqrt;
  const Vector2<Scalar> T = PreShape<Scalar>::joint_center(c);
  auto B = c.B();
  for (int j = 0; j < c.p(); ++j) B.template segment<2>(2 * j) -= T;
  const Scalar rho = sqrt(c.A().squaredNorm() + B.squaredNorm());
  if (!(rho > Scalar(0)))
    throw DegenerateError("degenerate curve: all components are constant and coincide");
  return {PreShape<Scalar>(MultiCurve<Scalar>(c.A() / rho, B / rho)), T, rho};
}

/** sum_j |O_theta Cbar_j o gamma_{delta_j} - C*_j|^2. */
template <typename Scalar, typename Derived>
Scalar alignment_objective(const MultiCurve<Scalar>& preshape, const MultiCurve<Scalar>& templ, Scalar theta,
                           const Eigen::MatrixBase<Derived>& delta) {
  MultiCurve<Scalar>::check_same_shape(preshape, templ);
  return squared_norm(rotate(reparametrize(templ, delta), theta) - preshape);
}

template <typename Scalar>
struct RotationEstimate {
  Scalar theta = Scalar(0);
  Scalar objective = Scalar(0);
  bool indeterminate = false;
};

/**
 * Procrustes rotation step: with the reparametrizations fixed, the minimizing angle is
 * one of the two roots theta_1, theta_1 + pi of tan(theta) = num / den, where
 *   num = sum_j <Y*_j, Xbar_j o g> - <X*_j, Ybar_j o g>,  den = sum_j <X*_j, Xbar_j o g> + <Y*_j, Ybar_j o g>.
 * Both roots are evaluated and the smaller objective wins; ties go to the smaller angle.
 */
template <typename Scalar, typename Derived>
RotationEstimate<Scalar> estimate_rotation(const MultiCurve<Scalar>& preshape, const MultiCurve<Scalar>& templ,
                                           const Eigen::MatrixBase<Derived>& delta) {
  using std::abs;
  using std::atan2;
  using std::cos;
  using std::sin;
  MultiCurve<Scalar>::check_same_shape(preshape, templ);
  const MultiCurve<Scalar> moved = reparametrize(templ, delta);

  // cross(r, s) = <row r of C*, row s of Cbar o gamma>, summed over components.
  Matrix2<Scalar> cross = Matrix2<Scalar>::Zero();
  for (int j = 0; j < preshape.p(); ++j) {
    cross.noalias() += preshape.A(j) * moved.A(j).transpose();
    cross.noalias() += preshape.B(j) * moved.B(j).transpose();
  }
  const Scalar num = cross(1, 0) - cross(0, 1);
  const Scalar den = cross(0, 0) + cross(1, 1);
  const Scalar base = squared_norm(preshape) + squared_norm(templ);
  auto objective = [&](Scalar th) { return base - Scalar(2) * (cos(th) * den + sin(th) * num); };

  RotationEstimate<Scalar> out;
  if (abs(num) < Scalar(1e-14) && abs(den) < Scalar(1e-14)) {
    out.theta = Scalar(0);
    out.objective = objective(Scalar(0));
    out.indeterminate = true;
    return out;
  }
  const Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar theta1 = atan2(num, den);  // a root of the tangent equation
  theta1 = wrap_angle(theta1);
  if (theta1 >= pi) theta1 -= pi;
  const Scalar theta2 = theta1 + pi;
  const Scalar f1 = objective(theta1);
  const Scalar f2 = objective(theta2);
  if (f2 < f1 - Scalar(1e-14)) {
    out.theta = theta2;
    out.objective = f2;
  } else {
    out.theta = theta1;
    out.objective = f1;
  }
  return out;
}

namespace detail {

/** Stationarity equation for one component: g(delta) = sum_l w1_l sin(2 pi l delta) - w2_l cos(2 pi l delta). */
template <typename Scalar>
struct ReparamEquation {
  VectorX<Scalar> trace;    // tr(Sigma_l)
  VectorX<Scalar> skew;     // Sigma_l(1,0) - Sigma_l(0,1)
  Scalar constant;          // |Abar|^2 + |A*|^2

  int frequencies() const { return static_cast<int>(trace.size()); }

  template <typename F>
  void for_harmonics(Scalar delta, F&& f) const {
    using std::cos;
    using std::sin;
    const Scalar a = Scalar(2) * std::numbers::pi_v<Scalar> * delta;
    const Scalar c1 = cos(a), s1 = sin(a);
    Scalar c = c1, s = s1;
    for (int l = 1; l <= frequencies(); ++l) {
      f(l, c, s);
      const Scalar cn = c * c1 - s * s1;
      s = s * c1 + c * s1;
      c = cn;
    }
  }

  Scalar g(Scalar delta) const {
    Scalar v = Scalar(0);
    for_harmonics(delta, [&](int l, Scalar c, Scalar s) {
      const Scalar k1 = Scalar(2 * l);  // k + 1 for k = 2l - 1
      v += k1 * trace(l - 1) * s - k1 * skew(l - 1) * c;
    });
    return v;
  }

  /** |Abar^theta P_delta - A*|_F^2. */
  Scalar objective(Scalar delta) const {
    Scalar v = Scalar(0);
    for_harmonics(delta, [&](int l, Scalar c, Scalar s) { v += c * trace(l - 1) + s * skew(l - 1); });
    return constant - Scalar(2) * v;
  }
};

}  // namespace detail

template <typename Scalar>
struct ReparamEstimate {
  Scalar delta = Scalar(0);
  Scalar objective = Scalar(0);
  int roots = 0;
  bool degenerate = false;
};

/**
 * Reparametrization step for one component with the rotation fixed.
 *
 * Sigma_l is the l-th 2x2 diagonal block of (O_theta Abar)^T A*. The stationary points
 * of |O_theta Abar P_delta - A*|_F^2 are the zeros of
 *   g(delta) = sum_l w1_l sin(2 pi l delta) - w2_l cos(2 pi l delta),
 *   w1_l = 2l tr(Sigma_l),  w2_l = -2l tr(Sigma_l O_{pi/2}).
 * Zeros are bracketed on a uniform grid of 4(M+1) cells and refined by bisection; the
 * objective is evaluated at each and the global minimizer returned.
 */
template <typename Scalar>
ReparamEstimate<Scalar> solve_reparam(const ComponentCoefficients<Scalar>& preshape_component,
                                      const ComponentCoefficients<Scalar>& template_component, Scalar theta) {
  using std::abs;
  const int M = preshape_component.basis_size();
  if (template_component.basis_size() != M) throw DimensionError("component basis size mismatch");
  const BasisSpec spec(M);
  const CoefficientRows<Scalar> rotated = rotation_matrix(theta) * template_component.A;
  const CoefficientRows<Scalar>& target = preshape_component.A;

  detail::ReparamEquation<Scalar> eq;
  eq.trace.resize(spec.frequencies());
  eq.skew.resize(spec.frequencies());
  eq.constant = rotated.squaredNorm() + target.squaredNorm();
  Scalar wmax = Scalar(0);
  for (int l = 1; l <= spec.frequencies(); ++l) {
    const Matrix2<Scalar> sigma = rotated.middleCols(2 * l - 2, 2).transpose() * target.middleCols(2 * l - 2, 2);
    eq.trace(l - 1) = sigma.trace();
    eq.skew(l - 1) = sigma(1, 0) - sigma(0, 1);
    wmax = std::max({wmax, abs(Scalar(2 * l) * eq.trace(l - 1)), abs(Scalar(2 * l) * eq.skew(l - 1))});
  }

  ReparamEstimate<Scalar> out;
  if (wmax < Scalar(1e-14)) {
    out.delta = Scalar(0);
    out.objective = eq.objective(Scalar(0));
    out.degenerate = true;
    return out;
  }

  const int cells = 4 * (M + 1);
  const Scalar h = Scalar(1) / Scalar(cells);
  std::vector<Scalar> gvals(cells + 1);
  for (int i = 0; i <= cells; ++i) gvals[i] = eq.g(Scalar(i) * h);
  gvals[cells] = gvals[0];

  Scalar best = std::numeric_limits<Scalar>::infinity();
  auto consider = [&](Scalar d) {
    d = ReparamMatrix<Scalar>::wrap(d);
    const Scalar f = eq.objective(d);
    if (f < best) {
      best = f;
      out.delta = d;
    }
  };

  for (int i = 0; i < cells; ++i) {
    Scalar a = Scalar(i) * h, b = Scalar(i + 1) * h;
    Scalar ga = gvals[i], gb = gvals[i + 1];
    if (ga == Scalar(0)) {
      ++out.roots;
      consider(a);
      continue;
    }
    if ((ga < Scalar(0)) == (gb < Scalar(0)) || gb == Scalar(0)) continue;
    while (b - a > Scalar(1e-12)) {
      const Scalar m = Scalar(0.5) * (a + b);
      const Scalar gm = eq.g(m);
      if (gm == Scalar(0)) {
        a = b = m;
        break;
      }
      if ((gm < Scalar(0)) == (ga < Scalar(0))) {
        a = m;
        ga = gm;
      } else {
        b = m;
      }
    }
    ++out.roots;
    consider(Scalar(0.5) * (a + b));
  }

  // Two zeros inside one cell produce no sign change; recover a minimum hidden that way.
  int best_node = 0;
  Scalar best_node_value = std::numeric_limits<Scalar>::infinity();
  for (int i = 0; i < cells; ++i) {
    const Scalar f = eq.objective(Scalar(i) * h);
    if (f < best_node_value) {
      best_node_value = f;
      best_node = i;
    }
  }
  if (best_node_value < best - Scalar(1e-14)) {
    Scalar a = Scalar(best_node - 1) * h, b = Scalar(best_node + 1) * h;
    const Scalar ratio = Scalar(0.5) * (std::sqrt(Scalar(5)) - Scalar(1));
    Scalar x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
    Scalar f1 = eq.objective(ReparamMatrix<Scalar>::wrap(x1)), f2 = eq.objective(ReparamMatrix<Scalar>::wrap(x2));
    while (b - a > Scalar(1e-12)) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - ratio * (b - a);
        f1 = eq.objective(ReparamMatrix<Scalar>::wrap(x1));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + ratio * (b - a);
        f2 = eq.objective(ReparamMatrix<Scalar>::wrap(x2));
      }
    }
    consider(Scalar(0.5) * (a + b));
  }
  if (out.roots == 0) out.degenerate = true;
  out.objective = best;
  return out;
}

template <typename Scalar>
struct IcfOptions {
  int n_starts = 5;
  Scalar tol = Scalar(1e-10);
  int max_iter = 100;
  std::uint64_t seed = 0;
  /** Tried before the random starts (e.g. the previous solution of an outer loop). */
  std::vector<VectorX<Scalar>> extra_starts;
  std::string template_id = "template";
};

template <typename Scalar>
struct IcfResult {
  Shape<Scalar> shape;
  Scalar theta = Scalar(0);
  VectorX<Scalar> delta;
  Scalar objective = Scalar(0);
  int iterations = 0;
  bool converged = false;
  /** Objective never increased across alternation half-steps, in every start. */
  bool monotone = true;
  bool rotation_indeterminate = false;
  bool reparam_degenerate = false;
  /** Objective after each full alternation of the winning start. */
  std::vector<Scalar> trace;
};

/**
 * Align a pre-shape to a template. Each start alternates estimate_rotation and p
 * independent solve_reparam calls until the objective decrease drops below tol.
 * The aligned shape is (I_p kron O_theta^T) C* o gamma_{1 - delta}.
 */
template <typename Scalar>
IcfResult<Scalar> icf_align(const PreShape<Scalar>& preshape, const PreShape<Scalar>& templ,
                            const IcfOptions<Scalar>& options = {}) {
  const MultiCurve<Scalar>& target = preshape.curve();
  const MultiCurve<Scalar>& model = templ.curve();
  MultiCurve<Scalar>::check_same_shape(target, model);
  if (options.n_starts < 1 && options.extra_starts.empty()) throw DomainError("ICF needs at least one start");
  const int p = target.p();
  const Scalar slack = Scalar(1e-12);

  std::vector<VectorX<Scalar>> starts;
  for (const auto& s : options.extra_starts) {
    if (s.size() != p) throw DimensionError("ICF start has wrong number of components");
    starts.push_back(s);
  }
  Rng rng(derive_seed(options.seed, stream::kIcfStarts));
  for (int s = 0; s < options.n_starts; ++s) {
    VectorX<Scalar> d(p);
    for (int j = 0; j < p; ++j) d(j) = Scalar(uniform01(rng));
    starts.push_back(std::move(d));
  }

  std::vector<ComponentCoefficients<Scalar>> target_parts, model_parts;
  for (int j = 0; j < p; ++j) {
    target_parts.push_back(target.component(j));
    model_parts.push_back(model.component(j));
  }

  struct Candidate {
    Scalar theta = Scalar(0);
    VectorX<Scalar> delta;
    Scalar objective = std::numeric_limits<Scalar>::infinity();
    int iterations = 0;
    bool converged = false, indeterminate = false, degenerate = false;
    std::vector<Scalar> trace;
  };
  Candidate best;
  bool all_monotone = true;
  for (const auto& start : starts) {
    Candidate run;
    run.delta = start;
    Scalar previous = std::numeric_limits<Scalar>::infinity();
    bool monotone = true;
    while (run.iterations < options.max_iter) {
      ++run.iterations;
      const RotationEstimate<Scalar> rot = estimate_rotation(target, model, run.delta);
      run.theta = rot.theta;
      run.indeterminate = rot.indeterminate;
      if (rot.objective > previous + slack) monotone = false;
      run.degenerate = false;
      for (int j = 0; j < p; ++j) {
        const ReparamEstimate<Scalar> r = solve_reparam(target_parts[j], model_parts[j], run.theta);
        run.delta(j) = r.delta;
        run.degenerate = run.degenerate || r.degenerate;
      }
      run.objective = alignment_objective(target, model, run.theta, run.delta);
      if (run.objective > rot.objective + slack) monotone = false;
      run.trace.push_back(run.objective);
      if (previous - run.objective < options.tol) {
        run.converged = true;
        break;
      }
      previous = run.objective;
    }
    all_monotone = all_monotone && monotone;
    if (best.trace.empty() || run.objective < best.objective) best = std::move(run);
  }

  VectorX<Scalar> inverse(p);
  for (int j = 0; j < p; ++j) inverse(j) = ReparamMatrix<Scalar>::wrap(Scalar(1) - best.delta(j));
  return IcfResult<Scalar>{
      Shape<Scalar>{PreShape<Scalar>::renormalized(rotate(reparametrize(target, inverse), -best.theta)),
                    options.template_id},
      best.theta,
      best.delta,
      best.objective,
      best.iterations,
      best.converged,
      all_monotone,
      best.indeterminate,
      best.degenerate,
      std::move(best.trace)};
}

}  // namespace mvshape
