#pragma once

// Geometry of the pre-shape sphere in coefficient space: geodesic distance,
// logarithm and exponential maps, and the intrinsic (Karcher) mean.

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "mvshape/deformation.hpp"
#include "mvshape/fourier.hpp"

namespace mvshape {

/** An element v of the tangent space at base, i.e. <v, base> = 0 (checked to 1e-9). */
template <typename Scalar>
class TangentVector {
 public:
  static constexpr double kTolerance = 1e-9;

  TangentVector(MultiCurve<Scalar> coefficients, PreShape<Scalar> base)
      : coefficients_(std::move(coefficients)), base_(std::move(base)) {
    using std::abs;
    if (abs(inner_product(coefficients_, base_.curve())) > Scalar(kTolerance))
      throw DomainError("tangent vector is not orthogonal to its base point");
  }

  /** Orthogonal projection of an arbitrary coefficient set onto the tangent space. */
  static TangentVector project(const MultiCurve<Scalar>& v, const PreShape<Scalar>& base) {
    return TangentVector(v - inner_product(v, base.curve()) * base.curve(), base);
  }

  const MultiCurve<Scalar>& coefficients() const { return coefficients_; }
  const PreShape<Scalar>& base() const { return base_; }
  Scalar norm() const { return mvshape::norm(coefficients_); }

 private:
  MultiCurve<Scalar> coefficients_;
  PreShape<Scalar> base_;
};

/** arccos of the inner product, clamped to [-1, 1]. */
template <typename Scalar>
Scalar geodesic_distance(const PreShape<Scalar>& f, const PreShape<Scalar>& g) {
  using std::acos;
  using std::clamp;
  return acos(clamp(inner_product(f.curve(), g.curve()), Scalar(-1), Scalar(1)));
}

/** L(f) = omega / sin(omega) (f - cos(omega) mu), omega = d(f, mu). */
template <typename Scalar>
TangentVector<Scalar> log_map(const PreShape<Scalar>& f, const PreShape<Scalar>& mu) {
  using std::cos;
  using std::sin;
  const Scalar omega = geodesic_distance(f, mu);
  if (omega > std::numbers::pi_v<Scalar> - Scalar(1e-6))
    throw NumericalError("logarithm map undefined at the antipode of the base point");
  if (omega < Scalar(1e-8)) return TangentVector<Scalar>(MultiCurve<Scalar>::zeros(mu.p(), mu.curve().basis()), mu);
  return TangentVector<Scalar>((omega / sin(omega)) * (f.curve() - cos(omega) * mu.curve()), mu);
}

/** E(v) = cos(|v|) mu + sin(|v|) v / |v|, with mu the base of v. */
template <typename Scalar>
PreShape<Scalar> exp_map(const TangentVector<Scalar>& v) {
  using std::cos;
  using std::sin;
  const Scalar n = v.norm();
  if (n == Scalar(0)) return v.base();
  // The formula preserves the unit norm exactly; renormalizing only removes roundoff drift.
  return PreShape<Scalar>::renormalized(cos(n) * v.base().curve() + (sin(n) / n) * v.coefficients());
}

template <typename Scalar>
PreShape<Scalar> exp_map(const TangentVector<Scalar>& v, const PreShape<Scalar>& mu) {
  return exp_map(TangentVector<Scalar>(v.coefficients(), mu));
}

template <typename Scalar>
struct FrechetOptions {
  Scalar tol = Scalar(1e-10);
  int max_iter = 200;
  /** Shapes farther than pi - antipodal_margin from the running estimate are left out of that step. */
  Scalar antipodal_margin = Scalar(1e-3);
  /** Starting point; defaults to the first shape. */
  std::optional<PreShape<Scalar>> initial;
};

template <typename Scalar>
struct FrechetMeanResult {
  PreShape<Scalar> mean;
  /** (1/n) sum_i d(shape_i, mean)^2. */
  Scalar variance;
  int iterations;
  bool converged;
  /** Norm of the last tangent mean. */
  Scalar tangent_norm;
  /** Number of (shape, iteration) pairs skipped by the antipodal guard. */
  int antipodal_exclusions;
};

template <typename Scalar>
Scalar distance_variance(std::span<const PreShape<Scalar>> shapes, const PreShape<Scalar>& mu) {
  Scalar v = Scalar(0);
  for (const auto& s : shapes) {
    const Scalar d = geodesic_distance(s, mu);
    v += d * d;
  }
  return v / Scalar(shapes.size());
}

/**
 * Intrinsic mean by tangent averaging: mu <- E_mu(mean_i L_mu(shape_i)) until the
 * tangent mean has norm below tol. On non-convergence the best iterate (lowest
 * variance) is returned with converged = false.
 */
template <typename Scalar>
FrechetMeanResult<Scalar> frechet_mean(std::span<const PreShape<Scalar>> shapes, const FrechetOptions<Scalar>& options = {}) {
  if (shapes.empty()) throw DataError("Frechet mean of an empty sample");
  PreShape<Scalar> mu = options.initial ? *options.initial : shapes.front();
  for (const auto& s : shapes) MultiCurve<Scalar>::check_same_shape(s.curve(), mu.curve());
  const Scalar cutoff = std::numbers::pi_v<Scalar> - options.antipodal_margin;

  PreShape<Scalar> best = mu;
  Scalar best_variance = distance_variance(shapes, mu);
  int exclusions = 0;
  Scalar tangent_norm = Scalar(0);
  for (int it = 0; it <= options.max_iter; ++it) {
    MultiCurve<Scalar> sum = MultiCurve<Scalar>::zeros(mu.p(), mu.curve().basis());
    int used = 0;
    for (const auto& s : shapes) {
      if (geodesic_distance(s, mu) > cutoff) {
        ++exclusions;
        continue;
      }
      sum += log_map(s, mu).coefficients();
      ++used;
    }
    if (used == 0) throw NumericalError("every shape is antipodal to the running mean");
    const TangentVector<Scalar> step = TangentVector<Scalar>::project(sum / Scalar(used), mu);
    tangent_norm = step.norm();
    if (tangent_norm < options.tol) {
      const Scalar var = distance_variance(shapes, mu);
      return {mu, var, it, true, tangent_norm, exclusions};
    }
    if (it == options.max_iter) break;
    mu = exp_map(step);
    const Scalar var = distance_variance(shapes, mu);
    if (var < best_variance) {
      best_variance = var;
      best = mu;
    }
  }
  return {best, best_variance, options.max_iter, false, tangent_norm, exclusions};
}

template <typename Scalar>
FrechetMeanResult<Scalar> frechet_mean(const std::vector<PreShape<Scalar>>& shapes,
                                       const FrechetOptions<Scalar>& options = {}) {
  return frechet_mean(std::span<const PreShape<Scalar>>(shapes), options);
}

/** Spherical linear interpolation between two points of the sphere. */
template <typename Scalar>
PreShape<Scalar> geodesic_point(const PreShape<Scalar>& a, const PreShape<Scalar>& b, Scalar fraction) {
  const TangentVector<Scalar> v = log_map(b, a);
  return exp_map(TangentVector<Scalar>(fraction * v.coefficients(), a));
}

}  // namespace mvshape
