#pragma once

// Reference computations used only by the tests. They deliberately avoid the
// library's own code paths: quadrature instead of coefficient algebra, brute-force
// grids instead of root finding, plain Newton instead of the group-lasso solver.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/** phi_k(t) written out directly from the definition (k is 1-based). */
inline double basis_function(int k, double t) {
  const int l = (k + 1) / 2;
  return k % 2 == 1 ? std::sqrt(2.0) * std::sin(kTwoPi * l * t) : std::sqrt(2.0) * std::cos(kTwoPi * l * t);
}

/** Midpoint-rule Gram matrix of phi_1..phi_M on [0,1]. */
inline Eigen::MatrixXd gram_quadrature(int M, int points) {
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(M, M);
  std::vector<double> phi(M);
  for (int q = 0; q < points; ++q) {
    const double t = (q + 0.5) / points;
    for (int k = 0; k < M; ++k) phi[k] = basis_function(k + 1, t);
    for (int a = 0; a < M; ++a)
      for (int b = 0; b < M; ++b) G(a, b) += phi[a] * phi[b];
  }
  return G / double(points);
}

/** Point of component rows (2 x M) plus offset at parameter t, evaluated from the definition. */
inline Eigen::Vector2d curve_point(const Eigen::MatrixXd& A, const Eigen::Vector2d& B, double t) {
  Eigen::Vector2d v = B;
  for (int k = 0; k < A.cols(); ++k) v += A.col(k) * basis_function(k + 1, t);
  return v;
}

/** Squared L2 norm of a difference of two sampled closed curves by the rectangle rule (exact for trig polynomials). */
inline double l2_distance_sq(const std::function<Eigen::Vector2d(double)>& f,
                             const std::function<Eigen::Vector2d(double)>& g, int points) {
  double s = 0.0;
  for (int q = 0; q < points; ++q) {
    const double t = double(q) / points;
    s += (f(t) - g(t)).squaredNorm();
  }
  return s / points;
}

/**
 * Coefficients of t -> x(t - delta) for rows x, by the angle-difference identities:
 *   sin(2 pi l (t - d)) = sin(2 pi l t) cos(2 pi l d) - cos(2 pi l t) sin(2 pi l d)
 *   cos(2 pi l (t - d)) = cos(2 pi l t) cos(2 pi l d) + sin(2 pi l t) sin(2 pi l d)
 */
inline Eigen::MatrixXd shift_rows(const Eigen::MatrixXd& A, double delta) {
  Eigen::MatrixXd out(A.rows(), A.cols());
  for (int c = 0; c + 1 < A.cols(); c += 2) {
    const int l = c / 2 + 1;
    const double cs = std::cos(kTwoPi * l * delta), sn = std::sin(kTwoPi * l * delta);
    // a_s sin(.. - d) + a_c cos(.. - d) = (a_s cs + a_c sn) sin + (a_c cs - a_s sn) cos
    out.col(c) = A.col(c) * cs + A.col(c + 1) * sn;
    out.col(c + 1) = A.col(c + 1) * cs - A.col(c) * sn;
  }
  return out;
}

inline Eigen::Matrix2d rot(double th) {
  Eigen::Matrix2d o;
  o << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return o;
}

/** |O_theta Abar(. - delta) - Astar|_F^2 for one component. */
inline double reparam_objective(const Eigen::MatrixXd& Astar, const Eigen::MatrixXd& Abar, double theta, double delta) {
  return (rot(theta) * shift_rows(Abar, delta) - Astar).squaredNorm();
}

/** argmin over a uniform grid of `points` values in [0, 1). */
inline double grid_argmin_delta(const Eigen::MatrixXd& Astar, const Eigen::MatrixXd& Abar, double theta, int points) {
  double best = 1e300, arg = 0.0;
  for (int i = 0; i < points; ++i) {
    const double d = double(i) / points;
    const double f = reparam_objective(Astar, Abar, theta, d);
    if (f < best) {
      best = f;
      arg = d;
    }
  }
  return arg;
}

/** argmin over theta in a uniform grid of [0, 2 pi) of sum |O_theta Cbar - C*|^2 (stacked 2p x M and 2p). */
inline double grid_argmin_theta(const Eigen::MatrixXd& Astar, const Eigen::VectorXd& Bstar, const Eigen::MatrixXd& Abar,
                                const Eigen::VectorXd& Bbar, int points) {
  double best = 1e300, arg = 0.0;
  const int p = static_cast<int>(Astar.rows() / 2);
  for (int i = 0; i < points; ++i) {
    const double th = kTwoPi * double(i) / points;
    const Eigen::Matrix2d o = rot(th);
    double f = 0.0;
    for (int j = 0; j < p; ++j) {
      f += (o * Abar.middleRows(2 * j, 2) - Astar.middleRows(2 * j, 2)).squaredNorm();
      f += (o * Bbar.segment<2>(2 * j) - Bstar.segment<2>(2 * j)).squaredNorm();
    }
    if (f < best) {
      best = f;
      arg = th;
    }
  }
  return arg;
}

/** Distance between two points of the circle of circumference `period`. */
inline double cyclic_gap(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

/** Unpenalized logistic regression with intercept by plain Newton iterations. */
struct LogisticFit {
  double beta0 = 0.0;
  Eigen::VectorXd beta;
};

inline LogisticFit newton_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int iterations = 100) {
  const Eigen::Index n = X.rows(), q = X.cols();
  Eigen::MatrixXd Z(n, q + 1);
  Z.col(0).setOnes();
  Z.rightCols(q) = X;
  Eigen::VectorXd th = Eigen::VectorXd::Zero(q + 1);
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd eta = Z * th;
    const Eigen::VectorXd p = (1.0 / (1.0 + (-eta.array()).exp())).matrix();
    const Eigen::VectorXd w = p.array() * (1.0 - p.array());
    const Eigen::VectorXd g = Z.transpose() * (p - y);
    const Eigen::MatrixXd H = Z.transpose() * w.asDiagonal() * Z;
    const Eigen::VectorXd step = H.ldlt().solve(g);
    th -= step;
    if (step.norm() < 1e-14) break;
  }
  return {th(0), th.tail(q)};
}

/** Least-squares fitted values of y on [1, X] by column-pivoted QR. */
inline Eigen::VectorXd ols_fitted(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Eigen::MatrixXd Z(X.rows(), X.cols() + 1);
  Z.col(0).setOnes();
  Z.rightCols(X.cols()) = X;
  const Eigen::VectorXd coef = Z.colPivHouseholderQr().solve(y);
  return Z * coef;
}

/** Spherical midpoint of two unit vectors: (a + b) / |a + b|. */
inline Eigen::VectorXd slerp_midpoint(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a + b).normalized();
}

/** Spherical interpolation along the great circle from a to b. */
inline Eigen::VectorXd slerp(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double s) {
  const double om = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
  return (std::sin((1 - s) * om) * a + std::sin(s * om) * b) / std::sin(om);
}

}  // namespace oracle
