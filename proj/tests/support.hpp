#pragma once

#include <Eigen/Dense>

#include <random>

#include "mvshape/deformation.hpp"
#include "mvshape/fourier.hpp"

namespace testing_support {

using mvshape::MultiCurve;
using mvshape::PreShape;

/** Random curve whose harmonics decay like 1/l, so it looks like a smooth contour. */
inline MultiCurve<double> random_curve(std::mt19937_64& rng, int p, int M, double offset_scale = 1.0) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd A(2 * p, M);
  for (int r = 0; r < 2 * p; ++r)
    for (int c = 0; c < M; ++c) A(r, c) = normal(rng) / double(c / 2 + 1);
  Eigen::VectorXd B(2 * p);
  for (int r = 0; r < 2 * p; ++r) B(r) = offset_scale * normal(rng);
  return MultiCurve<double>(A, B);
}

inline PreShape<double> random_preshape(std::mt19937_64& rng, int p, int M) {
  return mvshape::center_and_scale(random_curve(rng, p, M)).preshape;
}

inline double uniform(std::mt19937_64& rng, double a = 0.0, double b = 1.0) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

}  // namespace testing_support
