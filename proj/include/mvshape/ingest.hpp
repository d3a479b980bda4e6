#pragma once

// Raw discretized contours and their least-squares Fourier smoothing.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "mvshape/fourier.hpp"

namespace mvshape {

/** Ordered polygon vertices in image units; the polygon is treated as closed. */
struct RawContour {
  std::vector<Eigen::Vector2d> points;
};

struct RawMultiContour {
  std::vector<RawContour> contours;
  std::optional<int> label;
  std::string id;
};

inline constexpr int kDefaultBasisSize = 22;

/** Removes consecutive repeated vertices, including a closing copy of the first vertex. */
RawContour drop_duplicate_points(const RawContour& rc);

/** Shoelace signed area; positive for counter-clockwise traversal. */
double signed_area(const RawContour& rc);

/** Counter-clockwise version of rc, keeping the first vertex as the starting point. */
RawContour orient_counter_clockwise(const RawContour& rc);

/**
 * Normalized cumulative arc length of the closed polygon: t_1 = 0 and
 * t_k in [0,1). Nondecreasing; strictly increasing when no vertex repeats.
 */
Eigen::VectorXd arclength_grid(const RawContour& rc);

/** Least-squares fit of one contour against [1, phi(t_k)] on its arc-length grid. */
ComponentCoefficients<double> fit_component(const RawContour& rc, BasisSpec spec);

/**
 * Smooth every contour of rmc: duplicates dropped, orientation made counter-clockwise,
 * arc-length parametrization, then OLS against the Fourier design.
 */
MultiCurve<double> fit_curve(const RawMultiContour& rmc, BasisSpec spec);

/** Sum of squared residuals of a fitted component at the contour vertices. */
double fit_residual(const RawContour& rc, const ComponentCoefficients<double>& fitted);

}  // namespace mvshape
