#include "mvshape/ingest.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

#include "mvshape/errors.hpp"

namespace mvshape {

namespace {

void check_finite(const RawContour& rc) {
  for (const auto& q : rc.points)
    if (!q.allFinite()) throw DataError("contour contains a non-finite coordinate");
}

Eigen::MatrixXd design_matrix(const Eigen::VectorXd& t, BasisSpec spec) {
  Eigen::MatrixXd X(t.size(), spec.size() + 1);
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    X(k, 0) = 1.0;
    X.row(k).tail(spec.size()) = eval_basis(t(k), spec).transpose();
  }
  return X;
}

}  // namespace

RawContour drop_duplicate_points(const RawContour& rc) {
  RawContour out;
  out.points.reserve(rc.points.size());
  for (const auto& q : rc.points)
    if (out.points.empty() || q != out.points.back()) out.points.push_back(q);
  while (out.points.size() > 1 && out.points.back() == out.points.front()) out.points.pop_back();
  return out;
}

double signed_area(const RawContour& rc) {
  const auto& pts = rc.points;
  double twice = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto& a = pts[k];
    const auto& b = pts[(k + 1) % pts.size()];
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return 0.5 * twice;
}

RawContour orient_counter_clockwise(const RawContour& rc) {
  if (signed_area(rc) >= 0.0) return rc;
  RawContour out;
  out.points.reserve(rc.points.size());
  out.points.push_back(rc.points.front());
  for (std::size_t k = rc.points.size() - 1; k >= 1; --k) out.points.push_back(rc.points[k]);
  return out;
}

Eigen::VectorXd arclength_grid(const RawContour& rc) {
  const auto& pts = rc.points;
  if (pts.size() < 3) throw DataError("a contour needs at least 3 points");
  check_finite(rc);
  const std::size_t K = pts.size();
  Eigen::VectorXd t(K);
  t(0) = 0.0;
  for (std::size_t k = 1; k < K; ++k) t(k) = t(k - 1) + (pts[k] - pts[k - 1]).norm();
  const double perimeter = t(K - 1) + (pts.front() - pts.back()).norm();
  if (!(perimeter > 0.0)) throw DegenerateError("zero-perimeter contour (all points identical)");
  return t / perimeter;
}

ComponentCoefficients<double> fit_component(const RawContour& raw, BasisSpec spec) {
  check_finite(raw);
  const RawContour rc = orient_counter_clockwise(drop_duplicate_points(raw));
  if (rc.points.size() < 3) throw DegenerateError("contour collapses to fewer than 3 distinct points");
  const Eigen::Index needed = 2 * spec.size() + 1;
  if (static_cast<Eigen::Index>(rc.points.size()) < needed)
    throw FitError("contour has " + std::to_string(rc.points.size()) + " distinct points; basis size " +
                   std::to_string(spec.size()) + " needs at least " + std::to_string(needed));

  const Eigen::VectorXd t = arclength_grid(rc);
  const Eigen::MatrixXd X = design_matrix(t, spec);
  Eigen::MatrixXd Y(rc.points.size(), 2);
  for (std::size_t k = 0; k < rc.points.size(); ++k) Y.row(k) = rc.points[k].transpose();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);
  if (svd.rank() < X.cols()) throw FitError("rank-deficient Fourier design");
  const Eigen::MatrixXd beta = svd.solve(Y);  // (M+1) x 2

  ComponentCoefficients<double> out;
  out.B = beta.row(0).transpose();
  out.A = beta.bottomRows(spec.size()).transpose();
  return out;
}

MultiCurve<double> fit_curve(const RawMultiContour& rmc, BasisSpec spec) {
  if (rmc.contours.empty()) throw DataError("record '" + rmc.id + "' has no contours");
  std::vector<ComponentCoefficients<double>> comps;
  comps.reserve(rmc.contours.size());
  for (std::size_t j = 0; j < rmc.contours.size(); ++j) {
    try {
      comps.push_back(fit_component(rmc.contours[j], spec));
    } catch (const FitError& e) {
      throw FitError("record '" + rmc.id + "', component " + std::to_string(j + 1) + ": " + e.what());
    } catch (const DegenerateError& e) {
      throw DegenerateError("record '" + rmc.id + "', component " + std::to_string(j + 1) + ": " + e.what());
    }
  }
  return MultiCurve<double>::from_components(comps);
}

double fit_residual(const RawContour& raw, const ComponentCoefficients<double>& fitted) {
  const RawContour rc = orient_counter_clockwise(drop_duplicate_points(raw));
  const Eigen::VectorXd t = arclength_grid(rc);
  const BasisSpec spec(fitted.basis_size());
  double sse = 0.0;
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    const Eigen::Vector2d v = fitted.B + fitted.A * eval_basis(t(k), spec);
    sse += (v - rc.points[k]).squaredNorm();
  }
  return sse;
}

}  // namespace mvshape
