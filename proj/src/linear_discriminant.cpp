#include <algorithm>
#include <cmath>

#include "mvshape/classify.hpp"

namespace mvshape {

namespace {

void check_xy(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int max_components) {
  if (X.rows() < 2) throw DataError("at least two rows are required");
  if (y.size() != X.rows()) throw DimensionError("one response per row expected");
  if (max_components < 1) throw DomainError("at least one component is required");
}

}  // namespace

LinearPath pls_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int max_components) {
  check_xy(X, y, max_components);
  LinearPath path;
  path.x_mean = X.colwise().mean();
  path.y_mean = y.mean();
  Eigen::MatrixXd E = X.rowwise() - path.x_mean;
  Eigen::VectorXd f = y.array() - path.y_mean;
  const double x_scale = std::max(E.norm(), 1e-300);
  const double y_scale = std::max(f.norm(), 1e-300);

  const Eigen::Index q = X.cols();
  Eigen::MatrixXd W(q, 0), P(q, 0);
  Eigen::VectorXd c(0);
  for (int a = 0; a < max_components; ++a) {
    Eigen::VectorXd w = E.transpose() * f;
    const double wn = w.norm();
    if (wn <= 1e-12 * x_scale * y_scale) {
      path.truncated = true;
      break;
    }
    w /= wn;
    const Eigen::VectorXd t = E * w;
    const double tt = t.squaredNorm();
    if (tt <= 1e-24 * x_scale * x_scale) {
      path.truncated = true;
      break;
    }
    const Eigen::VectorXd p = E.transpose() * t / tt;
    const double ca = f.dot(t) / tt;
    E -= t * p.transpose();
    f -= ca * t;

    W.conservativeResize(Eigen::NoChange, a + 1);
    P.conservativeResize(Eigen::NoChange, a + 1);
    c.conservativeResize(a + 1);
    W.col(a) = w;
    P.col(a) = p;
    c(a) = ca;
    // P'W is unit upper triangular for NIPALS weights.
    const Eigen::MatrixXd PW = P.transpose() * W;
    path.coefficients.push_back(W * PW.triangularView<Eigen::Upper>().solve(c));
  }
  if (path.coefficients.empty()) path.coefficients.push_back(Eigen::VectorXd::Zero(q));
  return path;
}

LinearPath pcr_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int max_components) {
  check_xy(X, y, max_components);
  LinearPath path;
  path.x_mean = X.colwise().mean();
  path.y_mean = y.mean();
  const Eigen::MatrixXd E = X.rowwise() - path.x_mean;
  const Eigen::VectorXd f = y.array() - path.y_mean;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s(rank) > 1e-10 * std::max(s(0), 1e-300)) ++rank;
  const int h = std::min(rank, max_components);
  if (h < max_components) path.truncated = true;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  for (int a = 0; a < h; ++a) {
    beta += svd.matrixV().col(a) * (svd.matrixU().col(a).dot(f) / s(a));
    path.coefficients.push_back(beta);
  }
  if (path.coefficients.empty()) path.coefficients.push_back(beta);
  return path;
}

ClassifierModel discriminant_from_path(const LinearPath& path, int components, const TangentDesign& train,
                                       Method method) {
  if (components < 1) throw DomainError("at least one component is required");
  if (train.labels.size() != train.rows()) throw DataError("design has no labels");
  ClassifierModel m;
  m.method = method;
  const int available = static_cast<int>(path.coefficients.size());
  if (components > available) m.warning = "component count exceeds the rank; truncated to " + std::to_string(available);
  const Eigen::VectorXd& beta = path.coefficients[std::min(components, available) - 1];
  m.hyper = components;

  const Eigen::VectorXd score = (train.X.rowwise() - path.x_mean) * beta;
  double s0 = 0.0, s1 = 0.0;
  int n0 = 0, n1 = 0;
  for (Eigen::Index i = 0; i < score.size(); ++i) {
    if (train.labels(i) == 1) {
      s1 += score(i);
      ++n1;
    } else {
      s0 += score(i);
      ++n0;
    }
  }
  if (n0 == 0 || n1 == 0) throw DataError("discriminant needs both classes in the training data");
  const double m0 = s0 / n0, m1 = s1 / n1;
  const double sign = m1 >= m0 ? 1.0 : -1.0;
  const double mid = 0.5 * (m0 + m1);
  m.beta = sign * beta;
  m.beta0 = -sign * (path.x_mean.dot(beta) + mid);
  m.groups = train.grouping;
  return m;
}

int max_components(const TangentDesign& d) {
  const int grid_max = std::max(1, 2 * d.p * d.M - 1);
  return std::max(1, std::min({grid_max, static_cast<int>(d.rows()) - 1, static_cast<int>(d.features())}));
}

ClassifierModel fit_pls_discriminant(const TangentDesign& d, int n_components) {
  if (n_components < 1) throw DomainError("at least one component is required");
  const LinearPath path = pls_path(d.X, d.labels.cast<double>(), n_components);
  return discriminant_from_path(path, n_components, d, Method::PLS);
}

ClassifierModel fit_pcr_discriminant(const TangentDesign& d, int n_components) {
  if (n_components < 1) throw DomainError("at least one component is required");
  const LinearPath path = pcr_path(d.X, d.labels.cast<double>(), n_components);
  return discriminant_from_path(path, n_components, d, Method::PCR);
}

}  // namespace mvshape
