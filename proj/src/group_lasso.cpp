#include <algorithm>
#include <cmath>
#include <limits>

#include "mvshape/classify.hpp"

namespace mvshape {

namespace {

double log1pexp(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require_labels(const TangentDesign& d) {
  if (d.rows() == 0) throw DataError("empty design");
  if (d.labels.size() != d.rows()) throw DataError("design has no labels");
  d.grouping.validate(static_cast<int>(d.features()));
}

double penalty(const TangentDesign& d, const Eigen::VectorXd& beta) {
  double s = 0.0;
  for (const auto& g : d.grouping.members) {
    double sq = 0.0;
    for (int f : g) sq += beta(f) * beta(f);
    s += std::sqrt(double(g.size())) * std::sqrt(sq);
  }
  return s;
}

double nll(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) s += log1pexp(eta(i)) - y(i) * eta(i);
  return s / double(eta.size());
}

// argmin_z 1/2 z'Hz + c'z + mu |z| for H = V diag(lam) V' positive semidefinite.
Eigen::VectorXd group_step(const Eigen::VectorXd& lam, const Eigen::MatrixXd& V, const Eigen::VectorXd& c, double mu) {
  const double cn = c.norm();
  if (cn <= mu * (1.0 + 1e-12)) return Eigen::VectorXd::Zero(c.size());
  const Eigen::VectorXd ch = V.transpose() * c;
  if (mu == 0.0) {
    const double cut = 1e-12 * std::max(lam.maxCoeff(), 1e-300);
    Eigen::VectorXd zh(ch.size());
    for (Eigen::Index k = 0; k < ch.size(); ++k) zh(k) = lam(k) > cut ? -ch(k) / lam(k) : 0.0;
    return V * zh;
  }
  // tau |z(tau)| = mu with z(tau) = -(H + tau I)^{-1} c; the left side increases in tau.
  auto h = [&](double tau, double* dh) {
    double f = 0.0, fp = 0.0;
    for (Eigen::Index k = 0; k < ch.size(); ++k) {
      const double den = lam(k) + tau;
      f += ch(k) * ch(k) / (den * den);
      fp -= 2.0 * ch(k) * ch(k) / (den * den * den);
    }
    const double sf = std::sqrt(f);
    if (dh) *dh = sf + tau * fp / (2.0 * sf);
    return tau * sf - mu;
  };
  double lo = 0.0, hi = std::max(lam.maxCoeff(), 1e-300) * mu / (cn - mu);
  double tau = hi;
  for (int it = 0; it < 200; ++it) {
    double dh = 0.0;
    const double v = h(tau, &dh);
    if (std::abs(v) <= 1e-14 * mu) break;
    if (v > 0) hi = tau; else lo = tau;
    double next = tau - v / dh;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-15 * hi) break;
    tau = next;
  }
  Eigen::VectorXd zh(ch.size());
  for (Eigen::Index k = 0; k < ch.size(); ++k) zh(k) = -ch(k) / (lam(k) + tau);
  return V * zh;
}

}  // namespace

double group_lasso_objective(const TangentDesign& d, double beta0, const Eigen::VectorXd& beta, double lambda) {
  require_labels(d);
  const Eigen::VectorXd eta = (d.X * beta).array() + beta0;
  return nll(eta, d.labels.cast<double>()) + lambda * penalty(d, beta);
}

double lambda_max(const TangentDesign& d) {
  require_labels(d);
  const Eigen::VectorXd y = d.labels.cast<double>();
  const double n = double(d.rows());
  const Eigen::VectorXd grad = d.X.transpose() * (Eigen::VectorXd::Constant(y.size(), y.mean()) - y) / n;
  double best = 0.0;
  for (const auto& g : d.grouping.members) {
    double sq = 0.0;
    for (int f : g) sq += grad(f) * grad(f);
    best = std::max(best, std::sqrt(sq) / std::sqrt(double(g.size())));
  }
  return best;
}

std::vector<double> lambda_grid(const TangentDesign& d) {
  const double lmax = lambda_max(d);
  std::vector<double> grid;
  grid.reserve(150);
  for (int l = 0; l <= 148; ++l) grid.push_back(std::pow(0.96, l) * lmax);
  grid.push_back(0.0);
  return grid;
}

ClassifierModel fit_group_lasso_logistic(const TangentDesign& d, double lambda, const GroupLassoOptions& options,
                                         const ClassifierModel* warm) {
  require_labels(d);
  if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
  const Eigen::Index n = d.rows(), q = d.features();
  const Eigen::VectorXd y = d.labels.cast<double>();
  const double ybar = y.mean();
  if (ybar == 0.0 || ybar == 1.0) throw DataError("group lasso needs both classes");

  // Augmented design: column 0 is the intercept.
  Eigen::MatrixXd Z(n, q + 1);
  Z.col(0).setOnes();
  Z.rightCols(q) = d.X;
  std::vector<std::vector<int>> blocks{{0}};
  std::vector<double> weight{0.0};
  for (const auto& g : d.grouping.members) {
    std::vector<int> b;
    for (int f : g) b.push_back(f + 1);
    blocks.push_back(std::move(b));
    weight.push_back(std::sqrt(double(g.size())));
  }

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(q + 1);
  if (warm && warm->beta.size() == q) {
    theta(0) = warm->beta0;
    theta.tail(q) = warm->beta;
  } else {
    theta(0) = std::log(ybar / (1.0 - ybar));
  }

  auto full_objective = [&](const Eigen::VectorXd& th) {
    return nll(Z * th, y) + lambda * penalty(d, th.tail(q));
  };
  auto block_norm = [&](const Eigen::VectorXd& v, const std::vector<int>& b) {
    double sq = 0.0;
    for (int f : b) sq += v(f) * v(f);
    return std::sqrt(sq);
  };

  double F = full_objective(theta);
  bool converged = false;
  int sweeps = 0;
  for (int newton = 0; newton < options.max_newton && sweeps < options.max_sweeps; ++newton) {
    const Eigen::VectorXd eta = Z * theta;
    Eigen::VectorXd prob(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      prob(i) = sigmoid(eta(i));
      w(i) = std::max(prob(i) * (1.0 - prob(i)), 1e-10) / double(n);
    }
    const Eigen::VectorXd grad = Z.transpose() * (prob - y) / double(n);
    const Eigen::MatrixXd H = Z.transpose() * w.asDiagonal() * Z;
    std::vector<Eigen::MatrixXd> Hb(blocks.size()), V(blocks.size());
    std::vector<Eigen::VectorXd> lam(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& idx = blocks[b];
      const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
      Hb[b].resize(m, m);
      for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index c = 0; c < m; ++c) Hb[b](a, c) = H(idx[a], idx[c]);
      if (b == 0) continue;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hb[b]);
      lam[b] = es.eigenvalues().cwiseMax(0.0);
      V[b] = es.eigenvectors();
    }

    // Minimize the local quadratic model plus penalty by block coordinate descent.
    Eigen::VectorXd next = theta;
    Eigen::VectorXd r = grad;  // gradient of the smooth model at `next`
    for (; sweeps < options.max_sweeps; ++sweeps) {
      double change = 0.0, scale = 1e-300;
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const auto& idx = blocks[b];
        const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
        Eigen::VectorXd zb(m), cb(m);
        for (Eigen::Index a = 0; a < m; ++a) zb(a) = next(idx[a]);
        for (Eigen::Index a = 0; a < m; ++a) cb(a) = r(idx[a]) - Hb[b].row(a).dot(zb);
        const Eigen::VectorXd znew =
            b == 0 ? Eigen::VectorXd(-cb / Hb[0](0, 0)) : group_step(lam[b], V[b], cb, lambda * weight[b]);
        const Eigen::VectorXd diff = znew - zb;
        if (diff.squaredNorm() == 0.0) continue;
        for (Eigen::Index a = 0; a < m; ++a) {
          r += H.col(idx[a]) * diff(a);
          next(idx[a]) = znew(a);
        }
        change = std::max(change, diff.cwiseAbs().maxCoeff());
        scale = std::max(scale, znew.cwiseAbs().maxCoeff());
      }
      if (change <= 1e-12 * std::max(1.0, scale)) {
        ++sweeps;
        break;
      }
    }

    // Backtracking on the true objective along the proximal Newton direction.
    const Eigen::VectorXd dir = next - theta;
    const double scale = std::max(1.0, theta.cwiseAbs().maxCoeff());
    if (dir.cwiseAbs().maxCoeff() <= 1e-10 * scale) {
      converged = true;
      break;
    }
    double pen_now = 0.0, pen_next = 0.0;
    for (std::size_t b = 1; b < blocks.size(); ++b) {
      pen_now += weight[b] * block_norm(theta, blocks[b]);
      pen_next += weight[b] * block_norm(next, blocks[b]);
    }
    const double decrease = grad.dot(dir) + lambda * (pen_next - pen_now);
    double t = 1.0, Fnew = full_objective(next);
    while (Fnew > F + 1e-4 * t * decrease && t > 1e-10) {
      t *= 0.5;
      Fnew = full_objective(theta + t * dir);
    }
    if (Fnew >= F) {
      // Predicted decrease below working precision: the current point is the optimum.
      converged = -decrease <= 1e-12 * std::max(1.0, std::abs(F));
      break;
    }
    const double step = t * dir.cwiseAbs().maxCoeff();
    theta += t * dir;
    const double rel = (F - Fnew) / std::max(1.0, std::abs(Fnew));
    F = Fnew;
    if (rel <= options.tol && step <= 1e-8 * scale) {
      converged = true;
      break;
    }
  }

  ClassifierModel m;
  m.method = d.grouping.members == group_by_coordinate(d.p, d.M).members ? Method::GL2 : Method::GL1;
  m.beta0 = theta(0);
  m.beta = theta.tail(q);
  m.hyper = lambda;
  m.groups = d.grouping;
  for (std::size_t b = 1; b < blocks.size(); ++b) m.active_groups.push_back(block_norm(theta, blocks[b]) > 0.0);
  m.converged = converged;
  if (!converged) m.warning = "group lasso did not converge within the iteration limit";
  return m;
}

std::vector<ClassifierModel> fit_group_lasso_path(const TangentDesign& d, std::span<const double> lambdas,
                                                  const GroupLassoOptions& options) {
  std::vector<ClassifierModel> path;
  path.reserve(lambdas.size());
  for (double l : lambdas) path.push_back(fit_group_lasso_logistic(d, l, options, path.empty() ? nullptr : &path.back()));
  return path;
}

}  // namespace mvshape
