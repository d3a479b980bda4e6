#pragma once

// Supervised classification from tangent-space (or raw coefficient) predictors:
// group-lasso logistic regression and PLS/PCR linear discriminants, with nested
// stratified cross-validation.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvshape/deformation.hpp"
#include "mvshape/pipeline.hpp"

namespace mvshape {

enum class DesignScheme { Multi, Uni, Raw };
enum class Method { GL1, GL2, PLS, PCR };

std::string to_string(DesignScheme s);
std::string to_string(Method m);
DesignScheme parse_design_scheme(const std::string& s);
Method parse_method(const std::string& s);

/** A partition of feature indices into named groups. */
struct Grouping {
  std::vector<std::string> names;
  std::vector<std::vector<int>> members;

  std::size_t size() const { return members.size(); }
  /** Throws DataError unless the groups partition 0..dimension-1 exactly. */
  void validate(int dimension) const;
};

/**
 * Feature layout, per component j and coordinate r (x then y):
 * [A(2j+r, 0..M-1), B(2j+r)], so each component spans 2(M+1) consecutive features.
 */
inline int feature_dimension(int p, int M) { return p * (2 * M + 2); }
Eigen::RowVectorXd flatten_coefficients(const MultiCurve<double>& c);

/** One group per component (GL1). */
Grouping group_by_component(int p, int M);
/** One group per coordinate function (GL2). */
Grouping group_by_coordinate(int p, int M);
Grouping grouping_for(Method m, int p, int M);

struct TangentDesign {
  Eigen::MatrixXd X;
  /** Binary labels; may be empty for an unlabelled design. */
  Eigen::VectorXi labels;
  Grouping grouping;
  int p = 0;
  int M = 0;
  DesignScheme scheme = DesignScheme::Multi;
  std::vector<std::string> ids;

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index features() const { return X.cols(); }
};

/** Rows `rows` of the design (labels, ids and grouping carried along). */
TangentDesign subset(const TangentDesign& d, std::span<const int> rows);
TangentDesign with_grouping(TangentDesign d, Grouping g);

/** MULTI: log-map every aligned shape at mu and flatten. */
TangentDesign build_design(std::span<const Shape<double>> shapes, const PreShape<double>& mu,
                           std::span<const int> labels = {});

/** RAW: smoothed coefficients, no alignment. */
TangentDesign build_raw_design(std::span<const MultiCurve<double>> smoothed, std::span<const int> labels = {});

/**
 * UNI: every component is centered, scaled, aligned and averaged on its own (p = 1),
 * and the p univariate tangent projections are concatenated.
 */
TangentDesign build_uni_design(std::span<const MultiCurve<double>> smoothed, std::span<const int> labels,
                               const PipelineOptions<double>& options);

/** Dispatch on the scheme; MULTI runs the multivariate pipeline on the smoothed curves first. */
TangentDesign build_design(DesignScheme scheme, std::span<const MultiCurve<double>> smoothed,
                           std::span<const int> labels, const PipelineOptions<double>& options);

/** Linear classifier: predicted class is 1 when beta0 + <x, beta> > 0. */
struct ClassifierModel {
  Method method = Method::PLS;
  double beta0 = 0.0;
  Eigen::VectorXd beta;
  /** Selected lambda (GL) or number of components (PLS/PCR). */
  double hyper = 0.0;
  Grouping groups;
  /** Per group: nonzero coefficients (GL only). */
  std::vector<bool> active_groups;
  bool converged = true;
  std::string warning;
};

Eigen::VectorXd decision_values(const ClassifierModel& m, const Eigen::MatrixXd& X);
Eigen::VectorXi predict(const ClassifierModel& m, const Eigen::MatrixXd& X);
/** Percentage of correctly classified rows. */
double accuracy(const ClassifierModel& m, const Eigen::MatrixXd& X, const Eigen::VectorXi& labels);

// ---------------------------------------------------------------------------
// Group-lasso logistic regression

struct GroupLassoOptions {
  double tol = 1e-8;
  int max_sweeps = 10000;
  int max_newton = 100;
};

/** (1/n) sum_i [log(1 + exp(eta_i)) - y_i eta_i] + lambda sum_g sqrt(dim_g) |beta_g|. */
double group_lasso_objective(const TangentDesign& d, double beta0, const Eigen::VectorXd& beta, double lambda);

/** Smallest lambda at which every group is zero at the optimum. */
double lambda_max(const TangentDesign& d);

/** {0.96^l lambda_max, l = 0..148} followed by 0. */
std::vector<double> lambda_grid(const TangentDesign& d);

/**
 * Proximal Newton iterations; each quadratic model is minimized by block coordinate
 * descent with exact group updates. The intercept is unpenalized. `warm` seeds the
 * coefficients (used along a lambda path).
 */
ClassifierModel fit_group_lasso_logistic(const TangentDesign& d, double lambda, const GroupLassoOptions& options = {},
                                         const ClassifierModel* warm = nullptr);

/** Fits along `lambdas` in the given order with warm starts. */
std::vector<ClassifierModel> fit_group_lasso_path(const TangentDesign& d, std::span<const double> lambdas,
                                                  const GroupLassoOptions& options = {});

// ---------------------------------------------------------------------------
// PLS / PCR discriminants

/** Regression coefficients of the centered response for 1..h components. */
struct LinearPath {
  Eigen::RowVectorXd x_mean;
  double y_mean = 0.0;
  std::vector<Eigen::VectorXd> coefficients;
  bool truncated = false;
};

/** NIPALS PLS1 regression of the centered labels on the centered features. */
LinearPath pls_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int max_components);
/** Regression on the leading principal-component scores of the centered features. */
LinearPath pcr_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, int max_components);

/** Threshold the regression score at the midpoint of the two class means of the training scores. */
ClassifierModel discriminant_from_path(const LinearPath& path, int components, const TangentDesign& train,
                                       Method method);

ClassifierModel fit_pls_discriminant(const TangentDesign& d, int n_components);
ClassifierModel fit_pcr_discriminant(const TangentDesign& d, int n_components);

/** Largest component count on the default grid {1, ..., 2pM - 1}, capped by n - 1 and the feature count. */
int max_components(const TangentDesign& d);

// ---------------------------------------------------------------------------
// Cross-validation

struct CVOptions {
  int folds = 10;
  int inner_folds = 5;
  std::uint64_t seed = 0;
  std::string scenario = "";
  GroupLassoOptions group_lasso;
};

struct CVReport {
  Method method = Method::PLS;
  DesignScheme design = DesignScheme::Multi;
  std::string scenario;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  std::vector<double> selected_hyper;
  /** Test-fold index of every sample. */
  std::vector<int> fold_of;
};

/** Stratified fold assignment: every class is shuffled and dealt round-robin. */
std::vector<int> stratified_folds(const Eigen::VectorXi& labels, int k, std::uint64_t seed);

/**
 * Outer stratified k-fold; within each training fold the hyperparameter minimizing the
 * inner-CV classification error is refit and tested. An empty hyper_grid selects the
 * default grid of the method (150-point lambda grid of the training fold, or
 * 1..max_components components).
 */
CVReport cross_validate(const TangentDesign& d, Method method, std::span<const double> hyper_grid,
                        const CVOptions& options);

}  // namespace mvshape
