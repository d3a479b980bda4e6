#include <algorithm>
#include <numeric>

#include "mvshape/classify.hpp"
#include "mvshape/random.hpp"

namespace mvshape {

namespace {

std::vector<int> rows_where(const std::vector<int>& fold_of, int fold, bool in_fold) {
  std::vector<int> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i)
    if ((fold_of[i] == fold) == in_fold) rows.push_back(static_cast<int>(i));
  return rows;
}

int class_count(const Eigen::VectorXi& labels, int c) { return static_cast<int>((labels.array() == c).count()); }

std::vector<double> default_grid(const TangentDesign& train, Method method) {
  if (method == Method::GL1 || method == Method::GL2) return lambda_grid(train);
  std::vector<double> grid(max_components(train));
  std::iota(grid.begin(), grid.end(), 1.0);
  return grid;
}

bool is_group_lasso(Method m) { return m == Method::GL1 || m == Method::GL2; }

// One model per grid entry, fitted on `train`.
std::vector<ClassifierModel> fit_grid(const TangentDesign& train, Method method, std::span<const double> grid,
                                      const GroupLassoOptions& gl) {
  std::vector<ClassifierModel> models;
  if (is_group_lasso(method)) {
    models = fit_group_lasso_path(train, grid, gl);
    for (auto& m : models) m.method = method;
    return models;
  }
  int h = 1;
  for (double g : grid) h = std::max(h, static_cast<int>(g));
  const Eigen::VectorXd y = train.labels.cast<double>();
  const LinearPath path = method == Method::PLS ? pls_path(train.X, y, h) : pcr_path(train.X, y, h);
  for (double g : grid) models.push_back(discriminant_from_path(path, static_cast<int>(g), train, method));
  return models;
}

}  // namespace

std::vector<int> stratified_folds(const Eigen::VectorXi& labels, int k, std::uint64_t seed) {
  if (k < 2) throw DomainError("at least two folds are required");
  if (labels.size() < k) throw DataError("fewer samples than folds");
  std::vector<int> fold_of(static_cast<std::size_t>(labels.size()), -1);
  int next = 0;
  for (int c = 0; c <= 1; ++c) {
    std::vector<int> members;
    for (Eigen::Index i = 0; i < labels.size(); ++i)
      if (labels(i) == c) members.push_back(static_cast<int>(i));
    Rng rng = make_rng(seed, stream::kFolds, static_cast<std::uint64_t>(c));
    // Fisher-Yates with our own uniform draws so the split does not depend on the standard library.
    for (std::size_t i = members.size(); i > 1; --i) {
      const std::size_t j = std::min(i - 1, static_cast<std::size_t>(uniform01(rng) * double(i)));
      std::swap(members[i - 1], members[j]);
    }
    for (int idx : members) {
      fold_of[idx] = next;
      next = (next + 1) % k;
    }
  }
  return fold_of;
}

CVReport cross_validate(const TangentDesign& d, Method method, std::span<const double> hyper_grid,
                        const CVOptions& options) {
  if (d.labels.size() != d.rows()) throw DataError("cross-validation needs a labelled design");
  for (Eigen::Index i = 0; i < d.labels.size(); ++i)
    if (d.labels(i) != 0 && d.labels(i) != 1) throw DataError("labels must be 0 or 1");
  if (std::min(class_count(d.labels, 0), class_count(d.labels, 1)) < 2)
    throw DataError("every class needs at least two samples for stratified cross-validation");
  if (options.folds < 2) throw DomainError("at least two folds are required");

  TangentDesign design = is_group_lasso(method) ? with_grouping(d, grouping_for(method, d.p, d.M)) : d;

  CVReport report;
  report.method = method;
  report.design = d.scheme;
  report.scenario = options.scenario;
  report.fold_of = stratified_folds(design.labels, options.folds, derive_seed(options.seed, 0));

  for (int fold = 0; fold < options.folds; ++fold) {
    const std::vector<int> test_rows = rows_where(report.fold_of, fold, true);
    const std::vector<int> train_rows = rows_where(report.fold_of, fold, false);
    const TangentDesign train = subset(design, train_rows);
    const TangentDesign test = subset(design, test_rows);

    const std::vector<double> grid =
        hyper_grid.empty() ? default_grid(train, method) : std::vector<double>(hyper_grid.begin(), hyper_grid.end());
    if (grid.empty()) throw DomainError("empty hyperparameter grid");

    // Inner selection on the training fold.
    std::size_t chosen = 0;
    if (grid.size() > 1) {
      const int inner = std::max(2, std::min({options.inner_folds, class_count(train.labels, 0),
                                              class_count(train.labels, 1)}));
      const std::vector<int> inner_of =
          stratified_folds(train.labels, inner, derive_seed(options.seed, static_cast<std::uint64_t>(fold + 1)));
      std::vector<double> errors(grid.size(), 0.0);
      for (int f = 0; f < inner; ++f) {
        const TangentDesign itrain = subset(train, rows_where(inner_of, f, false));
        const TangentDesign itest = subset(train, rows_where(inner_of, f, true));
        const std::vector<ClassifierModel> models = fit_grid(itrain, method, grid, options.group_lasso);
        for (std::size_t g = 0; g < grid.size(); ++g) {
          const Eigen::VectorXi pred = predict(models[g], itest.X);
          errors[g] += static_cast<double>((pred.array() != itest.labels.array()).count());
        }
      }
      chosen = static_cast<std::size_t>(std::min_element(errors.begin(), errors.end()) - errors.begin());
    }

    const std::vector<double> path_grid(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(chosen) + 1);
    const std::vector<ClassifierModel> models =
        is_group_lasso(method) ? fit_grid(train, method, path_grid, options.group_lasso)
                               : fit_grid(train, method, std::span<const double>(&grid[chosen], 1), options.group_lasso);
    const ClassifierModel& model = models.back();
    report.fold_accuracy.push_back(accuracy(model, test.X, test.labels));
    report.selected_hyper.push_back(grid[chosen]);
  }
  report.mean_accuracy = std::accumulate(report.fold_accuracy.begin(), report.fold_accuracy.end(), 0.0) /
                         double(report.fold_accuracy.size());
  return report;
}

}  // namespace mvshape
