#include <algorithm>
#include <numeric>

#include "mvshape/classify.hpp"
#include "mvshape/sphere.hpp"

namespace mvshape {

std::string to_string(DesignScheme s) {
  switch (s) {
    case DesignScheme::Multi: return "multi";
    case DesignScheme::Uni: return "uni";
    case DesignScheme::Raw: return "raw";
  }
  return "?";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::GL1: return "gl1";
    case Method::GL2: return "gl2";
    case Method::PLS: return "pls";
    case Method::PCR: return "pcr";
  }
  return "?";
}

DesignScheme parse_design_scheme(const std::string& s) {
  if (s == "multi" || s == "our") return DesignScheme::Multi;
  if (s == "uni") return DesignScheme::Uni;
  if (s == "raw" || s == "cla") return DesignScheme::Raw;
  throw DomainError("unknown design '" + s + "' (expected multi, uni or raw)");
}

Method parse_method(const std::string& s) {
  if (s == "gl1") return Method::GL1;
  if (s == "gl2") return Method::GL2;
  if (s == "pls") return Method::PLS;
  if (s == "pcr") return Method::PCR;
  throw DomainError("unknown method '" + s + "' (expected gl1, gl2, pls or pcr)");
}

void Grouping::validate(int dimension) const {
  if (names.size() != members.size()) throw DataError("group names and members disagree");
  std::vector<int> seen(dimension, 0);
  for (const auto& g : members) {
    if (g.empty()) throw DataError("empty feature group");
    for (int f : g) {
      if (f < 0 || f >= dimension) throw DataError("feature index outside the design");
      ++seen[f];
    }
  }
  for (int c : seen)
    if (c != 1) throw DataError("groups do not partition the features");
}

Eigen::RowVectorXd flatten_coefficients(const MultiCurve<double>& c) {
  const int M = c.basis_size();
  Eigen::RowVectorXd row(feature_dimension(c.p(), M));
  for (int r = 0; r < 2 * c.p(); ++r) {
    row.segment(r * (M + 1), M) = c.A().row(r);
    row(r * (M + 1) + M) = c.B()(r);
  }
  return row;
}

Grouping group_by_component(int p, int M) {
  Grouping g;
  for (int j = 0; j < p; ++j) {
    g.names.push_back("c" + std::to_string(j + 1));
    std::vector<int> idx(2 * (M + 1));
    std::iota(idx.begin(), idx.end(), j * 2 * (M + 1));
    g.members.push_back(std::move(idx));
  }
  return g;
}

Grouping group_by_coordinate(int p, int M) {
  Grouping g;
  for (int j = 0; j < p; ++j)
    for (int r = 0; r < 2; ++r) {
      g.names.push_back((r == 0 ? "x" : "y") + std::to_string(j + 1));
      std::vector<int> idx(M + 1);
      std::iota(idx.begin(), idx.end(), (2 * j + r) * (M + 1));
      g.members.push_back(std::move(idx));
    }
  return g;
}

Grouping grouping_for(Method m, int p, int M) {
  return m == Method::GL2 ? group_by_coordinate(p, M) : group_by_component(p, M);
}

TangentDesign subset(const TangentDesign& d, std::span<const int> rows) {
  TangentDesign out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), d.X.cols());
  if (d.labels.size() > 0) out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.X.row(k) = d.X.row(rows[k]);
    if (d.labels.size() > 0) out.labels(k) = d.labels(rows[k]);
    if (!d.ids.empty()) out.ids.push_back(d.ids[rows[k]]);
  }
  out.grouping = d.grouping;
  out.p = d.p;
  out.M = d.M;
  out.scheme = d.scheme;
  return out;
}

TangentDesign with_grouping(TangentDesign d, Grouping g) {
  g.validate(static_cast<int>(d.X.cols()));
  d.grouping = std::move(g);
  return d;
}

namespace {

Eigen::VectorXi checked_labels(std::span<const int> labels, std::size_t n) {
  if (labels.empty()) return {};
  if (labels.size() != n) throw DataError("one label per curve expected");
  Eigen::VectorXi y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw DataError("labels must be 0 or 1");
    y(i) = labels[i];
  }
  return y;
}

}  // namespace

TangentDesign build_design(std::span<const Shape<double>> shapes, const PreShape<double>& mu,
                           std::span<const int> labels) {
  if (shapes.empty()) throw DataError("empty dataset");
  TangentDesign d;
  d.p = mu.p();
  d.M = mu.basis_size();
  d.scheme = DesignScheme::Multi;
  d.X.resize(static_cast<Eigen::Index>(shapes.size()), feature_dimension(d.p, d.M));
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (shapes[i].preshape.p() != d.p || shapes[i].preshape.basis_size() != d.M)
      throw DimensionError("shape and mean differ in components or basis size");
    d.X.row(i) = flatten_coefficients(log_map(shapes[i].preshape, mu).coefficients());
  }
  d.labels = checked_labels(labels, shapes.size());
  d.grouping = group_by_component(d.p, d.M);
  return d;
}

TangentDesign build_raw_design(std::span<const MultiCurve<double>> smoothed, std::span<const int> labels) {
  if (smoothed.empty()) throw DataError("empty dataset");
  TangentDesign d;
  d.p = smoothed.front().p();
  d.M = smoothed.front().basis_size();
  d.scheme = DesignScheme::Raw;
  d.X.resize(static_cast<Eigen::Index>(smoothed.size()), feature_dimension(d.p, d.M));
  for (std::size_t i = 0; i < smoothed.size(); ++i) {
    MultiCurve<double>::check_same_shape(smoothed[i], smoothed.front());
    d.X.row(i) = flatten_coefficients(smoothed[i]);
  }
  d.labels = checked_labels(labels, smoothed.size());
  d.grouping = group_by_component(d.p, d.M);
  return d;
}

TangentDesign build_uni_design(std::span<const MultiCurve<double>> smoothed, std::span<const int> labels,
                               const PipelineOptions<double>& options) {
  if (smoothed.empty()) throw DataError("empty dataset");
  const int p = smoothed.front().p();
  const int M = smoothed.front().basis_size();
  const Eigen::Index n = static_cast<Eigen::Index>(smoothed.size());
  const int block = 2 * (M + 1);
  TangentDesign d;
  d.p = p;
  d.M = M;
  d.scheme = DesignScheme::Uni;
  d.X.resize(n, feature_dimension(p, M));
  for (int j = 0; j < p; ++j) {
    std::vector<MultiCurve<double>> single;
    std::vector<std::string> ids;
    single.reserve(smoothed.size());
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
      MultiCurve<double>::check_same_shape(smoothed[i], smoothed.front());
      const ComponentCoefficients<double> c = smoothed[i].component(j);
      single.push_back(MultiCurve<double>::from_components(std::span(&c, 1)));
      ids.push_back(std::to_string(i));
    }
    PipelineOptions<double> opts = options;
    opts.seed = derive_seed(options.seed, 0x0a11, static_cast<std::uint64_t>(j));
    const PipelineResult res = estimate_pipeline_from_curves(single, std::move(ids), opts);
    for (Eigen::Index i = 0; i < n; ++i)
      d.X.row(i).segment(j * block, block) =
          flatten_coefficients(log_map(res.run.shapes[i].preshape, res.run.mean.mean).coefficients());
  }
  d.labels = checked_labels(labels, smoothed.size());
  d.grouping = group_by_component(p, M);
  return d;
}

TangentDesign build_design(DesignScheme scheme, std::span<const MultiCurve<double>> smoothed,
                           std::span<const int> labels, const PipelineOptions<double>& options) {
  switch (scheme) {
    case DesignScheme::Raw: return build_raw_design(smoothed, labels);
    case DesignScheme::Uni: return build_uni_design(smoothed, labels, options);
    case DesignScheme::Multi: {
      std::vector<std::string> ids;
      for (std::size_t i = 0; i < smoothed.size(); ++i) ids.push_back(std::to_string(i));
      const PipelineResult res = estimate_pipeline_from_curves(smoothed, std::move(ids), options);
      return build_design(res.run.shapes, res.run.mean.mean, labels);
    }
  }
  throw DomainError("unknown design scheme");
}

Eigen::VectorXd decision_values(const ClassifierModel& m, const Eigen::MatrixXd& X) {
  if (X.cols() != m.beta.size()) throw DimensionError("design and model feature counts differ");
  return (X * m.beta).array() + m.beta0;
}

Eigen::VectorXi predict(const ClassifierModel& m, const Eigen::MatrixXd& X) {
  return (decision_values(m, X).array() > 0.0).cast<int>();
}

double accuracy(const ClassifierModel& m, const Eigen::MatrixXd& X, const Eigen::VectorXi& labels) {
  if (labels.size() != X.rows()) throw DimensionError("one label per row expected");
  if (labels.size() == 0) throw DataError("accuracy of an empty set");
  const Eigen::VectorXi pred = predict(m, X);
  return 100.0 * static_cast<double>((pred.array() == labels.array()).count()) / static_cast<double>(labels.size());
}

}  // namespace mvshape
