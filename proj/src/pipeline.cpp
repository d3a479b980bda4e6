#include "mvshape/pipeline.hpp"

namespace mvshape {

PipelineResult estimate_pipeline(std::span<const RawMultiContour> dataset, BasisSpec spec,
                                 const PipelineOptions<double>& options) {
  if (dataset.empty()) throw DataError("empty dataset");
  std::vector<MultiCurve<double>> curves;
  std::vector<std::string> ids;
  curves.reserve(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    curves.push_back(fit_curve(dataset[i], spec));
    ids.push_back(dataset[i].id.empty() ? std::to_string(i) : dataset[i].id);
  }
  return estimate_pipeline_from_curves(curves, std::move(ids), options);
}

PipelineResult estimate_pipeline_from_curves(std::span<const MultiCurve<double>> curves, std::vector<std::string> ids,
                                             const PipelineOptions<double>& options) {
  if (curves.empty()) throw DataError("empty dataset");
  if (ids.size() != curves.size()) throw DataError("one id per curve expected");
  const int p = curves.front().p();
  std::vector<PreShape<double>> preshapes;
  std::vector<DeformationParams<double>> params;
  preshapes.reserve(curves.size());
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (curves[i].p() != p || curves[i].basis_size() != curves.front().basis_size())
      throw DataError("record '" + ids[i] + "': inconsistent number of components or basis size");
    try {
      CenterScaleResult<double> cs = center_and_scale(curves[i]);
      preshapes.push_back(cs.preshape);
      params.push_back({cs.T, cs.rho, 0.0, Eigen::VectorXd::Zero(p)});
    } catch (const Error& e) {
      throw DegenerateError("record '" + ids[i] + "': " + e.what());
    }
  }

  AlignmentRun<double> run = align_and_average(preshapes, options);
  for (std::size_t i = 0; i < params.size(); ++i) {
    params[i].theta = run.theta[i];
    params[i].delta = run.delta[i];
  }
  return PipelineResult{std::move(ids), std::vector<MultiCurve<double>>(curves.begin(), curves.end()),
                        std::move(preshapes), std::move(params), std::move(run)};
}

}  // namespace mvshape
