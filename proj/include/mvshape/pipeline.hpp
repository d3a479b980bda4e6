#pragma once

// Interlaced estimation: smoothing, centering/scaling, then alternating ICF
// alignment against the current mean and intrinsic mean re-estimation.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mvshape/deformation.hpp"
#include "mvshape/ingest.hpp"
#include "mvshape/random.hpp"
#include "mvshape/sphere.hpp"

namespace mvshape {

template <typename Scalar>
struct PipelineOptions {
  /** Stop when eta <= xi or when the relative change of eta drops below xi. */
  Scalar xi = Scalar(1e-4);
  int max_outer = 50;
  /** Allowed increase of eta between outer iterations before the run is flagged and stopped. */
  Scalar eta_slack = Scalar(1e-10);
  std::uint64_t seed = 0;
  int icf_starts = 5;
  Scalar icf_tol = Scalar(1e-10);
  int icf_max_iter = 100;
  FrechetOptions<Scalar> karcher;
};

template <typename Scalar>
struct AlignmentRun {
  std::vector<Shape<Scalar>> shapes;
  FrechetMeanResult<Scalar> mean;
  std::vector<Scalar> theta;
  std::vector<VectorX<Scalar>> delta;
  std::vector<Scalar> objective;
  /** eta after every outer iteration. */
  std::vector<Scalar> eta;
  int template_index = 0;
  bool converged = false;
  bool eta_monotone = true;
  /** Every ICF alternation was monotone. */
  bool icf_monotone = true;
  int antipodal_warnings = 0;
};

/** Index of the randomly chosen initial template for a dataset of n pre-shapes. */
inline int initial_template_index(std::size_t n, std::uint64_t seed) {
  Rng rng = make_rng(seed, stream::kTemplateInit);
  return static_cast<int>(std::min<std::size_t>(n - 1, static_cast<std::size_t>(uniform01(rng) * double(n))));
}

/**
 * Alternate (a) ICF alignment of every pre-shape against the running mean and (b) the
 * intrinsic mean of the aligned shapes, starting from a randomly chosen pre-shape.
 * From the second outer iteration on, each curve's previous reparametrization is
 * tried as an extra ICF start, so eta cannot increase beyond roundoff.
 */
template <typename Scalar>
AlignmentRun<Scalar> align_and_average(std::span<const PreShape<Scalar>> preshapes,
                                       const PipelineOptions<Scalar>& options = {}) {
  using std::abs;
  using std::max;
  if (preshapes.empty()) throw DataError("empty dataset");
  if (options.max_outer < 1) throw DomainError("at least one outer iteration is required");
  const std::size_t n = preshapes.size();
  const int template_index = initial_template_index(n, options.seed);
  PreShape<Scalar> mu = preshapes[template_index];
  std::string template_id = "init:" + std::to_string(template_index);

  // Accepted state of the last completed outer iteration.
  struct State {
    std::vector<Scalar> theta, objective, eta;
    std::vector<VectorX<Scalar>> delta;
    std::optional<FrechetMeanResult<Scalar>> mean;
    bool converged = false, eta_monotone = true, icf_monotone = true;
    int antipodal_warnings = 0;
  } run;
  run.delta.assign(n, VectorX<Scalar>::Zero(mu.p()));

  std::vector<Shape<Scalar>> shapes;
  std::vector<Scalar> theta(n), objective(n);
  std::vector<VectorX<Scalar>> delta(n);
  bool have_previous = false;
  for (int outer = 0; outer < options.max_outer; ++outer) {
    std::vector<Shape<Scalar>> next_shapes;
    std::vector<PreShape<Scalar>> next_aligned;
    next_shapes.reserve(n);
    next_aligned.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      IcfOptions<Scalar> icf;
      icf.n_starts = options.icf_starts;
      icf.tol = options.icf_tol;
      icf.max_iter = options.icf_max_iter;
      icf.seed = derive_seed(options.seed, static_cast<std::uint64_t>(outer), i);
      icf.template_id = template_id;
      if (have_previous) icf.extra_starts.push_back(run.delta[i]);
      IcfResult<Scalar> r = icf_align(preshapes[i], mu, icf);
      run.icf_monotone = run.icf_monotone && r.monotone;
      theta[i] = r.theta;
      delta[i] = r.delta;
      objective[i] = r.objective;
      next_aligned.push_back(r.shape.preshape);
      next_shapes.push_back(std::move(r.shape));
    }

    FrechetOptions<Scalar> karcher = options.karcher;
    karcher.initial = mu;
    FrechetMeanResult<Scalar> mean = frechet_mean(std::span<const PreShape<Scalar>>(next_aligned), karcher);
    run.antipodal_warnings += mean.antipodal_exclusions;
    const Scalar eta = mean.variance;

    if (!run.eta.empty() && eta > run.eta.back() + options.eta_slack) {
      run.eta_monotone = false;
      run.eta.push_back(eta);
      break;
    }
    run.eta.push_back(eta);
    run.theta = theta;
    run.delta = delta;
    run.objective = objective;
    shapes = std::move(next_shapes);
    mu = mean.mean;
    template_id = "mean:" + std::to_string(outer + 1);
    for (auto& s : shapes) s.template_id = template_id;
    run.mean = std::move(mean);
    have_previous = true;

    const std::size_t t = run.eta.size();
    if (eta <= options.xi) {
      run.converged = true;
      break;
    }
    if (t >= 2) {
      const Scalar prev = run.eta[t - 2];
      if (abs(eta - prev) / max(prev, Scalar(1e-12)) < options.xi) {
        run.converged = true;
        break;
      }
    }
  }
  return AlignmentRun<Scalar>{std::move(shapes),   std::move(*run.mean), std::move(run.theta),
                              std::move(run.delta), std::move(run.objective), std::move(run.eta),
                              template_index,       run.converged,          run.eta_monotone,
                              run.icf_monotone,     run.antipodal_warnings};
}

template <typename Scalar>
AlignmentRun<Scalar> align_and_average(const std::vector<PreShape<Scalar>>& preshapes,
                                       const PipelineOptions<Scalar>& options = {}) {
  return align_and_average(std::span<const PreShape<Scalar>>(preshapes), options);
}

/** Everything produced by the raw-contour pipeline. */
struct PipelineResult {
  std::vector<std::string> ids;
  std::vector<MultiCurve<double>> smoothed;
  std::vector<PreShape<double>> preshapes;
  std::vector<DeformationParams<double>> params;
  AlignmentRun<double> run;
};

/** Smooth, center and scale every record, then run align_and_average. Errors carry the record id. */
PipelineResult estimate_pipeline(std::span<const RawMultiContour> dataset, BasisSpec spec,
                                 const PipelineOptions<double>& options = {});

/** Same as estimate_pipeline, starting from already smoothed curves. */
PipelineResult estimate_pipeline_from_curves(std::span<const MultiCurve<double>> curves,
                                             std::vector<std::string> ids,
                                             const PipelineOptions<double>& options = {});

}  // namespace mvshape
