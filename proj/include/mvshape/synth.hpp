#pragma once

// Synthetic data: perturbed and deformed copies of a template, cyclic error
// metrics, random rigid/starting-point deformations, and two-class contour sets.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "mvshape/deformation.hpp"
#include "mvshape/ingest.hpp"

namespace mvshape {

/**
 * Built-in three-component template (two elongated lateral ovals around a smaller
 * central one, pixel-like units, M = 22), jointly centered. Used when no observed
 * template is supplied.
 */
MultiCurve<double> builtin_template();

/** Index of the central component of builtin_template(). */
inline constexpr int kBuiltinCentralComponent = 1;

struct SynthConfig {
  MultiCurve<double> templ;
  int n = 500;
  double sigma = 0.1;
  std::uint64_t seed = 0;
};

struct SynthSample {
  std::vector<PreShape<double>> preshapes;
  Eigen::VectorXd true_theta;
  /** n x p. */
  Eigen::MatrixXd true_delta;
  Eigen::VectorXd kappa;
  /** Perturbed coefficient blocks a~_i (2p x M each), before rotation and scaling. */
  std::vector<Eigen::MatrixXd> perturbed;
};

/** The template with its joint center removed; this is the c0 used by generate(). */
MultiCurve<double> centered_template(const MultiCurve<double>& templ);

/**
 * c*_ij = kappa_i O_{theta_i} (b0_j + a~_ij phi o gamma_{delta_ij}), with theta_i ~ U[0, 2 pi),
 * delta_ij ~ U[0, 1), Vec(a~_ij) ~ N(Vec(a0_j), sigma^2 I) and kappa_i normalizing to unit norm.
 * The template is centered first.
 */
SynthSample generate(const SynthConfig& config);

/** (1/n) sum_i |(cos t_i, sin t_i) - (cos e_i, sin e_i)|^2. */
double cyclic_mse_theta(std::span<const double> truth, std::span<const double> estimate);

/** As cyclic_mse_theta on the angles 2 pi delta. */
double cyclic_mse_delta(std::span<const double> truth, std::span<const double> estimate);

struct Scenario2Draws {
  Eigen::VectorXd zeta;   // n, rotation angle 2 pi zeta_i
  Eigen::MatrixXd delta;  // n x p
};

Scenario2Draws draw_scenario2(std::size_t n, int p, std::uint64_t seed);

/** c_i <- (I_p kron O_{2 pi zeta_i}) c_i o gamma_{delta_i} for given draws. */
std::vector<MultiCurve<double>> apply_scenario2(std::span<const MultiCurve<double>> curves, const Scenario2Draws& draws);

/** Seeded random rotation and per-component starting-point shift of every curve. */
std::vector<MultiCurve<double>> scenario2_deform(std::span<const MultiCurve<double>> curves, std::uint64_t seed);

struct AlignmentStudyRow {
  double sigma = 0;
  int n = 0;
  double cmse_theta = 0;
  /** One entry per component. */
  Eigen::VectorXd cmse_delta;
};

/** Generate n pre-shapes at sigma and align each to c0 / |c0| with `starts` ICF starts. */
AlignmentStudyRow run_alignment_study(const MultiCurve<double>& templ, double sigma, int n, std::uint64_t seed,
                                      int starts = 5);

/** Vertices C_j(k / points), k = 0..points-1. */
RawContour sample_contour(const ComponentCoefficients<double>& c, int points);

struct TwoClassConfig {
  MultiCurve<double> templ;
  int n = 200;
  /** Standard deviation of the Fourier coefficient perturbation (template units). */
  double coefficient_noise = 6.0;
  /** Standard deviation of the per-component center perturbation. */
  double center_noise = 8.0;
  /** Class 1 has this component's A block scaled by `scale_factor`. */
  int scaled_component = kBuiltinCentralComponent;
  double scale_factor = 1.3;
  int points = 200;
  bool scenario2 = true;
  std::uint64_t seed = 0;
};

/**
 * Labelled contour records: half of the records (alternating) carry label 1 and the
 * enlarged component. Each record also gets a random global scale and translation and,
 * when requested, a random rotation and starting-point shift.
 */
std::vector<RawMultiContour> make_two_class_contours(const TwoClassConfig& config);

}  // namespace mvshape
