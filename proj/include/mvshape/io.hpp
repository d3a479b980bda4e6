#pragma once

// Structured-text (JSON) files: contour input, coefficient records, result records,
// and the CSV tables written by the pipeline.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mvshape/classify.hpp"
#include "mvshape/deformation.hpp"
#include "mvshape/fourier.hpp"
#include "mvshape/ingest.hpp"
#include "mvshape/synth.hpp"

namespace mvshape {

/** 17 significant digits; parses back to the identical double. */
std::string format_real(double x);
/** Shortest decimal that parses back to the identical double (labels, file names). */
std::string format_short(double x);

struct CoefficientRecord {
  std::string id;
  std::optional<int> label;
  MultiCurve<double> curve;
};

/** {"p":..,"M":..,"id":..,"label":..,"components":[{"B":[bx,by],"A":[[..M..],[..M..]]},..]} */
std::string coefficient_json(const CoefficientRecord& r);
CoefficientRecord parse_coefficient_json(const std::string& text);

/** A file holds one record (object) or several (array). */
std::vector<CoefficientRecord> read_coefficient_file(const std::filesystem::path& path);
void write_coefficient_file(const std::filesystem::path& path, const CoefficientRecord& r);

/** {"id":..,"label":..,"contours":[[[x,y],..],..]} records, object or array per file. */
std::vector<RawMultiContour> read_contour_file(const std::filesystem::path& path);
void write_contour_file(const std::filesystem::path& path, const std::vector<RawMultiContour>& records);

/** Either raw contours or coefficient records, whichever the input holds. */
struct Dataset {
  std::vector<RawMultiContour> contours;
  std::vector<CoefficientRecord> curves;

  std::size_t size() const { return contours.empty() ? curves.size() : contours.size(); }
};

/** A file, or every *.json file of a directory in name order. Mixed record kinds are a DataError. */
Dataset load_dataset(const std::filesystem::path& path);

/** Smoothed curves of a dataset (contours are fitted with `spec`), plus ids and labels. */
struct SmoothedDataset {
  std::vector<std::string> ids;
  std::vector<MultiCurve<double>> curves;
  /** Empty unless every record is labelled. */
  std::vector<int> labels;
};
SmoothedDataset smooth_dataset(const Dataset& data, BasisSpec spec);

/** id,T_x,T_y,rho,theta,delta_1..delta_p */
std::string deformation_table_csv(const std::vector<std::string>& ids,
                                  const std::vector<DeformationParams<double>>& params);
/** iteration,eta */
std::string iteration_log_csv(const std::vector<double>& eta);

std::string alignment_row_json(const AlignmentStudyRow& row, std::uint64_t seed);
AlignmentStudyRow parse_alignment_row(const std::string& text);

std::string cv_report_json(const CVReport& r);
CVReport parse_cv_report(const std::string& text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace mvshape
