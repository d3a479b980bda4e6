#pragma once

// Summary tables in the layouts of the alignment study (sigma x cMSE columns) and
// the classification study (scenario x design rows, one column per method).

#include <filesystem>
#include <string>
#include <vector>

#include "mvshape/classify.hpp"
#include "mvshape/synth.hpp"

namespace mvshape {

struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /** Number of body cells, excluding the row-label columns. */
  std::size_t cells(std::size_t label_columns) const;
  std::string render() const;
};

/** One row per sigma (ascending): sigma, cMSE_theta, cMSE_delta_1..p. Throws DataError when empty. */
TextTable alignment_table(std::vector<AlignmentStudyRow> rows);

/**
 * Rows: scenario 1 and 2, each with designs MULTI, UNI, RAW; columns GL1, GL2, PLS, PCR.
 * Cells without a result show "-". Throws DataError when `reports` is empty.
 */
TextTable classification_table(const std::vector<CVReport>& reports);

struct ReportInputs {
  std::vector<AlignmentStudyRow> alignment;
  std::vector<CVReport> classification;
};

/** Every *.json result record under `dir` (recursively), by its "kind" field. */
ReportInputs collect_results(const std::filesystem::path& dir);

}  // namespace mvshape
