#include "mvshape/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "mvshape/io.hpp"

namespace mvshape {

namespace fs = std::filesystem;

std::size_t TextTable::cells(std::size_t label_columns) const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.size() > label_columns ? r.size() - label_columns : 0;
  return n;
}

std::string TextTable::render() const {
  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) os << "  ";
      os << cells[c] << std::string(width[c] - cells[c].size(), ' ');
    }
    os << "\n";
  };
  line(header);
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  os << std::string(total + 2 * (width.size() - 1), '-') << "\n";
  for (const auto& r : rows) line(r);
  return os.str();
}

namespace {

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::string pct(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

}  // namespace

TextTable alignment_table(std::vector<AlignmentStudyRow> rows) {
  if (rows.empty()) throw DataError("no alignment results to report");
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.sigma < b.sigma; });
  Eigen::Index p = 0;
  for (const auto& r : rows) p = std::max(p, r.cmse_delta.size());
  TextTable t;
  t.header = {"sigma", "cMSE_theta"};
  for (Eigen::Index j = 0; j < p; ++j) t.header.push_back("cMSE_delta_" + std::to_string(j + 1));
  for (const auto& r : rows) {
    std::vector<std::string> line{format_short(r.sigma), sci(r.cmse_theta)};
    for (Eigen::Index j = 0; j < p; ++j) line.push_back(j < r.cmse_delta.size() ? sci(r.cmse_delta(j)) : "-");
    t.rows.push_back(std::move(line));
  }
  return t;
}

TextTable classification_table(const std::vector<CVReport>& reports) {
  if (reports.empty()) throw DataError("no classification results to report");
  constexpr std::array designs{DesignScheme::Multi, DesignScheme::Uni, DesignScheme::Raw};
  constexpr std::array methods{Method::GL1, Method::GL2, Method::PLS, Method::PCR};
  TextTable t;
  t.header = {"scenario", "design"};
  for (Method m : methods) t.header.push_back(to_string(m));
  for (const std::string scenario : {"1", "2"}) {
    for (DesignScheme d : designs) {
      std::vector<std::string> line{scenario, to_string(d)};
      for (Method m : methods) {
        std::string cell = "-";
        for (const auto& r : reports)
          if (r.scenario == scenario && r.design == d && r.method == m) cell = pct(r.mean_accuracy);
        line.push_back(cell);
      }
      t.rows.push_back(std::move(line));
    }
  }
  return t;
}

ReportInputs collect_results(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("'" + dir.string() + "' is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  ReportInputs in;
  for (const auto& f : files) {
    const std::string text = read_text(f);
    const auto j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("kind")) continue;
    if (j["kind"] == "alignment") in.alignment.push_back(parse_alignment_row(text));
    if (j["kind"] == "classification") in.classification.push_back(parse_cv_report(text));
  }
  return in;
}

}  // namespace mvshape
