#include "mvshape/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mvshape {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(where + ": malformed structured text (" + e.what() + ")");
  }
}

template <typename T>
T get_field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw DataError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DataError(where + ": field '" + std::string(key) + "' has the wrong type");
  }
}

std::optional<int> get_label(const json& j, const std::string& where) {
  if (!j.contains("label") || j.at("label").is_null()) return std::nullopt;
  const int label = get_field<int>(j, "label", where);
  if (label != 0 && label != 1) throw DataError(where + ": label must be 0 or 1");
  return label;
}

std::string get_id(const json& j) {
  if (!j.contains("id") || j.at("id").is_null()) return {};
  const json& v = j.at("id");
  return v.is_string() ? v.get<std::string>() : v.dump();
}

CoefficientRecord coefficient_from_json(const json& j, const std::string& where) {
  const int p = get_field<int>(j, "p", where);
  const int M = get_field<int>(j, "M", where);
  if (p < 1) throw DataError(where + ": p must be >= 1");
  try {
    BasisSpec spec(M);
  } catch (const Error& e) {
    throw DataError(where + ": " + e.what());
  }
  const auto comps = get_field<std::vector<json>>(j, "components", where);
  if (static_cast<int>(comps.size()) != p) throw DataError(where + ": expected " + std::to_string(p) + " components");
  Eigen::MatrixXd A(2 * p, M);
  Eigen::VectorXd B(2 * p);
  for (int c = 0; c < p; ++c) {
    const std::string cw = where + ", component " + std::to_string(c + 1);
    const auto b = get_field<std::vector<double>>(comps[c], "B", cw);
    const auto a = get_field<std::vector<std::vector<double>>>(comps[c], "A", cw);
    if (b.size() != 2) throw DataError(cw + ": B must hold 2 reals");
    if (a.size() != 2 || a[0].size() != static_cast<std::size_t>(M) || a[1].size() != static_cast<std::size_t>(M))
      throw DataError(cw + ": A must be 2 x " + std::to_string(M));
    B(2 * c) = b[0];
    B(2 * c + 1) = b[1];
    for (int r = 0; r < 2; ++r)
      for (int m = 0; m < M; ++m) A(2 * c + r, m) = a[r][m];
  }
  return {get_id(j), get_label(j, where), MultiCurve<double>(std::move(A), std::move(B))};
}

RawMultiContour contour_from_json(const json& j, const std::string& where) {
  RawMultiContour rec;
  rec.id = get_id(j);
  const std::string w = rec.id.empty() ? where : where + " (record '" + rec.id + "')";
  rec.label = get_label(j, w);
  const auto contours = get_field<std::vector<std::vector<std::vector<double>>>>(j, "contours", w);
  if (contours.empty()) throw DataError(w + ": no contours");
  for (const auto& c : contours) {
    RawContour rc;
    for (const auto& pt : c) {
      if (pt.size() != 2) throw DataError(w + ": contour points must be [x, y] pairs");
      rc.points.emplace_back(pt[0], pt[1]);
    }
    rec.contours.push_back(std::move(rc));
  }
  return rec;
}

std::vector<json> records_of(const json& j) {
  if (j.is_array()) return j.get<std::vector<json>>();
  return {j};
}

std::vector<fs::path> input_files(const fs::path& path) {
  if (!fs::exists(path)) throw DataError("input '" + path.string() + "' does not exist");
  if (!fs::is_directory(path)) return {path};
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(path))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no .json files in '" + path.string() + "'");
  return files;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_short(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string coefficient_json(const CoefficientRecord& r) {
  const MultiCurve<double>& c = r.curve;
  std::ostringstream os;
  os << "{\"p\": " << c.p() << ", \"M\": " << c.basis_size();
  if (!r.id.empty()) os << ", \"id\": " << json(r.id).dump();
  if (r.label) os << ", \"label\": " << *r.label;
  os << ", \"components\": [";
  for (int j = 0; j < c.p(); ++j) {
    os << (j ? ",\n  " : "\n  ") << "{\"B\": [" << format_real(c.B()(2 * j)) << ", " << format_real(c.B()(2 * j + 1))
       << "], \"A\": [";
    for (int r2 = 0; r2 < 2; ++r2) {
      os << (r2 ? ", [" : "[");
      for (int m = 0; m < c.basis_size(); ++m) os << (m ? ", " : "") << format_real(c.A()(2 * j + r2, m));
      os << "]";
    }
    os << "]}";
  }
  os << "]}\n";
  return os.str();
}

CoefficientRecord parse_coefficient_json(const std::string& text) {
  return coefficient_from_json(parse_json(text, "coefficient record"), "coefficient record");
}

std::vector<CoefficientRecord> read_coefficient_file(const fs::path& path) {
  std::vector<CoefficientRecord> out;
  for (const json& j : records_of(parse_json(read_text(path), path.string())))
    out.push_back(coefficient_from_json(j, path.string()));
  return out;
}

void write_coefficient_file(const fs::path& path, const CoefficientRecord& r) { write_text(path, coefficient_json(r)); }

std::vector<RawMultiContour> read_contour_file(const fs::path& path) {
  std::vector<RawMultiContour> out;
  for (const json& j : records_of(parse_json(read_text(path), path.string())))
    out.push_back(contour_from_json(j, path.string()));
  return out;
}

void write_contour_file(const fs::path& path, const std::vector<RawMultiContour>& records) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << (i ? ",\n" : "\n") << "{\"id\": " << json(r.id).dump();
    if (r.label) os << ", \"label\": " << *r.label;
    os << ", \"contours\": [";
    for (std::size_t c = 0; c < r.contours.size(); ++c) {
      os << (c ? ", [" : "[");
      const auto& pts = r.contours[c].points;
      for (std::size_t k = 0; k < pts.size(); ++k)
        os << (k ? ", [" : "[") << format_real(pts[k].x()) << ", " << format_real(pts[k].y()) << "]";
      os << "]";
    }
    os << "]}";
  }
  os << "\n]\n";
  write_text(path, os.str());
}

Dataset load_dataset(const fs::path& path) {
  Dataset data;
  for (const fs::path& file : input_files(path)) {
    for (const json& j : records_of(parse_json(read_text(file), file.string()))) {
      if (j.is_object() && j.contains("contours")) {
        data.contours.push_back(contour_from_json(j, file.string()));
      } else if (j.is_object() && j.contains("components")) {
        data.curves.push_back(coefficient_from_json(j, file.string()));
      } else {
        throw DataError(file.string() + ": record holds neither contours nor components");
      }
    }
  }
  if (!data.contours.empty() && !data.curves.empty())
    throw DataError("input mixes contour and coefficient records");
  if (data.size() == 0) throw DataError("input holds no records");
  return data;
}

SmoothedDataset smooth_dataset(const Dataset& data, BasisSpec spec) {
  SmoothedDataset out;
  bool all_labelled = true;
  std::vector<int> labels;
  if (!data.contours.empty()) {
    for (std::size_t i = 0; i < data.contours.size(); ++i) {
      const auto& r = data.contours[i];
      out.ids.push_back(r.id.empty() ? std::to_string(i) : r.id);
      out.curves.push_back(fit_curve(r, spec));
      all_labelled = all_labelled && r.label.has_value();
      labels.push_back(r.label.value_or(0));
    }
  } else {
    for (std::size_t i = 0; i < data.curves.size(); ++i) {
      const auto& r = data.curves[i];
      out.ids.push_back(r.id.empty() ? std::to_string(i) : r.id);
      out.curves.push_back(r.curve);
      all_labelled = all_labelled && r.label.has_value();
      labels.push_back(r.label.value_or(0));
    }
  }
  if (all_labelled) out.labels = std::move(labels);
  return out;
}

std::string deformation_table_csv(const std::vector<std::string>& ids,
                                  const std::vector<DeformationParams<double>>& params) {
  if (ids.size() != params.size()) throw DataError("one id per parameter row expected");
  std::ostringstream os;
  os << "id,T_x,T_y,rho,theta";
  const Eigen::Index p = params.empty() ? 0 : params.front().delta.size();
  for (Eigen::Index j = 0; j < p; ++j) os << ",delta_" << j + 1;
  os << "\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& d = params[i];
    os << ids[i] << "," << format_real(d.T.x()) << "," << format_real(d.T.y()) << "," << format_real(d.rho) << ","
       << format_real(d.theta);
    for (Eigen::Index j = 0; j < d.delta.size(); ++j) os << "," << format_real(d.delta(j));
    os << "\n";
  }
  return os.str();
}

std::string iteration_log_csv(const std::vector<double>& eta) {
  std::ostringstream os;
  os << "iteration,eta\n";
  for (std::size_t t = 0; t < eta.size(); ++t) os << t + 1 << "," << format_real(eta[t]) << "\n";
  return os.str();
}

std::string alignment_row_json(const AlignmentStudyRow& row, std::uint64_t seed) {
  json j;
  j["kind"] = "alignment";
  j["sigma"] = row.sigma;
  j["n"] = row.n;
  j["seed"] = seed;
  j["cmse_theta"] = row.cmse_theta;
  j["cmse_delta"] = std::vector<double>(row.cmse_delta.data(), row.cmse_delta.data() + row.cmse_delta.size());
  return j.dump(2) + "\n";
}

AlignmentStudyRow parse_alignment_row(const std::string& text) {
  const json j = parse_json(text, "alignment record");
  const std::string w = "alignment record";
  AlignmentStudyRow row;
  row.sigma = get_field<double>(j, "sigma", w);
  row.n = get_field<int>(j, "n", w);
  row.cmse_theta = get_field<double>(j, "cmse_theta", w);
  const auto d = get_field<std::vector<double>>(j, "cmse_delta", w);
  row.cmse_delta = Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
  return row;
}

std::string cv_report_json(const CVReport& r) {
  json j;
  j["kind"] = "classification";
  j["method"] = to_string(r.method);
  j["design"] = to_string(r.design);
  j["scenario"] = r.scenario;
  j["fold_accuracy"] = r.fold_accuracy;
  j["mean_accuracy"] = r.mean_accuracy;
  j["selected_hyper"] = r.selected_hyper;
  return j.dump(2) + "\n";
}

CVReport parse_cv_report(const std::string& text) {
  const json j = parse_json(text, "classification record");
  const std::string w = "classification record";
  CVReport r;
  try {
    r.method = parse_method(get_field<std::string>(j, "method", w));
    r.design = parse_design_scheme(get_field<std::string>(j, "design", w));
  } catch (const DomainError& e) {
    throw DataError(w + ": " + e.what());
  }
  r.scenario = get_field<std::string>(j, "scenario", w);
  r.fold_accuracy = get_field<std::vector<double>>(j, "fold_accuracy", w);
  r.mean_accuracy = get_field<double>(j, "mean_accuracy", w);
  r.selected_hyper = get_field<std::vector<double>>(j, "selected_hyper", w);
  return r;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

}  // namespace mvshape
