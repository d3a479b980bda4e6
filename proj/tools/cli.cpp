#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <ostream>
#include <sstream>

#include "mvshape/classify.hpp"
#include "mvshape/io.hpp"
#include "mvshape/pipeline.hpp"
#include "mvshape/report.hpp"
#include "mvshape/synth.hpp"

namespace mvshape::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kCommands{"fit", "align", "pipeline", "classify", "simulate", "report"};

PipelineOptions<double> pipeline_options(const RunConfig& c) {
  PipelineOptions<double> o;
  o.xi = c.xi;
  o.seed = c.seed;
  o.icf_starts = c.starts;
  return o;
}

std::string safe_name(const std::string& id) {
  std::string s = id;
  for (char& ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')) ch = '_';
  return s.empty() ? "record" : s;
}

void require_input(const RunConfig& c) {
  if (c.input.empty()) throw DomainError(c.command + " needs --input");
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

int run_fit(const RunConfig& c, std::ostream& out) {
  require_input(c);
  const Dataset data = load_dataset(c.input);
  if (data.contours.empty()) throw DataError("fit expects contour records");
  const BasisSpec spec(c.basis_size);
  json summary = json::array();
  for (std::size_t i = 0; i < data.contours.size(); ++i) {
    const RawMultiContour& r = data.contours[i];
    const std::string id = r.id.empty() ? std::to_string(i) : r.id;
    const MultiCurve<double> curve = fit_curve(r, spec);
    std::vector<double> residual;
    for (int j = 0; j < curve.p(); ++j) residual.push_back(fit_residual(r.contours[j], curve.component(j)));
    if (!c.out.empty()) write_coefficient_file(c.out / (safe_name(id) + ".json"), {id, r.label, curve});
    summary.push_back({{"id", id}, {"p", curve.p()}, {"M", curve.basis_size()}, {"residual", residual}});
  }
  out << summary.dump(2) << "\n";
  return kSuccess;
}

int run_align(const RunConfig& c, std::ostream& out) {
  require_input(c);
  if (c.templ.empty() || c.templ == "builtin") throw DomainError("align needs --template <coefficient file>");
  const auto templ_records = read_coefficient_file(c.templ);
  if (templ_records.size() != 1) throw DataError("template file must hold exactly one coefficient record");
  const PreShape<double> mu = center_and_scale(templ_records.front().curve).preshape;
  const SmoothedDataset data = smooth_dataset(load_dataset(c.input), BasisSpec(c.basis_size));

  json records = json::array();
  for (std::size_t i = 0; i < data.curves.size(); ++i) {
    const auto& curve = data.curves[i];
    if (curve.p() != mu.p() || curve.basis_size() != mu.basis_size())
      throw DataError("record '" + data.ids[i] + "' does not match the template's components or basis size");
    IcfOptions<double> opts;
    opts.n_starts = c.starts;
    opts.seed = derive_seed(c.seed, stream::kIcfStarts, i);
    opts.template_id = c.templ;
    const IcfResult<double> r = icf_align(center_and_scale(curve).preshape, mu, opts);
    records.push_back({{"id", data.ids[i]},
                       {"theta", r.theta},
                       {"delta", to_vector(r.delta)},
                       {"objective", r.objective},
                       {"converged", r.converged}});
    if (!c.out.empty())
      write_coefficient_file(c.out / "aligned" / (safe_name(data.ids[i]) + ".json"),
                             {data.ids[i], std::nullopt, r.shape.preshape.curve()});
  }
  if (!c.out.empty()) write_text(c.out / "alignment.json", records.dump(2) + "\n");
  out << records.dump(2) << "\n";
  return kSuccess;
}

int run_pipeline(const RunConfig& c, std::ostream& out) {
  require_input(c);
  const SmoothedDataset data = smooth_dataset(load_dataset(c.input), BasisSpec(c.basis_size));
  if (data.curves.front().basis_size() != c.basis_size)
    throw DataError("coefficient records do not use --basis-size " + std::to_string(c.basis_size));
  const PipelineResult res = estimate_pipeline_from_curves(data.curves, data.ids, pipeline_options(c));
  const AlignmentRun<double>& run = res.run;
  if (!c.out.empty()) {
    for (std::size_t i = 0; i < res.ids.size(); ++i)
      write_coefficient_file(c.out / "aligned" / (safe_name(res.ids[i]) + ".json"),
                             {res.ids[i], std::nullopt, run.shapes[i].preshape.curve()});
    write_coefficient_file(c.out / "mean.json", {"mean", std::nullopt, run.mean.mean.curve()});
    write_text(c.out / "deformation.csv", deformation_table_csv(res.ids, res.params));
    write_text(c.out / "iterations.csv", iteration_log_csv(run.eta));
  }
  const json summary{{"records", res.ids.size()},
                     {"outer_iterations", run.eta.size()},
                     {"eta", run.eta},
                     {"converged", run.converged},
                     {"eta_monotone", run.eta_monotone},
                     {"initial_template", res.ids[run.template_index]},
                     {"antipodal_warnings", run.antipodal_warnings}};
  out << summary.dump(2) << "\n";
  if (!run.eta_monotone) throw NumericalError("eta increased between outer iterations; previous state kept");
  return kSuccess;
}

std::vector<std::string> expand(const std::string& value, const std::vector<std::string>& all) {
  if (value == "all" || value == "both") return all;
  return {value};
}

int run_classify(const RunConfig& c, std::ostream& out) {
  require_input(c);
  const SmoothedDataset data = smooth_dataset(load_dataset(c.input), BasisSpec(c.basis_size));
  if (data.labels.empty()) throw DataError("classify needs a label on every record");
  const std::vector<std::string> designs = expand(c.design, {"multi", "uni", "raw"});
  const std::vector<std::string> methods = expand(c.method, {"gl1", "gl2", "pls", "pcr"});
  const std::vector<std::string> scenarios = expand(c.scenario, {"1", "2"});
  for (const auto& d : designs) parse_design_scheme(d);
  for (const auto& m : methods) parse_method(m);

  std::vector<CVReport> reports;
  for (const std::string& scenario : scenarios) {
    if (scenario != "1" && scenario != "2") throw DomainError("scenario must be 1, 2 or both");
    const std::vector<MultiCurve<double>> curves =
        scenario == "2" ? scenario2_deform(data.curves, c.seed) : data.curves;
    for (const std::string& d : designs) {
      const TangentDesign design = build_design(parse_design_scheme(d), curves, data.labels, pipeline_options(c));
      for (const std::string& m : methods) {
        CVOptions opts;
        opts.folds = c.folds;
        opts.seed = c.seed;
        opts.scenario = scenario;
        CVReport r = cross_validate(design, parse_method(m), {}, opts);
        if (!c.out.empty()) write_text(c.out / ("cv_s" + scenario + "_" + d + "_" + m + ".json"), cv_report_json(r));
        out << cv_report_json(r);
        reports.push_back(std::move(r));
      }
    }
  }
  const std::string table = classification_table(reports).render();
  if (!c.out.empty()) write_text(c.out / "classification_table.txt", table);
  out << table;
  return kSuccess;
}

int run_simulate(const RunConfig& c, std::ostream& out) {
  MultiCurve<double> templ = builtin_template();
  if (!c.templ.empty() && c.templ != "builtin") {
    const auto recs = read_coefficient_file(c.templ);
    if (recs.size() != 1) throw DataError("template file must hold exactly one coefficient record");
    templ = recs.front().curve;
  }
  if (c.n < 1) throw DomainError("--n must be >= 1");
  if (c.two_class) {
    const TwoClassConfig tc{.templ = templ, .n = c.n, .scenario2 = false, .seed = c.seed};
    const auto records = make_two_class_contours(tc);
    const fs::path file = (c.out.empty() ? fs::path(".") : c.out) / "two_class_contours.json";
    write_contour_file(file, records);
    out << json{{"written", file.string()}, {"records", records.size()}}.dump(2) << "\n";
    return kSuccess;
  }
  const std::vector<double> sigmas = c.sigma.empty() ? std::vector<double>{0.1, 0.5, 1.0} : c.sigma;
  std::vector<AlignmentStudyRow> rows;
  for (double s : sigmas) {
    rows.push_back(run_alignment_study(templ, s, c.n, c.seed, c.starts));
    const std::string rec = alignment_row_json(rows.back(), c.seed);
    if (!c.out.empty()) write_text(c.out / ("alignment_sigma_" + format_short(s) + ".json"), rec);
    out << rec;
  }
  const std::string table = alignment_table(rows).render();
  if (!c.out.empty()) write_text(c.out / "alignment_table.txt", table);
  out << table;
  return kSuccess;
}

int run_report(const RunConfig& c, std::ostream& out) {
  require_input(c);
  const ReportInputs in = collect_results(c.input);
  if (in.alignment.empty() && in.classification.empty()) throw DataError("no result records under --input");
  std::string text;
  if (!in.alignment.empty()) text += alignment_table(in.alignment).render();
  if (!in.classification.empty()) text += (text.empty() ? "" : "\n") + classification_table(in.classification).render();
  if (!c.out.empty()) write_text(c.out / "report.txt", text);
  out << text;
  return kSuccess;
}

}  // namespace

std::string error_record(const std::string& kind, const std::string& message, int exit_code) {
  return json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", exit_code}}}}.dump();
}

void validate(const RunConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end())
    throw DomainError("unknown command '" + c.command + "'");
  if (c.basis_size < 2 || c.basis_size % 2 != 0) throw DomainError("--basis-size must be even and >= 2");
  if (!(c.xi > 0.0)) throw DomainError("--xi must be positive");
  if (c.starts < 1) throw DomainError("--starts must be >= 1");
  if (c.folds < 2) throw DomainError("--folds must be >= 2");
  for (double s : c.sigma)
    if (!(s > 0.0)) throw DomainError("--sigma must be positive");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    validate(config);
    if (config.command == "fit") return run_fit(config, out);
    if (config.command == "align") return run_align(config, out);
    if (config.command == "pipeline") return run_pipeline(config, out);
    if (config.command == "classify") return run_classify(config, out);
    if (config.command == "simulate") return run_simulate(config, out);
    return run_report(config, out);
  } catch (const DomainError& e) {
    err << error_record(e.kind(), e.what(), kUsage) << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << error_record(e.kind(), e.what(), kNumerical) << "\n";
    return kNumerical;
  } catch (const Error& e) {
    err << error_record(e.kind(), e.what(), kData) << "\n";
    return kData;
  } catch (const fs::filesystem_error& e) {
    err << error_record("data", e.what(), kData) << "\n";
    return kData;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Shape analysis of multivariate closed planar curves", "mvshape"};
  app.set_config("--config", "", "Config file with flat keys named like the flags");
  app.fallthrough();
  app.require_subcommand(1);
  app.add_option("--input", c.input, "Input file or directory");
  app.add_option("--out", c.out, "Output directory");
  app.add_option("--template", c.templ, "Template coefficient file, or builtin");
  app.add_option("--basis-size", c.basis_size, "Number of Fourier basis functions M (even)");
  app.add_option("--seed", c.seed, "Seed of every random draw");
  app.add_option("--xi", c.xi, "Pipeline stopping tolerance");
  app.add_option("--starts", c.starts, "Random ICF starts per curve");
  app.add_option("--sigma", c.sigma, "Noise level(s) for simulate");
  app.add_option("--n", c.n, "Sample size for simulate");
  app.add_option("--design", c.design, "multi, uni, raw or all");
  app.add_option("--method", c.method, "gl1, gl2, pls, pcr or all");
  app.add_option("--folds", c.folds, "Outer cross-validation folds");
  app.add_option("--scenario", c.scenario, "1, 2 or both");
  app.add_flag("--two-class", c.two_class, "simulate: write a labelled two-class contour set instead");
  app.add_subcommand("fit", "Smooth contours into Fourier coefficient files");
  app.add_subcommand("align", "Align curves to a template with ICF");
  app.add_subcommand("pipeline", "Align all curves and estimate their intrinsic mean");
  app.add_subcommand("classify", "Cross-validated classification accuracy");
  app.add_subcommand("simulate", "Alignment accuracy on simulated data");
  app.add_subcommand("report", "Summary tables of saved results");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << error_record("usage", e.what(), kUsage) << "\n";
    return kUsage;
  }
  c.command = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

}  // namespace mvshape::cli
