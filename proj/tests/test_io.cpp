#include <doctest.h>

#include <filesystem>
#include <random>

#include "mvshape/io.hpp"
#include "mvshape/report.hpp"
#include "support.hpp"

using namespace mvshape;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mvshape_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("format_real round-trips doubles exactly") {
  std::mt19937_64 rng(70);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng) * std::pow(10.0, i % 40 - 20);
    CHECK(std::stod(format_real(x)) == x);
  }
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_short(0.1) == "0.1");
}

TEST_CASE("coefficient records round-trip bit-exactly") {
  std::mt19937_64 rng(71);
  const CoefficientRecord r{"shape 1", 1, testing_support::random_curve(rng, 3, 22)};
  const CoefficientRecord back = parse_coefficient_json(coefficient_json(r));
  CHECK(back.id == "shape 1");
  CHECK(back.label == 1);
  CHECK(back.curve.A() == r.curve.A());
  CHECK(back.curve.B() == r.curve.B());

  const fs::path dir = scratch("coef");
  write_coefficient_file(dir / "a.json", r);
  const auto recs = read_coefficient_file(dir / "a.json");
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].curve.A() == r.curve.A());
}

TEST_CASE("malformed coefficient text is a data error") {
  CHECK_THROWS_AS(parse_coefficient_json("{"), DataError);
  CHECK_THROWS_AS(parse_coefficient_json(R"({"p":1,"M":2,"id":"x","components":[]})"), DataError);
  CHECK_THROWS_AS(parse_coefficient_json(R"({"p":1,"M":2,"id":"x","components":[{"B":[0,0],"A":[[1],[2]]}]})"),
                  DataError);
  CHECK_THROWS_AS(parse_coefficient_json(R"({"p":1,"M":2,"id":"x","label":3,"components":[{"B":[0,0],"A":[[1,0],[2,0]]}]})"),
                  DataError);
  CHECK_NOTHROW(parse_coefficient_json(R"({"p":1,"M":2,"id":"x","components":[{"B":[0,0],"A":[[1,0],[2,0]]}]})"));
}

TEST_CASE("contour files round-trip and directories load in name order") {
  const fs::path dir = scratch("contours");
  RawMultiContour a;
  a.id = "b";
  a.label = 0;
  a.contours.push_back(RawContour{{{0.0, 0.0}, {1.0, 0.25}, {0.0, 1.0}}});
  RawMultiContour b = a;
  b.id = "a";
  b.label = 1;
  write_contour_file(dir / "2.json", {a});
  write_contour_file(dir / "1.json", {b});
  const auto back = read_contour_file(dir / "2.json");
  REQUIRE(back.size() == 1);
  CHECK(back[0].contours[0].points == a.contours[0].points);
  CHECK(back[0].label == 0);
  const Dataset data = load_dataset(dir);
  REQUIRE(data.size() == 2);
  CHECK(data.contours[0].id == "a");

  std::mt19937_64 rng(72);
  write_coefficient_file(dir / "3.json", {"c", std::nullopt, testing_support::random_curve(rng, 1, 4)});
  CHECK_THROWS_AS(load_dataset(dir), DataError);
  CHECK_THROWS_AS(load_dataset(dir / "missing"), DataError);
  write_text(dir / "bad" / "x.json", R"({"id":"q","contours":[[[0,0],[1]]]})");
  CHECK_THROWS_AS(load_dataset(dir / "bad"), DataError);
}

TEST_CASE("tables carry their headers") {
  DeformationParams<double> p;
  p.T = Eigen::Vector2d(1.0, 2.0);
  p.rho = 3.0;
  p.theta = 0.5;
  p.delta = Eigen::Vector2d(0.25, 0.75);
  const std::string csv = deformation_table_csv({"x"}, {p});
  CHECK(csv.rfind("id,T_x,T_y,rho,theta,delta_1,delta_2\n", 0) == 0);
  CHECK(csv.find("x,1,2,3,0.5,0.25,0.75") != std::string::npos);
  CHECK(iteration_log_csv({0.5, 0.25}) == "iteration,eta\n1,0.5\n2,0.25\n");
}

TEST_CASE("result records round-trip and feed the summary tables") {
  AlignmentStudyRow row{0.5, 100, 1e-7, Eigen::Vector3d(1e-8, 2e-8, 3e-8)};
  const AlignmentStudyRow back = parse_alignment_row(alignment_row_json(row, 4));
  CHECK(back.sigma == 0.5);
  CHECK(back.cmse_delta == row.cmse_delta);
  const TextTable t = alignment_table({row, AlignmentStudyRow{0.1, 100, 1e-9, Eigen::Vector3d::Zero()}});
  CHECK(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "0.1");
  CHECK(t.header.size() == 5);
  CHECK_THROWS_AS(alignment_table({}), DataError);

  std::vector<CVReport> reports;
  for (const char* s : {"1", "2"})
    for (DesignScheme d : {DesignScheme::Multi, DesignScheme::Uni, DesignScheme::Raw})
      for (Method m : {Method::GL1, Method::GL2, Method::PLS, Method::PCR}) {
        CVReport r;
        r.scenario = s;
        r.design = d;
        r.method = m;
        r.mean_accuracy = 75.0;
        r.fold_accuracy = {70.0, 80.0};
        reports.push_back(parse_cv_report(cv_report_json(r)));
      }
  const TextTable c = classification_table(reports);
  CHECK(c.rows.size() == 6);
  CHECK(c.cells(2) == 24);
  CHECK(c.render().find("75.00") != std::string::npos);
  CHECK_THROWS_AS(classification_table({}), DataError);
}
