#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "christoffel/harness.hpp"

#include "support.hpp"

#include <filesystem>
#include <fstream>

using namespace christoffel;

TEST_CASE("registry rejects unknown names") {
  CHECK_THROWS_AS((void)run_experiment<double>("no-such-experiment"), Error);
}

TEST_CASE("ols recovers a known slope") {
  std::vector<double> xs, ys;
  for (int i = 1; i <= 12; ++i) {
    xs.push_back(std::log(0.01 * i));
    ys.push_back(std::log(3.5 * std::pow(0.01 * i, 0.75)));
  }
  auto fit = ols(xs, ys);
  CHECK(fit.slope == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(3.5)).epsilon(1e-10));
  CHECK(fit.stderr_slope < 1e-12);
}

TEST_CASE("reports round trip through json and csv rows match the grid") {
  ExperimentOptions opt;
  opt.params["nmax"] = "12";
  auto rep = run_experiment<double>("interval-oracle", opt);
  CHECK(rep.rows.size() == rep.row_labels.size());

  const std::string dir = (std::filesystem::temp_directory_path() / "christoffel_emit_test").string();
  std::filesystem::create_directories(dir);
  auto files_json = emit(rep, "json", dir);
  REQUIRE(files_json.size() == 1);
  std::ifstream is(files_json[0]);
  nlohmann::json j;
  is >> j;
  auto back = report_from_json(j);
  CHECK(back.name == rep.name);
  CHECK(back.columns == rep.columns);
  CHECK(back.rows == rep.rows);
  CHECK(back.row_labels == rep.row_labels);
  CHECK(back.summary == rep.summary);

  auto files_csv = emit(rep, "csv", dir);
  std::ifstream cs(files_csv[0]);
  std::string line;
  int lines = 0;
  while (std::getline(cs, line))
    if (!line.empty()) ++lines;
  CHECK(lines == int(rep.rows.size()) + 1);  // header + one row per record
}

TEST_CASE("svg emits one plot per slice") {
  ExperimentOptions opt;
  auto rep = run_experiment<double>("disc-edge", opt);
  const std::string dir = (std::filesystem::temp_directory_path() / "christoffel_svg_test").string();
  std::filesystem::create_directories(dir);
  auto files = emit(rep, "svg", dir);
  CHECK(files.size() == 5);  // one per n
  for (const auto& f : files) {
    std::ifstream is(f);
    std::string content((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    CHECK(content.find("<svg") != std::string::npos);
    CHECK(content.find("circle") != std::string::npos);
    CHECK(content.find("slope") != std::string::npos);
  }
}

TEST_CASE("experiments are reproducible run to run") {
  ExperimentOptions opt;
  opt.params["nmax"] = "16";
  auto a = run_experiment<double>("interval-oracle", opt);
  auto b = run_experiment<double>("interval-oracle", opt);
  CHECK(a.rows == b.rows);
  auto c = run_experiment<double>("boundary-step", opt);
  auto d = run_experiment<double>("boundary-step", opt);
  CHECK(c.rows == d.rows);
}

TEST_CASE("experiment records carry their provenance") {
  auto rep = run_experiment<double>("disc-edge");
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    CHECK(rep.row_labels[i].find("disc") != std::string::npos);
    CHECK(rep.row_labels[i].find("(") != std::string::npos);
  }
  // summaries recomputable from records
  const int c = rep.column("ratio");
  double lo = 1e300, hi = -1e300;
  for (const auto& row : rep.rows) {
    lo = std::min(lo, row[c]);
    hi = std::max(hi, row[c]);
  }
  CHECK(rep.summary.at("ratio_min") == doctest::Approx(lo));
  CHECK(rep.summary.at("ratio_max") == doctest::Approx(hi));
}

TEST_CASE("body presets parse") {
  CHECK(body_preset<double>("disc").desc == "ball(r=1.000000,d=2)");
  CHECK(body_preset<double>("square").desc.substr(0, 7) == "polygon");
  CHECK(body_preset<double>("lpball:1.4").dim == 2);
  CHECK(body_preset<double>("halfball3").dim == 3);
  CHECK(body_preset<double>("sharp2d:0.006,0.07,0.09").dim == 2);
  CHECK(body_preset<double>("sharpnd:0.05,0.5,3").dim == 3);
  CHECK_THROWS_AS((void)body_preset<double>("klein-bottle"), Error);
}

TEST_CASE("worker count does not change certify records") {
  ExperimentOptions serial;
  serial.workers = 1;
  ExperimentOptions threaded;
  threaded.workers = 4;
  auto a = run_experiment<double>("sharpness-2d", serial);
  auto b = run_experiment<double>("sharpness-2d", threaded);
  CHECK(a.rows == b.rows);
}
