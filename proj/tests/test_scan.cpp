#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <cstdlib>

#include "gie/experiment.hpp"
#include "gie/scan.hpp"

using namespace gie::scan;

namespace {
constexpr double kPi = 3.14159265358979323846;

ScanSpec small_scan() {
  ScanSpec spec;
  spec.base = gie::experiment::sphere_example(0.03);
  spec.base.atoms = 1e12;
  spec.axes = {AxisSpec{Axis::D, 0.02, 0.06, 3, false},
               AxisSpec{Axis::T, 1e2, 1e4, 3, true}};
  return spec;
}
}  // namespace

TEST_CASE("axis naming and validation") {
  CHECK(axis_from_name("d_m") == Axis::D);
  CHECK(axis_from_name("atoms") == Axis::Atoms);
  CHECK(axis_name(Axis::SqueezeDb) == "squeeze_db");
  CHECK_THROWS_AS(axis_from_name("pressure"), std::invalid_argument);
  CHECK_THROWS_AS((AxisSpec{Axis::D, 1.0, 1.0, 3, false}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((AxisSpec{Axis::D, 0.1, 0.2, 1, false}.validate()),
                  std::invalid_argument);
  CHECK_THROWS_AS((AxisSpec{Axis::D, -1.0, 1.0, 3, true}.validate()),
                  std::invalid_argument);
  auto vals = AxisSpec{Axis::T, 10.0, 1000.0, 3, true}.values();
  CHECK(vals.front() == 10.0);
  CHECK(vals[1] == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(vals.back() == 1000.0);
}

TEST_CASE("scan spec validation") {
  ScanSpec spec = small_scan();
  spec.validate();
  spec.axes.push_back(AxisSpec{Axis::D, 0.1, 0.2, 2, false});
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = small_scan();
  spec.axes.clear();
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec = small_scan();
  spec.rep_rule = RepRule::TotalTime;
  spec.t_total_s = 0.0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("degenerate scan over t follows the analytic dependence") {
  ScanSpec spec;
  spec.base = gie::experiment::sphere_example(0.03);
  spec.base.atoms = 1e12;
  spec.axes = {AxisSpec{Axis::T, 1e3, 2e3, 2, false}};
  auto fixed = run_scan(spec);
  REQUIRE(fixed.rows.size() == 2);
  CHECK(fixed.rows[1].snr / fixed.rows[0].snr ==
        doctest::Approx(2.0).epsilon(1e-6));
  CHECK(fixed.rows[1].lambda / fixed.rows[0].lambda ==
        doctest::Approx(2.0).epsilon(1e-12));

  spec.rep_rule = RepRule::TotalTime;
  spec.t_total_s = 1e6;
  auto total = run_scan(spec);
  CHECK(total.rows[1].snr / total.rows[0].snr ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("row order is lexicographic and rows carry the axis values") {
  auto res = run_scan(small_scan());
  REQUIRE(res.rows.size() == 9);
  CHECK(res.axis_names == std::vector<std::string>{"d_m", "time_s"});
  CHECK(res.rows[0].axis_values[0] == doctest::Approx(0.02));
  CHECK(res.rows[0].axis_values[1] == doctest::Approx(1e2));
  CHECK(res.rows[1].axis_values[0] == doctest::Approx(0.02));
  CHECK(res.rows[1].axis_values[1] == doctest::Approx(1e3));
  CHECK(res.rows[3].axis_values[0] == doctest::Approx(0.04));
}

TEST_CASE("identical spec gives byte-identical exports for any worker count") {
  setenv("GIE_THREADS", "1", 1);
  auto serial = export_csv(run_scan(small_scan()));
  setenv("GIE_THREADS", "7", 1);
  auto parallel = export_csv(run_scan(small_scan()));
  unsetenv("GIE_THREADS");
  CHECK(serial == parallel);
}

TEST_CASE("constraint flags are sound") {
  ScanSpec spec = small_scan();
  spec.max_density_cm3 = 1.0;
  auto res = run_scan(spec);
  for (const auto& row : res.rows) {
    CHECK_FALSE(row.density_ok);
    CHECK(row.lifetime_ok == (row.lifetime_s >= row.axis_values[1]));
  }
}

TEST_CASE("per-row errors are recorded, not fatal") {
  ScanSpec spec;
  spec.base = gie::experiment::sphere_example(0.03);
  spec.axes = {AxisSpec{Axis::D, 0.05, 0.2, 2, false}};
  spec.geom_rule = GeometryRule::TouchingDensity;
  spec.n_target_cm3 = 1e12;
  spec.base.atoms = 1e10;  // tiny cloud: touching rule goes prolate
  auto res = run_scan(spec);
  REQUIRE(res.rows.size() == 2);
  for (const auto& row : res.rows) {
    CHECK(!row.error.empty());
    CHECK(std::isnan(row.snr));
    CHECK_FALSE(row.density_ok);
  }
}

TEST_CASE("CSV export round-trips byte-identically") {
  auto res = run_scan(small_scan());
  std::string csv = export_csv(res);
  auto parsed = parse_csv(csv);
  CHECK(export_csv(parsed) == csv);
  CHECK(parsed.axis_names == res.axis_names);
}

TEST_CASE("empty result exports a header-only CSV") {
  ScanResult empty;
  empty.axis_names = {"d_m"};
  CHECK(export_csv(empty) ==
        "d_m,lambda,gamma,snr,density_cm3,lifetime_s,density_ok,lifetime_ok,"
        "perturbative_ok\n");
}

TEST_CASE("CSV parser rejects malformed input") {
  CHECK_THROWS_AS(parse_csv(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv("a,b\n"), std::invalid_argument);
  auto res = run_scan(small_scan());
  std::string csv = export_csv(res);
  CHECK_THROWS_AS(parse_csv(csv + "1,2,3\n"), std::invalid_argument);
}

TEST_CASE("JSON export mirrors the CSV values") {
  auto res = run_scan(small_scan());
  std::string json = export_json(res);
  auto parsed = parse_csv(export_csv(res));
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    CHECK(parsed.rows[i].snr == res.rows[i].snr);
    CHECK(parsed.rows[i].lambda == res.rows[i].lambda);
    CHECK(parsed.rows[i].lifetime_s == res.rows[i].lifetime_s);
  }
  CHECK(json.find("\"axes\"") != std::string::npos);
  CHECK(json.find("\"snr\"") != std::string::npos);
}

TEST_CASE("SVG export renders the grid") {
  ScanSpec spec = small_scan();
  auto res = run_scan(spec);
  std::string svg = export_svg(res, spec);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("data-snr=") != std::string::npos);
  CHECK(svg.find("d_m") != std::string::npos);
}

TEST_CASE("contour of a synthetic product field is the hyperbola") {
  AxisSpec ax{Axis::D, 0.5, 4.0, 30, false};
  AxisSpec ay{Axis::T, 0.5, 4.0, 30, false};
  auto field = [](double x, double y) { return x * y; };
  auto lines = contour_from_field(field, ax, ay, 2.0, 1e-4);
  REQUIRE(!lines.empty());
  std::size_t checked = 0;
  for (const auto& line : lines)
    for (const auto& v : line) {
      CHECK(v[0] * v[1] == doctest::Approx(2.0).epsilon(2e-4));
      ++checked;
    }
  CHECK(checked > 20);
  auto none = contour_from_field(field, ax, ay, 100.0, 1e-4);
  CHECK(none.empty());
}

TEST_CASE("SNR contour vertices hit the target through the full engine") {
  ScanSpec spec;
  spec.base = gie::experiment::sphere_example(0.03);
  spec.base.atoms = 1e12;
  spec.base.squeeze_db = 30.0;
  spec.axes = {AxisSpec{Axis::D, 0.02, 0.1, 8, false},
               AxisSpec{Axis::T, 1e3, 1e5, 8, true}};
  auto probe = run_scan(spec);
  double target = 0.0;
  for (const auto& row : probe.rows) target = std::max(target, row.snr);
  target *= 0.3;
  auto lines = snr_contour(spec, target);
  REQUIRE(!lines.empty());
  for (const auto& line : lines)
    for (const auto& v : line) {
      auto row = evaluate_point(spec, {v[0], v[1]});
      CHECK(std::fabs(row.snr - target) <= 1.5e-3 * target);
    }
}

TEST_CASE("figure3 preset shape") {
  ScanSpec spec = figure3_preset();
  spec.validate();
  CHECK(spec.axes.size() == 3);
  CHECK(spec.axes[0].axis == Axis::D);
  CHECK(spec.axes[1].axis == Axis::T);
  CHECK(spec.axes[2].axis == Axis::Atoms);
  CHECK(spec.rep_rule == RepRule::TotalTime);
  CHECK(spec.t_total_s == doctest::Approx(1e7));
  CHECK(spec.geom_rule == GeometryRule::TouchingAspect);
  CHECK(spec.aspect_e == doctest::Approx(0.98));
  CHECK(spec.base.squeeze_db == doctest::Approx(35.0));
  CHECK(spec.base.setups == 5);
}
