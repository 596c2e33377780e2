#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "zeromap/harness.hpp"

using namespace zeromap;
using namespace zeromap::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("zeromap_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

ExperimentConfig config(std::string command, std::map<std::string, std::string> params) {
  return ExperimentConfig{std::move(command), std::move(params), {}, 1};
}

// to_json -> from_json -> to_json must reproduce the same bytes.
template <class T, class Parse>
void check_round_trip(const T& value, Parse parse) {
  const auto j = io::to_json(value);
  const auto back = parse(Json::parse(j.dump()));
  CHECK(io::to_json(back).dump() == j.dump());
}

}  // namespace

TEST_CASE("sieve: report and csv") {
  const auto bundle = run_experiment(config("sieve", {{"N", "10"}}));
  const auto& mu = bundle.report["result"]["mu"];
  CHECK(mu.get<std::vector<int>>() == std::vector<int>{1, -1, -1, 0, -1, 1, -1, 0, 0, 1});
  CHECK(bundle.report["schema"] == "zeromap.sieve/1");

  const auto dir = scratch("sieve");
  const auto written = emit_report(bundle, dir, Format::csv);
  const auto csv = lines(slurp(dir / "sieve_mu.csv"));
  REQUIRE(csv.size() == 11);
  CHECK(csv[0] == "n,mu");
  CHECK(csv[4] == "4,0");
  for (const auto& l : csv) CHECK(std::count(l.begin(), l.end(), ',') == 1);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "sieve.json"));
  const auto manifest = Json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["seed"] == 1);
  CHECK(manifest["version"] == version());
  CHECK(manifest["parameters"]["N"] == "10");
  CHECK(manifest.contains("wall_time_s"));
}

TEST_CASE("odometer: census of one period") {
  const auto bundle = run_experiment(config("odometer", {{"depth", "8"}, {"n", "3"}, {"N", "8"}}));
  CHECK(bundle.report["result"]["census"].get<std::vector<int>>() == std::vector<int>(8, 1));
}

TEST_CASE("tower: levels file has 510 rows at depth 8") {
  const auto bundle = run_experiment(config("tower", {{"cascade", "8"}, {"depth", "8"}}));
  const auto dir = scratch("tower");
  emit_report(bundle, dir);
  const auto csv = lines(slurp(dir / "tower_levels.csv"));
  CHECK(csv.size() == 511);
  CHECK(csv[0] == "level,k,label,lo,hi");
  CHECK(bundle.report["result"]["verify"]["all_pass"] == true);
}

TEST_CASE("tower: positive-entropy maps need force") {
  CHECK_ERROR_KIND(run_experiment(config("tower", {{"map", "logistic r=3.83"}, {"depth", "3"}})),
                   ErrorKind::domain);
  const auto forced = run_experiment(
      config("tower", {{"map", "logistic r=3.83"}, {"depth", "3"}, {"force", "true"}}));
  CHECK(forced.report["result"]["tower"]["truncation"].is_object());
}

TEST_CASE("disjoint: decaying series") {
  const auto bundle = run_experiment(config(
      "disjoint", {{"c", "mobius"}, {"map", "logistic r=3.569945"}, {"x", "0.5"}, {"N", "10^6"}}));
  const auto& points = bundle.report["result"]["series"]["points"];
  const auto at = [&](std::size_t i) {
    return std::hypot(points[i]["re"].get<double>(), points[i]["im"].get<double>());
  };
  CHECK(at(points.size() - 1) < at(points.size() - 3));
  CHECK(at(points.size() - 1) < 0.01);
}

TEST_CASE("validation: field-level messages") {
  const auto field_of = [](const ExperimentConfig& cfg) -> std::string {
    try {
      validate(cfg);
    } catch (const ValidationError& e) {
      return e.field();
    }
    return "";
  };
  CHECK(field_of(config("sieve", {{"N", "0"}})) == "N");
  CHECK(field_of(config("sieve", {{"N", "ten"}})) == "N");
  CHECK(field_of(config("sieve", {})) == "N");
  CHECK(field_of(config("sieve", {{"N", "10"}, {"M", "3"}})) == "M");
  CHECK(field_of(config("tower", {{"map", "logistic r=5"}})) == "map");
  CHECK(field_of(config("tower", {{"cascade", "8"}, {"x0", "2"}})) == "x0");
  CHECK(field_of(config("perron", {{"matrix", "0;12"}})) == "matrix");
  CHECK(field_of(config("oscillation", {{"N", "100"}, {"lambda", "1"}})) == "lambda");
  CHECK(field_of(config("disjoint", {{"cascade", "3"}, {"N", "100"}, {"phi", "table:0:0,0.5:1"}})) ==
        "phi");
  CHECK(field_of(config("mls", {{"cascade", "8"}, {"epsilon", "-1"}})) == "epsilon");
  CHECK(field_of(config("plot", {})) == "command");
  CHECK(field_of(config("sieve", {{"N", "10^3"}})) == "");
  CHECK(field_of(config("sieve", {{"N", "1e3"}})) == "");

  try {
    run_experiment(config("sieve", {{"N", "-1"}}));
    FAIL("expected a validation error");
  } catch (const std::exception& e) {
    CHECK(exit_code_for(e) == 2);
  }
}

TEST_CASE("emit: empty results are refused and nothing is written") {
  auto bundle = run_experiment(config("sieve", {{"N", "5"}}));
  bundle.tables.front().rows.clear();
  const auto dir = scratch("empty");
  CHECK_ERROR_KIND(emit_report(bundle, dir), ErrorKind::size);
  CHECK_FALSE(fs::exists(dir));

  ReportBundle blank;
  blank.command = "sieve";
  CHECK_ERROR_KIND(emit_report(blank, dir), ErrorKind::size);
  CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("emit: unwritable directory is an I/O error") {
  const auto dir = scratch("blocked");
  fs::create_directories(dir.parent_path());
  { std::ofstream(dir) << "a file, not a directory"; }
  const auto bundle = run_experiment(config("sieve", {{"N", "5"}}));
  try {
    emit_report(bundle, dir / "sub");
    FAIL("expected an I/O error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
    CHECK(exit_code_for(e) == 4);
  }
  fs::remove(dir);
}

TEST_CASE("determinism: identical config gives identical report bytes") {
  const std::vector<ExperimentConfig> configs{
      config("mls", {{"cascade", "6"}, {"depth", "6"}, {"N", "5000"}, {"delta", "1e-2"}}),
      config("oscillation", {{"c", "rotation:0.3"}, {"N", "5000"}, {"grid", "64"}}),
      config("attract", {{"cascade", "5"}, {"depth", "5"}, {"N", "5000"}}),
      config("screen", {{"map", "logistic r=3.83"}, {"p_max", "5"}, {"grid", "2048"}}),
  };
  for (const auto& cfg : configs) {
    const auto a = scratch("det_a");
    const auto b = scratch("det_b");
    emit_report(run_experiment(cfg), a);
    emit_report(run_experiment(cfg), b);
    for (const auto& entry : fs::directory_iterator(a)) {
      if (entry.path().filename() == "manifest.json") continue;
      CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
  }
}

TEST_CASE("round trip: every report type") {
  const auto f = mapengine::MapSpec::logistic(mapengine::locate_cascade_parameter(5).parameter);
  const auto T = tower::build_tower(f, 0.5, 5);

  const auto mu = seqlab::mobius_sieve(2000);
  check_round_trip(seqlab::cesaro_average(mu, decade_schedule(2000)), io::cesaro_series_from_json);
  check_round_trip(seqlab::oscillation_test(mu, 2.0, 64, decade_schedule(2000)),
                   io::oscillation_report_from_json);
  std::vector<std::int64_t> evens;
  for (std::int64_t k = 2; k <= 100; k += 2) evens.push_back(k);
  check_round_trip(seqlab::upper_density_estimate(evens, 100, linear_schedule(100, 5)),
                   io::density_report_from_json);
  check_round_trip(odometer::progression_density(odometer::Cylinder(3, 4), odometer::Cylinder(9, 4)),
                   io::progression_from_json);
  check_round_trip(mapengine::entropy_screen(mapengine::MapSpec::logistic(3.83), 4, 1024, 1e-12),
                   io::screen_result_from_json);
  check_round_trip(mapengine::perron_eigenvalue(mapengine::TransitionMatrix::parse("01;11")),
                   io::perron_result_from_json);
  check_round_trip(mapengine::locate_cascade_parameter(4), io::cascade_result_from_json);
  check_round_trip(T, io::tower_from_json);
  check_round_trip(tower::verify_tower(T), io::tower_report_from_json);
  check_round_trip(tower::itinerary(T, 0.5, 500), io::itinerary_from_json);

  verifier::ProbeConfig cfg;
  cfg.horizon = 2000;
  cfg.delta = 1e-2;
  const auto K = tower::deepest_sample(T);
  check_round_trip(cfg, io::probe_config_from_json);
  check_round_trip(verifier::mls_probe(f, K.points, cfg), io::mls_verdict_from_json);
  check_round_trip(verifier::equicontinuity_probe(f, K.points, cfg), io::equicontinuity_from_json);
  check_round_trip(verifier::mean_attraction_search(f, 0.5, T, cfg), io::attraction_from_json);

  // A re-parsed tower rebuilds the same orbit it was made from.
  const auto back = io::tower_from_json(Json::parse(io::to_json(T).dump()));
  CHECK(back.map == T.map);
  CHECK(tower::verify_tower(back).all_pass());
}

TEST_CASE("sequence csv: write and read back") {
  const auto c = seqlab::ArithmeticSequence::rotation(50, 0.123);
  std::stringstream ss;
  io::write_sequence_csv(ss, c);
  const auto back = io::read_sequence_csv(ss, "back");
  REQUIRE(back.size() == 50);
  for (std::int64_t n = 1; n <= 50; ++n) CHECK(std::abs(back(n) - c(n)) < 1e-14);

  std::stringstream bad("n,re,im\n1,0,0\n3,0,0\n");
  CHECK_ERROR_KIND(io::read_sequence_csv(bad, "bad"), ErrorKind::argument);
  std::stringstream header("x,y\n");
  CHECK_ERROR_KIND(io::read_sequence_csv(header, "bad"), ErrorKind::argument);
}

TEST_CASE("config file: parameters and command") {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  const auto path = dir / "run.json";
  std::ofstream(path) << R"({"command": "odometer", "seed": 7, "depth": 8,
                            "parameters": {"n": 3, "N": "8"}})";
  const auto cfg = load_config(path);
  CHECK(cfg.command == "odometer");
  CHECK(cfg.seed == 7);
  CHECK(cfg.parameters.at("depth") == "8");
  CHECK(cfg.parameters.at("n") == "3");
  CHECK(run_experiment(cfg).report["result"]["census"].size() == 8);

  std::ofstream(path) << "[1, 2]";
  CHECK_THROWS_AS(load_config(path), ValidationError);
  CHECK_ERROR_KIND(load_config(dir / "missing.json"), ErrorKind::io);
}
