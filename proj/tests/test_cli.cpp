#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dipolecav/cli.hpp"

using namespace dipolecav;
using namespace dipolecav::cli;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "dipolecav_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const std::vector<std::string> kSweep200 = {"planar", "--L", "1.1pi_over_p", "--zA", "0.5L", "--zD", "0.5L",
                                        "--xmin", "0.01", "--xmax", "100", "--points", "200",
                                        "--components", "xx,yy,zz"};

}  // namespace

TEST_CASE("length grammar") {
  const std::map<std::string, double> refs{{"L", 3.0}, {"a", 5.0}};
  CHECK(parse_length("1.1pi_over_p", 2.0, {}) == doctest::Approx(1.1 * pi / 2).epsilon(1e-15));
  CHECK(parse_length("2pi", 2.0, {}) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(parse_length("1.1sqrt2pi_over_p", 1.0, {}) == doctest::Approx(1.1 * std::sqrt(2.0) * pi).epsilon(1e-15));
  CHECK(parse_length("0.5L", 1.0, refs) == 1.5);
  CHECK(parse_length("0.2a", 1.0, refs) == 1.0);
  CHECK(parse_length("4over_p", 2.0, {}) == 2.0);
  CHECK(parse_length("1e-2", 1.0, {}) == 0.01);
  CHECK_THROWS_AS(parse_length("abc", 1.0, {}), UsageError);
  CHECK_THROWS_AS(parse_length("0.5b", 1.0, refs), UsageError);
}

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(std::nan("")) == "nan");
  for (double v : {pi, -1.0 / 3, 6.02214076e23, 5e-324}) {
    const std::string s = format_number(v);
    double back = 0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
}

TEST_CASE("parse_config") {
  const RunConfig c = parse_config(kSweep200);
  CHECK(c.command == Command::planar);
  REQUIRE(std::holds_alternative<PlanarGeometry>(c.geometry));
  CHECK(std::get<PlanarGeometry>(c.geometry).L == doctest::Approx(1.1 * pi).epsilon(1e-15));
  CHECK(c.placement.z_A == doctest::Approx(0.55 * pi).epsilon(1e-15));
  CHECK(c.points == 200);
  CHECK(c.components.size() == 3);
  CHECK(c.format == Format::csv);

  auto with_json = kSweep200;
  with_json.insert(with_json.end(), {"--format", "json"});
  CHECK(parse_config(with_json).format == Format::json);

  CHECK_THROWS_AS(parse_config({"planar", "--zA", "0.5"}), UsageError);
  CHECK_THROWS_AS(parse_config({"channel", "--a", "3"}), UsageError);
  CHECK_THROWS_AS(parse_config({"free3d", "--components", "xq"}), UsageError);
  CHECK_THROWS_AS(parse_config({"free3d", "--bogus", "1"}), UsageError);
  CHECK_THROWS_AS(parse_config({"free3d", "--format", "xml"}), UsageError);
  CHECK_THROWS_AS(parse_config({"sweep", "--p", "1"}), UsageError);
  CHECK_THROWS_AS(parse_config({"oracle", "--geometry", "free3d"}), UsageError);
  CHECK_THROWS_AS(parse_config({"free3d", "--xmin", "2", "--xmax", "1"}), UsageError);
}

TEST_CASE("config file: precedence and unknown keys") {
  const fs::path cfg = scratch("cfg.json");
  std::ofstream(cfg) << R"({"L": "0.9pi_over_p", "points": 7, "format": "json", "components": ["xx", "zz"]})";
  const RunConfig c = parse_config({"planar", "--config", cfg.string(), "--points", "9"});
  CHECK(c.points == 9);
  CHECK(c.format == Format::json);
  CHECK(c.components.size() == 2);
  CHECK(std::get<PlanarGeometry>(c.geometry).L == doctest::Approx(0.9 * pi).epsilon(1e-15));

  const fs::path bad = scratch("bad.json");
  std::ofstream(bad) << R"({"L": 3, "colour": "red"})";
  const auto o = invoke({"planar", "--config", bad.string()});
  CHECK(o.code == kExitUsage);
  CHECK(o.err.find("colour") != std::string::npos);
}

TEST_CASE("planar sweep: 200 rows, X + 3 x 8 + status columns, round trip") {
  const fs::path out = scratch("sweep200.csv");
  auto args = kSweep200;
  args.insert(args.end(), {"--out", out.string()});
  REQUIRE(invoke(args).code == kExitOk);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 201);
  CHECK(rows[0].size() == 1 + 3 * 8 + 1);
  CHECK(rows[0][1] == "xx_re");
  CHECK(rows[0][8] == "xx_n");
  CHECK(rows[0].back() == "status");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].size() == rows[0].size());
    CHECK(rows[i].back() == "ok");
  }
  // the CSV carries full precision: re-parse and compare with a direct evaluation
  const RunConfig c = parse_config(kSweep200);
  SweepSpec s;
  s.geometry = c.geometry;
  s.placement = c.placement;
  s.x_min = c.x_min;
  s.x_max = c.x_max;
  s.count = c.points;
  s.components = c.components;
  const auto r = run_sweep(s);
  for (std::size_t i = 0; i < r.x.size(); i += 37) {
    const auto& cells = rows[i + 1];
    double x = 0, re = 0;
    std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), x);
    std::from_chars(cells[17].data(), cells[17].data() + cells[17].size(), re);
    CHECK(x == r.x[i]);
    CHECK(re == r.values[i].total(2, 2).real());
  }
  CHECK_FALSE(fs::exists(out.string() + ".tmp"));
}

TEST_CASE("JSON output re-parses bit-exactly") {
  const auto o = invoke({"free3d", "--points", "9", "--components", "xx,zz", "--format", "json"});
  REQUIRE(o.code == kExitOk);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["meta"]["geometry"]["kind"] == "free3d");
  CHECK(j["meta"].contains("version"));
  const auto grid = j["grid"].get<std::vector<double>>();
  REQUIRE(grid.size() == 9);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto V = evaluate(Free3D{}, 1.0, {}, grid[i]);
    CHECK(j["components"]["zz"]["re"][i].get<double>() == V.total(2, 2).real());
    CHECK(j["components"]["zz"]["rd"]["im"][i].get<double>() == V.rd(2, 2).imag());
    CHECK(j["components"]["xx"]["abs"][i].get<double>() == std::abs(V.total(0, 0)));
  }
  CHECK(j["status"].size() == 9);
}

TEST_CASE("identical config gives identical bytes for any thread count") {
  const std::vector<std::string> base = {"channel", "--a", "1.1sqrt2pi_over_p", "--b", "1.3pi", "--zA", "0.3b",
                                         "--xmin", "0.2", "--xmax", "20", "--points", "24", "--components",
                                         "xx,xy,yz"};
  auto one = base, four = base;
  one.insert(one.end(), {"--threads", "1"});
  four.insert(four.end(), {"--threads", "4"});
  const auto a = invoke(one), b = invoke(four), c = invoke(four);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(b.out == c.out);
}

TEST_CASE("resonant cavity: per-point status, exit 3, file still written") {
  const fs::path out = scratch("resonant.csv");
  const auto o = invoke({"planar", "--L", "1pi_over_p", "--points", "4", "--out", out.string()});
  CHECK(o.code == kExitPointFailure);
  const auto rows = parse_csv(slurp(out));
  REQUIRE(rows.size() == 5);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].back() == "resonant");
}

TEST_CASE("I/O failure exits 4; help exits 0") {
  CHECK(invoke({"free3d", "--out", "/nonexistent-dir/x.csv"}).code == kExitIo);
  const auto h = invoke({"--help"});
  CHECK(h.code == kExitOk);
  CHECK(h.out.find("planar") != std::string::npos);
  CHECK(invoke({}).code == kExitUsage);
}

TEST_CASE("exponent and enhance subcommands") {
  const auto e = invoke({"exponent", "--geometry", "free3d", "--at", "0.01,100", "--components", "xx,zz"});
  REQUIRE(e.code == kExitOk);
  const auto rows = parse_csv(e.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"X", "xx_abs", "xx_n", "zz_abs", "zz_n", "status"});
  CHECK(std::abs(std::stod(rows[1][2]) - 3) < 0.05);
  CHECK(std::abs(std::stod(rows[2][4]) - 1) < 0.1);

  const auto r = invoke({"enhance", "--geometry", "planar", "--L", "100.3pi_over_p", "--xmin", "0.1", "--xmax",
                         "1", "--points", "3", "--components", "zz"});
  REQUIRE(r.code == kExitOk);
  const auto rr = parse_csv(r.out);
  CHECK(rr[0] == std::vector<std::string>{"X", "zz_ratio", "status"});
  for (std::size_t i = 1; i < rr.size(); ++i) CHECK(std::abs(std::stod(rr[i][1]) - 1) < 0.05);
}

TEST_CASE("oracle subcommand on 10 seeded planar cases") {
  const auto o = invoke({"oracle", "--geometry", "planar", "--samples", "10"});
  CHECK(o.code == kExitOk);
  const auto rows = parse_csv(o.out);
  CHECK(rows.size() == 1 + 10 * 9);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].back() == "ok");
}
