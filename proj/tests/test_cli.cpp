// Copyright 2026 The gausstail Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gausstail/cli.hpp"
#include "gausstail/expansion.hpp"

using namespace gausstail;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gausstail");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run_cli(int(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture(const std::string& name) { return std::string(GAUSSTAIL_FIXTURES) + "/" + name + ".json"; }

fs::path temp_file(const std::string& name, const std::string& text) {
  const auto p = fs::temp_directory_path() / ("gausstail_cli_" + name);
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  double at(std::size_t row, const std::string& col) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == col) return std::stod(rows.at(row).at(i));
    FAIL("no column " << col);
    return 0.0;
  }
};

Csv parse_csv(const std::string& text) {
  Csv c;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (c.header.empty())
      c.header = cells;
    else
      c.rows.push_back(cells);
  }
  return c;
}

}  // namespace

TEST_CASE("coeffs prints exact coefficients") {
  auto r = run({"coeffs", "--geometry", fixture("empty_square")});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["exact"]["l0"].get<double>() == doctest::Approx((kPi - 4) / kPi).epsilon(1e-12));
  CHECK(j["manifest"]["command"] == "coeffs");
  CHECK(j["manifest"]["input_sha256"].get<std::string>().size() == 64);

  r = run({"coeffs", "--geometry", fixture("whisker_square")});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["exact"]["l1"].get<double>() == doctest::Approx(6.0).epsilon(1e-12));

  r = run({"coeffs", "--geometry", fixture("cube")});
  REQUIRE(r.code == 0);
  j = nlohmann::json::parse(r.out)["exact"];
  CHECK(j["l1"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(j["l2"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(j["l3"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("coeffs with the oracle") {
  const auto r = run({"coeffs", "--geometry", fixture("angle"), "--oracle", "--eps-max", "0.45"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(std::abs(j["oracle"]["coefficients"]["l0"].get<double>() - 0.93169011381620932846) < 0.05);
  CHECK(j["oracle"]["eps"].size() >= 8);
}

TEST_CASE("invalid geometry exits with 2") {
  const auto bowtie = temp_file("bowtie.json", R"({"dimension": 2, "components": [{"outer": [
      {"type": "segment", "from": [0, 0], "to": [1, 1]}, {"type": "segment", "from": [1, 1], "to": [1, 0]},
      {"type": "segment", "from": [1, 0], "to": [0, 1]}, {"type": "segment", "from": [0, 1], "to": [0, 0]}]}]})");
  auto r = run({"coeffs", "--geometry", bowtie.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("invalid geometry") != std::string::npos);
  r = run({"coeffs", "--geometry", "/nonexistent/geometry.json"});
  CHECK(r.code == 2);
  r = run({"expand", "--geometry", bowtie.string()});
  CHECK(r.code == 2);
  fs::remove(bowtie);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"expand", "--geometry", fixture("angle"), "--u-step", "0"}).code == 2);
  CHECK(run({"expand", "--geometry", fixture("angle"), "--u-step", "-0.5"}).code == 2);
  CHECK(run({"expand", "--geometry", fixture("angle"), "--u-min", "0"}).code == 2);
  CHECK(run({"simulate", "--geometry", fixture("angle"), "--levels", "2,x"}).code == 2);
  CHECK(run({"simulate", "--geometry", fixture("angle"), "--replicates", "0"}).code == 2);
  CHECK(run({"simulate", "--geometry", fixture("cube"), "--replicates", "10"}).code == 2);
  CHECK(run({"expand", "--geometry", fixture("angle"), "--bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"expand", "--help"}).code == 0);
}

TEST_CASE("expand table") {
  auto r = run({"expand", "--geometry", fixture("angle"), "--u-min", "1.5", "--u-max", "3", "--u-step", "0.5"});
  REQUIRE(r.code == 0);
  auto csv = parse_csv(r.out);
  CHECK(csv.header == std::vector<std::string>{"u", "term_L0", "term_L1", "term_sigma2", "total"});
  REQUIRE(csv.rows.size() == 4);
  CHECK(csv.at(2, "u") == 2.5);
  CHECK(csv.at(2, "total") == doctest::Approx(0.019771044135064516429).epsilon(1e-14));

  r = run({"expand", "--geometry", fixture("unit_square"), "--u-min", "2", "--u-max", "2"});
  REQUIRE(r.code == 0);
  csv = parse_csv(r.out);
  const double phi = normal_density(2.0);
  CHECK(csv.at(0, "term_L0") == doctest::Approx(normal_tail(2.0)).epsilon(1e-15));
  CHECK(csv.at(0, "term_L1") == doctest::Approx(4.0 * phi / (2 * std::sqrt(2 * kPi))).epsilon(1e-15));
  CHECK(csv.at(0, "term_sigma2") == doctest::Approx(2.0 * phi / (2 * kPi)).epsilon(1e-15));

  r = run({"expand", "--geometry", fixture("cube"), "--u-min", "3", "--u-max", "3"});
  REQUIRE(r.code == 0);
  csv = parse_csv(r.out);
  CHECK(csv.header == std::vector<std::string>{"u", "term_L1", "term_L2", "term_L3", "total"});
  CHECK(csv.at(0, "total") == doctest::Approx(0.01125138616058981374).epsilon(1e-14));
}

TEST_CASE("csv format") {
  const auto r = run({"expand", "--geometry", fixture("disk"), "--u-min", "1", "--u-max", "2", "--u-step", "0.25"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find('\r') == std::string::npos);
  CHECK(r.out.back() == '\n');
  const auto csv = parse_csv(r.out);
  // 17 significant digits round-trip every value
  for (const auto& row : csv.rows)
    for (const auto& cell : row) {
      const double v = std::stod(cell);
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      CHECK(cell == buf);
    }
  CHECK(r.out.find("# tool_version=0.1.0") != std::string::npos);
}

TEST_CASE("simulate") {
  const auto dir = fs::temp_directory_path();
  const std::string a = (dir / "gausstail_sim_a").string(), b = (dir / "gausstail_sim_b").string();
  const std::vector<std::string> args{"simulate", "--geometry", fixture("single_point"), "--levels", "1,2",
                                      "--replicates", "100000", "--seed", "5", "--no-diagnostics"};
  auto with_out = [&](const std::string& path) {
    auto v = args;
    v.insert(v.end(), {"--out", path});
    return run(v);
  };
  REQUIRE(with_out(a).code == 0);
  REQUIRE(with_out(b).code == 0);
  const auto csv_a = slurp(a + ".csv");
  CHECK(csv_a == slurp(b + ".csv"));
  const auto csv = parse_csv(csv_a);
  REQUIRE(csv.rows.size() == 2);
  const double p = csv.at(1, "p_hat"), se = csv.at(1, "standard_error");
  CHECK(std::abs(p / normal_tail(2.0) - 1) <= 3 * se / normal_tail(2.0));
  CHECK(csv.at(1, "expansion") == doctest::Approx(normal_tail(2.0)).epsilon(1e-15));
  CHECK(csv.at(1, "replicates") == 100000);

  const auto j = nlohmann::json::parse(slurp(a + ".json"));
  CHECK(j["manifest"]["seed"] == 5);
  CHECK(j["manifest"]["tool_version"] == "0.1.0");
  CHECK(j["manifest"].contains("wall_time_seconds"));
  CHECK(j["rows"].size() == 2);
  for (const auto& s : {a, b}) {
    fs::remove(s + ".csv");
    fs::remove(s + ".json");
  }
}

TEST_CASE("domain violations exit with 3") {
  const auto longseg = temp_file("long.json", R"({"dimension": 2, "components": [{"curve": [
      {"type": "segment", "from": [0, 0], "to": [5, 0]}]}]})");
  CHECK(run({"simulate", "--geometry", longseg.string(), "--replicates", "10"}).code == 3);
  const auto cfg = temp_file("small_domain.json", R"({"max_domain_diameter": 1.0})");
  CHECK(run({"--config", cfg.string(), "simulate", "--geometry", fixture("angle"), "--replicates", "10"}).code == 3);
  fs::remove(longseg);
  fs::remove(cfg);
}

TEST_CASE("configuration errors exit with 3") {
  const auto unknown = temp_file("unknown.json", R"({"tolerance": 1})");
  const auto badtype = temp_file("badtype.json", R"({"oracle_l0_abs": "loose"})");
  const auto badjson = temp_file("badjson.json", "{");
  for (const auto& p : {unknown, badtype, badjson}) {
    CHECK(run({"--config", p.string(), "expand", "--geometry", fixture("angle")}).code == 3);
    fs::remove(p);
  }
  CHECK(run({"--config", "/nonexistent/config.json", "expand", "--geometry", fixture("angle")}).code == 3);
  const auto ok = temp_file("ok.json", R"({"waves": 70, "oracle_l0_abs": 0.05})");
  CHECK(run({"--config", ok.string(), "expand", "--geometry", fixture("angle")}).code == 0);
  fs::remove(ok);
}

TEST_CASE("examples") {
  auto r = run({"examples"});
  CHECK(r.code == 0);
  const auto csv = parse_csv(r.out);
  CHECK(csv.rows.size() > 20);
  bool tangent = false, dihedral = false;
  for (std::size_t i = 0; i < csv.rows.size(); ++i) {
    const auto& row = csv.rows[i];
    CHECK(row.back() == "PASS");
    if (row[0] == "tangent_pair" && row[1] == "coefficient u^-1/2") {
      tangent = true;
      CHECK(csv.at(i, "exact") == doctest::Approx(0.65600389733375293279).epsilon(1e-14));
    }
    if (row[0] == "dihedral" && csv.at(i, "closed_form") == doctest::Approx(1.0683098861837906715)) dihedral = true;
    if (row[0].rfind("convex", 0) == 0 && row[1] == "L0") CHECK(csv.at(i, "exact") == 1.0);
  }
  CHECK(tangent);
  CHECK(dihedral);

  const auto strict = temp_file("strict.json", R"({"oracle_l0_abs": 1e-9})");
  r = run({"--config", strict.string(), "examples"});
  CHECK(r.code == 4);
  CHECK(r.err.find("L0") != std::string::npos);
  fs::remove(strict);
}
