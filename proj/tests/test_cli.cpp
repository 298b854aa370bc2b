#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "unicirc/phases.hpp"

#ifndef UNICIRC_CLI_PATH
#error "UNICIRC_CLI_PATH must point at the built binary"
#endif

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const std::string path =
      "/tmp/unicirc_cli_test_" + std::to_string(counter++) + ".out";
  const std::string cmd = env + (env.empty() ? "" : " ") + UNICIRC_CLI_PATH +
                          " " + args + " > " + path + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  std::remove(path.c_str());
  return {WEXITSTATUS(rc), ss.str()};
}

// Parses the data portion of a CSV artifact (skips # preamble and header).
std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(cell.empty() ? std::nan("") : std::stod(cell));
      } catch (const std::invalid_argument&) {
        row.push_back(std::nan(""));  // non-numeric cell (e.g. booleans)
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

using unicirc::kPi;
using unicirc::kTwoPi;
using unicirc::wrap_to_pi;

TEST_CASE("density grid artifact", "[cli]") {
  const auto res = run_cli("density --beta 2 --N 3 --grid-points 4");
  REQUIRE(res.exit_code == 0);
  const auto rows = parse_csv(res.out);
  REQUIRE(rows.size() == 4);
  REQUIRE(rows[0][0] == Catch::Approx(-kPi / 2).margin(1e-15));
  REQUIRE(rows[3][0] == Catch::Approx(kPi).margin(1e-15));
  REQUIRE(rows[1][1] == Catch::Approx(5.0 / kTwoPi).epsilon(1e-12));

  const auto exceptional = run_cli("density --beta 1 --N 2 --grid-points 4");
  const auto frows = parse_csv(exceptional.out);
  // theta = pi/2 is the third grid point of four.
  REQUIRE(frows[2][0] == Catch::Approx(kPi / 2).margin(1e-15));
  REQUIRE(frows[2][1] == Catch::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("exit code contract", "[cli]") {
  REQUIRE(run_cli("density --beta 2 --N 1").exit_code == 2);
  REQUIRE(run_cli("sample --beta 3 --N 2 --count 5").exit_code == 2);
  REQUIRE(run_cli("density --no-such-flag").exit_code == 1);
  REQUIRE(run_cli("morris --n-vars 2 --a 0 --b -1 --lam 1").exit_code == 2);
  REQUIRE(run_cli("").exit_code == 1);  // a subcommand is required
}

TEST_CASE("sample artifact determinism and constraint", "[cli]") {
  const std::string args = "sample --beta 2 --N 2 --count 3 --seed 7";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.out == b.out);

  const auto big = run_cli("sample --beta 4 --N 3 --count 100 --seed 3");
  const auto rows = parse_csv(big.out);
  REQUIRE(rows.size() == 100);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 3);
    REQUIRE(std::abs(wrap_to_pi(row[0] + row[1] + row[2])) <= 1e-9);
  }
}

TEST_CASE("csv and json artifacts carry identical values", "[cli]") {
  const std::string common = "density --beta 4 --N 2 --grid-points 16";
  const auto csv = run_cli(common);
  const auto js = run_cli(common + " --format json");
  REQUIRE(csv.exit_code == 0);
  REQUIRE(js.exit_code == 0);

  const auto rows = parse_csv(csv.out);
  const auto parsed = nlohmann::json::parse(js.out);
  REQUIRE(parsed["version"] == "1.0.0");
  REQUIRE(parsed["config"]["beta"] == 4);
  const auto& points = parsed["points"];
  REQUIRE(points.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(rows[i][0] == points[i]["theta"].get<double>());
    REQUIRE(rows[i][1] == points[i]["rho"].get<double>());
  }
}

TEST_CASE("morris artifact", "[cli]") {
  const auto six = run_cli("morris --n-vars 2 --a 1 --b 1 --lam 1");
  REQUIRE(six.exit_code == 0);
  const auto rows = parse_csv(six.out);
  REQUIRE(rows[0][0] == Catch::Approx(6.0).epsilon(1e-12));

  const auto zero = run_cli(
      "morris --n-vars 2 --a 2.5 --b -1.5 --lam 0.5 --format json");
  const auto parsed = nlohmann::json::parse(zero.out);
  REQUIRE(parsed["value"].get<double>() == 0.0);
  REQUIRE(parsed["exact_zero"].get<bool>());
  REQUIRE(parsed["pole"]["j"] == 1);

  const auto negative = run_cli("morris --n-vars 1 --a 2.5 --b -1.5 --lam 0.5");
  REQUIRE(parse_csv(negative.out)[0][0] ==
          Catch::Approx(-0.084882636315677512).epsilon(1e-9));
}

TEST_CASE("moments artifact", "[cli]") {
  auto rows = parse_csv(run_cli("moments --beta 2 --N 3 --k 3").out);
  REQUIRE(rows[0][0] == Catch::Approx(1.0).epsilon(1e-12));
  rows = parse_csv(run_cli("moments --beta 2 --N 3 --k 2").out);
  REQUIRE(rows[0][0] == 0.0);
  rows = parse_csv(run_cli("moments --beta 4 --N 2 --k 4").out);
  REQUIRE(rows[0][0] == Catch::Approx(1.0 / 3.0).epsilon(1e-12));

  // Empirical column appears once --count is given.
  rows = parse_csv(
      run_cli("moments --beta 2 --N 2 --k 2 --count 2000 --seed 5").out);
  REQUIRE(rows[0].size() == 4);
  REQUIRE(std::abs(rows[0][3]) < 4.0);  // z-score against the analytic value
}

TEST_CASE("verify report and exit codes", "[cli]") {
  const auto ok = run_cli("verify --beta 2 --N 3 --count 20000 --seed 1");
  REQUIRE(ok.exit_code == 0);
  const auto parsed = nlohmann::json::parse(ok.out);
  REQUIRE(parsed["all_pass"].get<bool>());
  REQUIRE(parsed["tests"]["chi_square"]["p_value"].get<double>() > 1e-3);

  const auto power =
      run_cli("verify --beta 2 --N 3 --count 20000 --seed 1 --expect-uniform");
  REQUIRE(power.exit_code == 3);
  const auto preport = nlohmann::json::parse(power.out);
  REQUIRE_FALSE(preport["all_pass"].get<bool>());
}

TEST_CASE("output is byte-identical across thread counts", "[cli]") {
  const std::string args =
      "sample --beta 1 --N 3 --count 20000 --seed 11 --stream-id 4";
  const auto one = run_cli(args, "UNICIRC_THREADS=1");
  const auto four = run_cli(args, "UNICIRC_THREADS=4");
  REQUIRE(one.exit_code == 0);
  REQUIRE(one.out == four.out);
}
