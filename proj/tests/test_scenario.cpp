#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aaa/equivocation.hpp"
#include "aaa/scenario.hpp"

using namespace aaa;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("aaakey_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> csv_column(const std::string& csv, std::size_t col) {
  std::vector<std::string> out;
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell;
    for (std::size_t k = 0; k <= col; ++k) std::getline(cells, cell, ',');
    out.push_back(cell);
  }
  return out;
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("every file in the negative corpus is rejected") {
    std::size_t seen = 0;
    for (const auto& entry : fs::directory_iterator(AAA_TEST_DATA_DIR "/invalid")) {
      CAPTURE(entry.path().filename().string());
      CHECK_THROWS_AS(load_scenario(entry.path()), ValidationError);
      ++seen;
    }
    CHECK(seen >= 15);
  }

  TEST_CASE("validation errors carry a line number") {
    try {
      parse_scenario("{\n \"name\": \"x\",\n \"L\": 1,\n \"j\": 1,\n \"extra\": 3,\n \"source\": {\"type\": \"iid\"},\n"
                     " \"intercept\": {\"mode\": \"per_file\", \"mu\": [0.1]},\n \"outputs\": [\"oracle\"]\n}");
      FAIL("expected rejection");
    } catch (const ValidationError& e) {
      CHECK(e.line() == 5);
    }
    try {
      parse_scenario("{\n \"name\": \"x\",\n \"L\": 1\n \"j\": 1}");
      FAIL("expected rejection");
    } catch (const ValidationError& e) {
      CHECK(e.line() == 4);
    }
  }

  TEST_CASE("bundled scenarios parse") {
    for (const auto& entry : fs::directory_iterator(AAA_SCENARIO_DIR)) {
      CAPTURE(entry.path().filename().string());
      CHECK_NOTHROW(load_scenario(entry.path()));
    }
  }

  TEST_CASE("constant mu trajectory follows 1 - 0.5^j") {
    const auto s = parse_scenario(R"({"name": "const_half", "L": 1, "j": 10, "source": {"type": "iid"},
      "intercept": {"mode": "per_bit", "mu_constant": 0.5}, "seed": 1, "outputs": ["closed_form", "oracle", "capacity"]})");
    const auto dir = scratch("const_half");
    run_scenario(s, RunOptions{dir, std::nullopt, std::nullopt, 1});
    const auto csv = slurp(dir / "const_half" / "by_j.csv");
    CHECK(csv.rfind("j,closed_form,oracle,capacity,gap\n", 0) == 0);
    const auto eps = csv_column(csv, 1);
    const auto oracle = csv_column(csv, 2);
    const auto cap = csv_column(csv, 3);
    REQUIRE(eps.size() == 10);
    for (std::size_t j = 1; j <= 10; ++j) {
      CHECK(std::abs(std::stod(eps[j - 1]) - (1.0 - std::pow(0.5, j))) < 1e-11);
      CHECK(std::abs(std::stod(oracle[j - 1]) - (1.0 - std::pow(0.5, j))) < 1e-11);
      CHECK(std::abs(std::stod(cap[j - 1]) - 0.5 * j) < 1e-11);
    }
  }

  TEST_CASE("file-coupled scenario with a certain miss reports L") {
    const auto s = parse_scenario(R"({"name": "file128", "L": 128, "j": 4, "source": {"type": "iid"},
      "intercept": {"mode": "per_file", "mu": [0.1, 0.0, 1.0, 0.3]}, "trials": 2000, "seed": 2,
      "outputs": ["closed_form", "oracle", "mc"]})");
    const auto dir = scratch("file128");
    const auto report = run_scenario(s, RunOptions{dir, std::nullopt, std::nullopt, 1});
    CHECK(*report.closed_form == 128.0);
    CHECK(*report.oracle == doctest::Approx(128.0).epsilon(1e-12));
    CHECK(report.mc_estimate->value == 128.0);
    const auto summary = nlohmann::json::parse(slurp(dir / "file128" / "summary.json"));
    CHECK(summary["closed_form"].get<double>() == 128.0);
    CHECK(summary["key_hex"].get<std::string>().size() == 32);
  }

  TEST_CASE("markov sweep mirrors around one half") {
    const auto csv = markov_sweep_csv(0.01, 0.5);
    const auto alpha = csv_column(csv, 0);
    const auto mu_hat_col = csv_column(csv, 2);
    const auto mirror = csv_column(csv, 3);
    REQUIRE(alpha.size() == 101);
    CHECK(std::stod(alpha.front()) == 0.0);
    CHECK(std::stod(alpha.back()) == 1.0);
    CHECK(std::stod(mu_hat_col[50]) == doctest::Approx(1.0));
    for (std::size_t k = 0; k <= 100; ++k) {
      CHECK(mu_hat_col[k] == mu_hat_col[100 - k]);
      CHECK(mu_hat_col[k] == mirror[k]);
    }
  }

  TEST_CASE("replays are byte identical") {
    const auto s = load_scenario(fs::path(AAA_SCENARIO_DIR) / "per_bit_iid.json");
    const auto a = scratch("replay_a");
    const auto b = scratch("replay_b");
    run_scenario(s, RunOptions{a, std::nullopt, 5000, 1});
    run_scenario(s, RunOptions{b, std::nullopt, 5000, 3});
    for (const char* f : {"summary.json", "by_j.csv"}) CHECK(slurp(a / s.name / f) == slurp(b / s.name / f));
    const auto c = scratch("replay_c");
    run_scenario(s, RunOptions{c, 99, 5000, 1});
    CHECK(slurp(a / s.name / "summary.json") != slurp(c / s.name / "summary.json"));
  }

  TEST_CASE("packets source reads the selected bits") {
    const auto dir = scratch("packets");
    const unsigned char bytes[2] = {0xA5, 0x0F};
    for (int i = 0; i < 2; ++i) {
      std::ofstream out(dir / ("p" + std::to_string(i) + ".bin"), std::ios::binary);
      out.put(static_cast<char>(bytes[i]));
    }
    std::ofstream(dir / "scenario.json") << R"({"name": "pk", "L": 3, "j": 2,
      "source": {"type": "packets", "files": ["p0.bin", "p1.bin"], "offsets": [0, 1, 7]},
      "intercept": {"mode": "per_file", "mu": [0.5, 0.5]}, "outputs": ["closed_form"]})";
    const auto s = load_scenario(dir / "scenario.json");
    run_scenario(s, RunOptions{dir / "out", std::nullopt, std::nullopt, 1});
    const auto summary = nlohmann::json::parse(slurp(dir / "out" / "pk" / "summary.json"));
    // 0xA5 gives 1,0,1 and 0x0F gives 0,0,1 at offsets 0,1,7: key bits 1,0,0.
    CHECK(summary["key_hex"] == "4");
    CHECK(summary["key_from"] == "packets");
  }

  TEST_CASE("number formatting") {
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(0.75) == "0.75");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  }
}
