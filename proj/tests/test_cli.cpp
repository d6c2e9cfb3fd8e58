#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunOutput {
  int exit_code = -1;
  std::string out;
};

std::string binary() {
  const char* env = std::getenv("PCSIM_BIN");
  REQUIRE_MESSAGE(env != nullptr, "PCSIM_BIN must point at the CLI binary");
  return env;
}

RunOutput run(const std::string& args) {
  const std::string cmd = binary() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunOutput result;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
    result.out.append(buf, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path scratch_dir() {
  static std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "pcsim-cli-test";
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_config(const std::string& name, const std::string& json) {
  const auto path = scratch_dir() / name;
  std::ofstream out(path);
  out << json;
  out.close();
  return path.string();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

std::string field(const std::string& csv_line, std::size_t index) {
  std::istringstream is(csv_line);
  std::string cell;
  for (std::size_t i = 0; i <= index; ++i)
    if (!std::getline(is, cell, ',')) return {};
  return cell;
}

const char* kMotivating = R"({
  "variant": "PLC", "n": 2, "k": 1, "q": 5, "g": 1, "f": 3, "mu": 4,
  "candidates": {"type": "linear",
                 "matrix": [[1, 0, 1], [1, 1, 0], [2, 1, 1], [4, 1, 3]]},
  "seed": 1, "trials": 5
})";

const char* kExample2 = R"({
  "variant": "PLC", "n": 4, "k": 2, "q": 5, "g": 1, "f": 2, "mu": 4,
  "candidates": {"type": "linear", "matrix": [[1, 0], [0, 1], [1, 1], [1, 2]]},
  "seed": 7, "trials": 2
})";

const char* kExample3 = R"({
  "variant": "PPC", "n": 4, "k": 2, "q": 5, "g": 2, "f": 2, "mu": 3,
  "candidates": {"type": "nonparallel_monomials"},
  "seed": 3, "trials": 2
})";

const char* kExample4 = R"({
  "variant": "SysPPC", "n": 4, "k": 2, "q": 5, "g": 2, "f": 2, "mu": 3,
  "candidates": {"type": "nonparallel_monomials"},
  "seed": 3, "trials": 2
})";

}  // namespace

TEST_CASE("rates: closed forms with provenance column") {
  const std::string cfg = write_config("rates_ex2.json", kExample2);
  RunOutput r = run("rates --config " + cfg);
  CHECK(r.exit_code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "variant,n,k,q,g,f,mu,Hmin,rate_closed_form,converse,source");
  CHECK(field(lines[1], 10) == "closed_form");
  CHECK(std::stod(field(lines[1], 8)) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  // Deterministic byte-for-byte.
  CHECK(run("rates --config " + cfg).out == r.out);
}

TEST_CASE("rates: f sweep produces one row per f") {
  // q must leave room for the n Lagrange points, so the sweep runs over F_11.
  const std::string cfg = write_config("rates_sweep.json", R"({
    "variant": "PPC", "n": 7, "k": 2, "q": 11, "g": 2, "f": 1,
    "candidates": {"type": "all_monomials"},
    "f_list": [1, 2, 3]
  })");
  RunOutput r = run("rates --config " + cfg);
  CHECK(r.exit_code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(field(lines[1], 5) == "1");
  CHECK(field(lines[2], 5) == "2");
  CHECK(field(lines[3], 5) == "3");
}

TEST_CASE("rates: k > n is a validation error") {
  const std::string cfg = write_config("rates_bad.json", R"({
    "variant": "PLC", "n": 2, "k": 5, "q": 7, "f": 2,
    "candidates": {"type": "linear", "matrix": [[1, 0], [0, 1]]}
  })");
  RunOutput r = run("rates --config " + cfg);
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("error") != std::string::npos);
}

TEST_CASE("simulate: deterministic rows in seed-major order") {
  const std::string cfg = write_config("sim_motivating.json", kMotivating);
  RunOutput r = run("simulate --config " + cfg);
  CHECK(r.exit_code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 1 + 5 * 4);  // header + trials * mu
  CHECK(lines[0] ==
        "variant,n,k,q,g,f,mu,v,seed,L,Hmin,D,rate_measured,rate_closed_form,"
        "converse,source");
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(field(lines[i], 15) == "measured");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t idx = i - 1;
    CHECK(field(lines[i], 7) == std::to_string(idx % 4 + 1));  // v, 1-based
    CHECK(field(lines[i], 8) == std::to_string(idx / 4 + 1));  // seed
    CHECK(field(lines[i], 9) == "16");                         // L
    CHECK(field(lines[i], 11) == "24");                        // D
    CHECK(std::stod(field(lines[i], 12)) == doctest::Approx(2.0 / 3).epsilon(1e-12));
  }
  // Byte-identical across runs; --seed shifts the base.
  CHECK(run("simulate --config " + cfg).out == r.out);
  RunOutput shifted = run("simulate --config " + cfg + " --seed 100 --trials 1");
  auto shifted_lines = lines_of(shifted.out);
  REQUIRE(shifted_lines.size() == 5);
  CHECK(field(shifted_lines[1], 8) == "100");
}

TEST_CASE("simulate: monomial examples hit their download fixtures") {
  const std::string cfg3 = write_config("sim_ex3.json", kExample3);
  RunOutput r3 = run("simulate --config " + cfg3);
  CHECK(r3.exit_code == 0);
  auto lines3 = lines_of(r3.out);
  REQUIRE(lines3.size() == 1 + 2 * 3);
  for (std::size_t i = 1; i < lines3.size(); ++i) CHECK(field(lines3[i], 11) == "336");

  const std::string cfg4 = write_config("sim_ex4.json", kExample4);
  RunOutput r4 = run("simulate --config " + cfg4);
  CHECK(r4.exit_code == 0);
  auto lines4 = lines_of(r4.out);
  for (std::size_t i = 1; i < lines4.size(); ++i) CHECK(field(lines4[i], 11) == "120");
}

TEST_CASE("simulate: --out writes the same bytes to a file") {
  const std::string cfg = write_config("sim_out.json", kExample2);
  const auto out_path = scratch_dir() / "sim.csv";
  RunOutput direct = run("simulate --config " + cfg);
  RunOutput filed = run("simulate --config " + cfg + " --out " + out_path.string());
  CHECK(filed.exit_code == 0);
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == direct.out);
}

TEST_CASE("verify: example configurations pass all suites") {
  for (const char* cfg_text : {kMotivating, kExample2, kExample3, kExample4}) {
    const std::string cfg = write_config("verify_cfg.json", cfg_text);
    RunOutput r = run("verify --config " + cfg + " --trials 60");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("failed") == std::string::npos);
    CHECK(r.out.find("ok: ") != std::string::npos);
  }
}

TEST_CASE("verify: zero trials runs structural checks only") {
  const std::string cfg = write_config("verify_structural.json", kExample2);
  RunOutput r = run("verify --config " + cfg + " --trials 0");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("skipped") != std::string::npos);
}

TEST_CASE("verify: corrupted rate matrix fails citing column weight") {
  const std::string cfg = write_config("verify_corrupt.json", R"({
    "variant": "PLC", "n": 4, "k": 2, "q": 5, "f": 2,
    "candidates": {"type": "linear", "matrix": [[1, 0], [0, 1], [1, 1], [1, 2]]},
    "lambda": {"type": "text", "text": "1110\n0101\n"}
  })");
  RunOutput r = run("verify --config " + cfg);
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("weight") != std::string::npos);
}

TEST_CASE("figure: fixture comparison CSV and unknown ids") {
  RunOutput r = run("figure --figure fig4a");
  CHECK(r.exit_code == 0);
  auto lines = lines_of(r.out);
  CHECK(lines[0] == "figure,x,series,value,source");
  bool has_fixture = false, has_computed = false;
  for (const auto& l : lines) {
    has_fixture |= l.find("paper_fixture") != std::string::npos;
    has_computed |= l.find(",computed") != std::string::npos;
  }
  CHECK(has_fixture);
  CHECK(has_computed);

  CHECK(run("figure --figure nosuch").exit_code == 1);
}

TEST_CASE("usage errors exit with the validation code") {
  CHECK(run("simulate").exit_code == 1);            // missing --config
  CHECK(run("bogus-subcommand").exit_code == 1);
  CHECK(run("rates --config /nonexistent.json").exit_code == 1);
  CHECK(run("--help").exit_code == 0);
}
