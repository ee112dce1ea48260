#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
  const char* bin = std::getenv("DPERM_CLI");
  REQUIRE(bin != nullptr);
  const std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string oeis_dir() {
  const char* data = std::getenv("DPERM_DATA_DIR");
  REQUIRE(data != nullptr);
  return std::string(data) + "/oeis";
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("count") {
  const auto r = run_cli("count --n 4 --avoid \"231;312\"");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.output == "28\n");

  const auto json_run = run_cli("count --n 4 --avoid \"231;312\" --format json");
  REQUIRE(json_run.exit_code == 0);
  const auto j = nlohmann::json::parse(json_run.output);
  REQUIRE(j["pattern_set"] == "231;312");
  REQUIRE(j["n"] == 4);
  REQUIRE(j["d"] == 3);
  REQUIRE(j["count"] == 28);

  SECTION("naive route agrees inside its budget and refuses beyond it") {
    const auto naive = run_cli("count --n 4 --avoid \"231;312\" --naive");
    REQUIRE(naive.exit_code == 0);
    REQUIRE(naive.output == "28\n");
    const auto refused = run_cli("count --n 7 --avoid 123 --naive");
    REQUIRE(refused.exit_code == 3);
    REQUIRE(contains(refused.output, "safety bound"));
    const auto tight = run_cli("count --n 3 --avoid 123 --naive --naive-bound 35");
    REQUIRE(tight.exit_code == 3);
  }

  SECTION("dimension 2") {
    const auto catalan = run_cli("count --n 5 --dim 2 --avoid 132");
    REQUIRE(catalan.exit_code == 0);
    REQUIRE(catalan.output == "42\n");
  }
}

TEST_CASE("sequence") {
  const auto r = run_cli("sequence --n-max 5 --avoid \"123;(12,12)\"");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.output == "1,3,14,70,288\n");

  const auto csv = run_cli("sequence --n-max 3 --avoid \"132;213\" --format csv");
  REQUIRE(csv.exit_code == 0);
  REQUIRE(csv.output == "n,count\n1,1\n2,4\n3,12\n");

  const auto json_run = run_cli("sequence --n-max 4 --avoid \"132;213\" --format json");
  REQUIRE(json_run.exit_code == 0);
  const auto j = nlohmann::json::parse(json_run.output);
  REQUIRE(j["pattern_set"] == "132;213");
  REQUIRE(j["terms"] == nlohmann::json::array({1, 4, 12, 28}));

  SECTION("worker count does not change the bytes") {
    const std::string base = "sequence --n-max 5 --avoid \"231;321\" --workers ";
    const auto one = run_cli(base + "1");
    const auto two = run_cli(base + "2");
    REQUIRE(one.exit_code == 0);
    REQUIRE(one.output == "1,4,12,36,108\n");
    REQUIRE(one.output == two.output);
  }
}

TEST_CASE("enumerate") {
  const auto r = run_cli("enumerate --n 2 --avoid 21");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.output == "(12,12)\n");

  const auto empty = run_cli("enumerate --n 4 --avoid \"123;321\"");
  REQUIRE(empty.exit_code == 0);
  REQUIRE(empty.output.empty());

  const auto json_run = run_cli("enumerate --n 2 --avoid \"(12,12)\" --format json");
  REQUIRE(json_run.exit_code == 0);
  const auto j = nlohmann::json::parse(json_run.output);
  REQUIRE(j["count"] == 3);
  REQUIRE(j["avoiders"] ==
          nlohmann::json::array({"(12,21)", "(21,12)", "(21,21)"}));
}

TEST_CASE("orbit") {
  const auto fixed = run_cli("orbit --avoid \"132;213\"");
  REQUIRE(fixed.exit_code == 0);
  REQUIRE(contains(fixed.output, "orbit size: 1"));

  const auto pair = run_cli("orbit --avoid 132");
  REQUIRE(pair.exit_code == 0);
  REQUIRE(contains(pair.output, "pattern set: 132"));
  REQUIRE(contains(pair.output, "orbit size: 2"));
  REQUIRE(contains(pair.output, "213  witness"));

  const auto json_run = run_cli("orbit --avoid 132 --format json");
  REQUIRE(json_run.exit_code == 0);
  const auto j = nlohmann::json::parse(json_run.output);
  REQUIRE(j["orbit_size"] == 2);
  REQUIRE(j["members"].size() == 2);
  REQUIRE(j["members"][0]["pattern_set"] == "132");
  REQUIRE(j["members"][1]["pattern_set"] == "213");
}

TEST_CASE("verify-recurrence") {
  const auto pass = run_cli("verify-recurrence --theorem \"132;231\" --n-max 5");
  REQUIRE(pass.exit_code == 0);
  REQUIRE(contains(pass.output, "verdict: pass"));
  REQUIRE(contains(pass.output, "5 80 80"));

  const auto unknown = run_cli("verify-recurrence --theorem 123");
  REQUIRE(unknown.exit_code == 2);
  REQUIRE(contains(unknown.output, "no registered recurrence"));
  REQUIRE(contains(unknown.output, "132;213"));
}

TEST_CASE("verify-table") {
  const auto r = run_cli("verify-table --table 2 --n-max 4 --oeis-cache-dir " +
                         oeis_dir());
  REQUIRE(r.exit_code == 0);
  REQUIRE(contains(r.output, "verdict: pass"));
  REQUIRE(contains(r.output, "132;213;321"));
  REQUIRE(contains(r.output, "oeis: match"));

  const auto bad = run_cli("verify-table --table 9");
  REQUIRE(bad.exit_code == 2);
}

TEST_CASE("compare-oeis") {
  const std::string cache = " --oeis-cache-dir " + oeis_dir();

  SECTION("registry-aligned proven link") {
    const auto r = run_cli("compare-oeis --avoid \"132;231\" --id A001787" + cache);
    REQUIRE(r.exit_code == 0);
    REQUIRE(contains(r.output, "A001787 vs 132;231: match (n = 1..7)"));
  }

  SECTION("conjectured link reports consistency, not proof") {
    const auto r = run_cli(
        "compare-oeis --avoid \"(12,12);(231,312)\" --id A295928 --n-max 5" + cache);
    REQUIRE(r.exit_code == 0);
    REQUIRE(contains(r.output, "consistent so far"));
    REQUIRE(contains(r.output, "conjectured link"));
  }

  SECTION("wrong pairing mismatches with exit 1") {
    const auto r = run_cli(
        "compare-oeis --avoid \"231;321\" --id A000290 --offset 1 --n-max 4" + cache);
    REQUIRE(r.exit_code == 1);
    REQUIRE(contains(r.output, "mismatch"));
    REQUIRE(contains(r.output, "n = 3: computed 12, b-file 9"));
  }

  SECTION("unknown pairing without --offset is a usage error") {
    const auto r = run_cli("compare-oeis --avoid 132 --id A001787" + cache);
    REQUIRE(r.exit_code == 2);
    REQUIRE(contains(r.output, "--offset"));
  }

  SECTION("missing fixture without network is a usage error") {
    const auto r =
        run_cli("compare-oeis --avoid 132 --id A999999 --offset 1 --n-max 3" + cache);
    REQUIRE(r.exit_code == 2);
    REQUIRE(contains(r.output, "no cached b-file"));
  }

  SECTION("explicit b-file path") {
    const auto r = run_cli("compare-oeis --avoid \"132;213\" --id A356728 --bfile " +
                           oeis_dir() + "/b356728.txt");
    REQUIRE(r.exit_code == 0);
    REQUIRE(contains(r.output, "match"));
  }
}

TEST_CASE("usage errors") {
  REQUIRE(run_cli("").exit_code == 2);
  REQUIRE(run_cli("frobnicate").exit_code == 2);
  REQUIRE(run_cli("count --avoid 123").exit_code == 2);      // missing --n
  REQUIRE(run_cli("count --n 3").exit_code == 2);            // missing --avoid
  REQUIRE(run_cli("count --n -2 --avoid 123").exit_code == 2);
  REQUIRE(run_cli("--help").exit_code == 0);
  REQUIRE(run_cli("count --help").exit_code == 0);

  SECTION("pattern parse errors point at the offending byte") {
    const auto r = run_cli("count --n 3 --avoid 13x2");
    REQUIRE(r.exit_code == 2);
    REQUIRE(contains(r.output, "invalid character"));
    REQUIRE(contains(r.output, "^"));
  }
}
