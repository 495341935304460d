#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

using json = nlohmann::ordered_json;

namespace {

std::string data(const std::string& name) {
  return std::string(RECOMB_DATA_DIR) + "/" + name;
}

// Runs the tool with stdout+stderr captured; returns the exit code.
int run_cli(const std::string& args, std::string* output) {
  static int counter = 0;
  const std::string capture =
      "/tmp/recomb_cli_capture_" + std::to_string(counter++) + ".txt";
  const std::string cmd =
      std::string(RECOMB_CLI_PATH) + " " + args + " > " + capture + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(capture);
  std::ostringstream buf;
  buf << in.rdbuf();
  *output = buf.str();
  std::remove(capture.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

json machine(const std::string& args, int expect_code = 0) {
  std::string out;
  const int code = run_cli(args + " --format machine", &out);
  CAPTURE(out);
  REQUIRE(code == expect_code);
  return json::parse(out);
}

}  // namespace

TEST_CASE("help and parse errors") {
  std::string out;
  CHECK(run_cli("--help", &out) == 0);
  CHECK(out.find("atoms") != std::string::npos);
  CHECK(run_cli("nonsense", &out) == 2);
  CHECK(run_cli("qsd /no/such/file.json", &out) == 2);
  CHECK(run_cli("", &out) == 2);  // a subcommand is required
}

TEST_CASE("atoms report") {
  auto r = machine("atoms " + data("three_site.json"));
  CHECK(r["command"] == "atoms");
  CHECK(r["version"] == "0.1.0");
  CHECK(r["input_digest"].get<std::string>().size() == 16);
  CHECK(r["atoms"] == json::array({"[1]", "[2]", "[3]"}));
  CHECK(r["closure"] ==
        json::array({"[1]", "[1,2]", "[2]", "[2,3]", "[3]"}));
  CHECK(r["n_closure"] == 5);

  std::string human;
  CHECK(run_cli("atoms " + data("three_site.json"), &human) == 0);
  CHECK(human.find("[2,3]") != std::string::npos);
  CHECK(human.find("atoms   (3)") != std::string::npos);
}

TEST_CASE("coeffs report carries rows and kernels") {
  auto r = machine("coeffs " + data("three_site.json"));
  CHECK(r["rows"]["[1,2,3]"]["[1]"] == "1/4");  // zero entries stay absent
  CHECK(r["rows"]["[2,3]"]["[2,3]"] == "1/2");
  CHECK(r["kernels"]["[1,2,3]"]["split [1] | [2,3]"] == "1/2");
  CHECK(r["kernels"]["[2,3]"]["keep"] == "1/2");
  CHECK(r["kernels"]["[2,3]"]["split [2] | [3]"] == "1/2");
  CHECK(r["kernels"]["[1]"]["keep"] == "1");
}

TEST_CASE("evolve cross-checks the decomposition") {
  auto r = machine("evolve " + data("three_site.json") + " -n 2");
  CHECK(r["decomposition_matches"] == true);
  CHECK(r["total_weight"] == "1");
  CHECK(r["weights"]["[[1],[2],[3]]"] == "1/2");
  CHECK(r["weights"]["[[1],[2,3]]"] == "1/4");
  CHECK(r["weights"]["[[1,2],[3]]"] == "1/4");
  CHECK(r["iterated"]["table"].size() == 8);
  // mass check on the emitted table
  CHECK(r["iterated"]["dims"] == json::array({2, 2, 2}));

  std::string out;
  CHECK(run_cli("evolve " + data("crossover_pairs.json"), &out) == 2);
  CHECK(out.find("mu") != std::string::npos);  // needs a measure
}

TEST_CASE("chain report") {
  auto r = machine("chain " + data("three_site.json") + " --horizon 4");
  CHECK(r["n_states"] == 4);
  CHECK(r["absorbing"] == 3);
  CHECK(r["dag_depth"] == 2);
  CHECK(r["states"][0] == "[[1,2,3]]");
  CHECK(r["survival"] == json::array({"1", "1", "1/2", "1/4", "1/8"}));
  CHECK(r["rows"][0] == json::array({json::array({1, "1/2"}),
                                     json::array({2, "1/2"})}));

  std::string out;
  CHECK(run_cli("chain " + data("three_site.json") + " --max-states 2", &out) ==
        3);
  CHECK(out.find("resource guard") != std::string::npos);
}

TEST_CASE("qsd report matches the worked three-site answers") {
  auto r = machine("qsd " + data("three_site.json"));
  CHECK(r["eta"] == "1/2");
  CHECK(r["beta0"] == "0");
  CHECK(r["limit_constant"] == "2");
  CHECK(r["limit_constant_decimal"] == "2.000000000000");
  CHECK(r["e_states"].size() == 2);
  CHECK(r["e_states"][0]["quasi_limit"] == "1/2");
  CHECK(r["e_states"][1]["quasi_limit"] == "1/2");
  CHECK(r["checks"]["harmonic_scaling"] == true);
  CHECK(r["checks"]["geometric_limit"] == true);
  CHECK(r["admissible_levels"]["1/2"] ==
        json::array({"[1,2]", "[2,3]"}));
  // scaled survival is exactly the limit from the depth on
  CHECK(r["geometric"]["scaled"][5] == "2");
}

TEST_CASE("identity input is rejected as not applicable") {
  std::string out;
  CHECK(run_cli("qsd " + data("identity.json"), &out) == 2);
  CHECK(out.find("identity transformation") != std::string::npos);
  CHECK(out.find("not applicable") != std::string::npos);
  // other commands still work on it
  auto r = machine("atoms " + data("identity.json"));
  CHECK(r["atoms"] == json::array({"[1,2]"}));
}

TEST_CASE("malformed distributions are rejected") {
  std::string out;
  CHECK(run_cli("atoms " + data("bad_rho.json"), &out) == 2);
  CHECK(out.find("invalid input") != std::string::npos);
}

TEST_CASE("simulate is deterministic and mode-independent") {
  const std::string args = "simulate " + data("three_site.json") +
                           " --trajectories 200 --seed 7 --horizon 6";
  auto r = machine(args);
  CHECK(r["survival_counts"][0] == 200);
  CHECK(r["mode"] == "exact");
  std::int64_t absorbed = 0;
  for (const auto& [t, c] : r["absorption_times"].items())
    absorbed += c.get<std::int64_t>();
  CHECK(absorbed + r["beyond_horizon"].get<std::int64_t>() == 200);

  auto again = machine(args);
  CHECK(r == again);  // byte-level determinism, seen through the parse
  auto kernel = machine(args + " --mode kernel --threads 3");
  CHECK(kernel["survival_counts"] == r["survival_counts"]);
  CHECK(kernel["occupancy_counts"] == r["occupancy_counts"]);
}

TEST_CASE("reports can be written to a file") {
  const std::string out_path = "/tmp/recomb_cli_report.json";
  std::string console;
  CHECK(run_cli("qsd " + data("three_site.json") + " --format machine --out " +
                    out_path,
                &console) == 0);
  CHECK(console.empty());
  std::ifstream in(out_path);
  REQUIRE(in.good());
  auto r = json::parse(in);
  CHECK(r["eta"] == "1/2");
  std::remove(out_path.c_str());
}
