// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include <json.hpp>

#include "process.hpp"
#include "support.hpp"
#include "t2n/cli.hpp"

using namespace t2n;
using namespace t2n::test;
using json = nlohmann::json;

namespace {

std::string scenario_path(const std::string& name) { return fixture_dir() + "/scenarios/" + name + ".txt"; }

std::string backend_flags(const std::string& backend) {
  return backend == "replay" ? "--adapter replay --fixtures " + fixture_dir() + "/replay" : "--adapter rules";
}

CliConfig batch_config(const std::string& name) {
  CliConfig c;
  c.scenario_file = scenario_path(name);
  return c;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "t2n_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("exit code table for both offline backends") {
  const auto table = json::parse(fixture("exit_codes.json"));
  for (const auto& [backend, cases] : table.items()) {
    for (const auto& [name, code] : cases.items()) {
      CAPTURE(backend);
      CAPTURE(name);
      const auto r = run_cli(backend_flags(backend) + " batch --scenario " + scenario_path(name) + " 2>/dev/null");
      CHECK(r.exit_code == code.get<int>());
    }
  }
}

TEST_CASE("error exit codes by class") {
  CHECK(exit_code_for("IP_OCTET_RANGE") == kExitInvalid);
  CHECK(exit_code_for("REJECTED") == kExitInvalid);
  CHECK(exit_code_for("EMPTY_SCENARIO") == kExitInvalid);
  CHECK(exit_code_for("FixtureMiss") == kExitBackend);
  CHECK(exit_code_for("BackendUnreachable") == kExitBackend);
  CHECK(exit_code_for("PlanAborted") == kExitBackend);
  CHECK(exit_code_for("AuthFailure") == kExitBackend);
}

TEST_CASE("batch output is byte-identical across runs and backends") {
  for (const std::string name : {"story_a", "story_b", "eval_s1", "eval_s2", "eval_s3"}) {
    CAPTURE(name);
    const auto rules = run_cli("batch --scenario " + scenario_path(name) + " 2>/dev/null");
    const auto again = run_cli("batch --scenario " + scenario_path(name) + " 2>/dev/null");
    const auto replay = run_cli(backend_flags("replay") + " batch --scenario " + scenario_path(name) + " 2>/dev/null");
    CHECK(rules.exit_code == 0);
    CHECK(rules.out == again.out);
    // The eval_s2 recording names next hops by address, which the document keeps as written.
    if (name != "eval_s2") CHECK(rules.out == replay.out);
  }
  CHECK(run_cli("batch --scenario " + scenario_path("story_a") + " 2>/dev/null").out ==
        run_cli("batch --scenario " + scenario_path("story_b") + " 2>/dev/null").out);
}

TEST_CASE("batch writes the topology file and the query summary") {
  const auto out = scratch("eval_s1.json");
  std::filesystem::remove(out);
  const auto r = run_cli("batch --scenario " + scenario_path("eval_s1") + " --out " + out.string() + " --expect " +
                         fixture_dir() + "/expect/eval_s1.expect 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(read_file(out.string()) == serialize_canonical(topology_of(rules_scs(scenario("eval_s1")))));
  const auto summary = json::parse(r.out);
  CHECK(summary["step_count"] == 2);
  REQUIRE(summary["queries"].size() == 1);
  CHECK(summary["queries"][0]["met"] == true);
}

TEST_CASE("expectations decide the exit code") {
  for (const std::string name : {"eval_s1", "eval_s2", "eval_s3", "story_a"}) {
    CAPTURE(name);
    CliConfig c = batch_config(name);
    c.expect_file = fixture_dir() + "/expect/" + name + ".expect";
    std::ostringstream out, err;
    CHECK(run_batch(c, out, err) == kExitOk);
    CHECK(err.str().find("FAIL") == std::string::npos);
  }
  CliConfig c = batch_config("eval_s2");
  c.expect_file = fixture_dir() + "/expect/eval_s2_unreachable.expect";
  std::ostringstream out, err;
  CHECK(run_batch(c, out, err) == kExitInvalid);
  CHECK(err.str().find("FAIL ping R1 10.9.9.9") != std::string::npos);

  const auto bad = scratch("bad.expect");
  std::ofstream(bad) << "expect ping R1 192.168.2.1 maybe\n";
  c.expect_file = bad.string();
  CHECK(run_batch(c, out, err) == kExitInvalid);
}

TEST_CASE("clarification in batch mode") {
  CliConfig c = batch_config("story_vague");
  std::ostringstream out, err;
  CHECK(run_batch(c, out, err) == kExitClarify);
  const auto j = json::parse(out.str());
  const auto frozen = json::parse(fixture("clarification_prompts.json"));
  CHECK(j["prompt"] == frozen["ROUTE_DETAILS_MISSING"]);
  REQUIRE(j["missing_fields"].size() == 1);
  CHECK(j["missing_fields"][0]["subject"] == "static_routes");
  CHECK(j["missing_fields"][0]["field"] == "source,destination,via");

  c.replies = {scenario("story_vague_reply")};
  std::ostringstream out2, err2;
  CHECK(run_batch(c, out2, err2) == kExitOk);
  CHECK(out2.str() == serialize_canonical(three_router_lab()));

  const auto r = run_cli("batch --scenario " + scenario_path("story_vague") + " --reply \"$(cat " +
                         scenario_path("story_vague_reply") + ")\" 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(r.out == serialize_canonical(three_router_lab()));
}

TEST_CASE("invalid input reports the finding") {
  std::ostringstream out, err;
  CHECK(run_batch(batch_config("invalid_ip"), out, err) == kExitInvalid);
  CHECK(json::parse(out.str())["code"] == "IP_OCTET_RANGE");
  CliConfig missing;
  CHECK(run_batch(missing, out, err) == kExitInvalid);
  missing.scenario_file = "/nonexistent/scenario.txt";
  CHECK(run_batch(missing, out, err) == kExitInvalid);
}

TEST_CASE("configuration errors are backend errors") {
  CHECK(run_cli("--adapter http batch --scenario " + scenario_path("eval_s1") + " 2>/dev/null").exit_code ==
        kExitBackend);
  CHECK(run_cli("--adapter replay batch --scenario " + scenario_path("eval_s1") + " 2>/dev/null").exit_code ==
        kExitBackend);
  CHECK(run_cli("--backend eve batch --scenario " + scenario_path("eval_s1") + " 2>/dev/null").exit_code ==
        kExitBackend);
}

TEST_CASE("REPL session") {
  std::istringstream in(scenario("story_vague") + "\n" + scenario("story_vague_reply") +
                        "\nping R-1 192.168.100.2\nshow config R-3\nquit\n");
  std::ostringstream out;
  CliConfig c;
  std::string text_in = in.str();
  // One scenario per line in the REPL.
  std::replace(text_in.begin(), text_in.begin() + static_cast<std::ptrdiff_t>(scenario("story_vague").size()), '\n', ' ');
  std::istringstream flat(text_in);
  CHECK(run_repl(c, flat, out) == kExitOk);
  const auto text = out.str();
  CHECK(text.starts_with(fixture("welcome_banner.txt")));
  CHECK(text.find("reply> ") != std::string::npos);
  CHECK(text.find("Understood. Provisioned 3 devices and 2 links in the simulator.") != std::string::npos);
  CHECK(text.find("success, path R-1 -> R-2 -> R-3") != std::string::npos);
  CHECK(text.find("hostname R-3") != std::string::npos);
}

TEST_CASE("REPL binary prints the banner and quits cleanly") {
  const auto quit = scratch("quit.txt");
  std::ofstream(quit) << "quit\n";
  const auto r = run_cli("repl < " + quit.string() + " 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(r.out.starts_with(fixture("welcome_banner.txt")));
  const auto eof = run_cli("< /dev/null 2>/dev/null");
  CHECK(eof.exit_code == 0);
}
