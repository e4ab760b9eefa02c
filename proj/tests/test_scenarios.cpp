#include <catch2/catch_amalgamated.hpp>

#include <nctorus/scenarios.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace nct;

namespace {

ScenarioReport run(const std::string& name, std::uint64_t seed = 1) {
  ScenarioConfig cfg;
  cfg.scenario = name;
  cfg.seed = seed;
  return run_scenario(cfg);
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(NCT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::filesystem::path tmp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("registry lists fourteen uniquely named scenarios") {
  auto& reg = scenario_registry();
  REQUIRE(reg.size() == 14);
  std::set<std::string> names;
  for (auto& s : reg) {
    REQUIRE_FALSE(s.name.empty());
    REQUIRE_FALSE(s.description.empty());
    REQUIRE_FALSE(s.anchor.empty());
    names.insert(s.name);
  }
  REQUIRE(names.size() == reg.size());
}

TEST_CASE("unknown scenario names are rejected with the catalog") {
  ScenarioConfig cfg;
  cfg.scenario = "no-such-scenario";
  REQUIRE_THROWS_AS(run_scenario(cfg), Error);
}

TEST_CASE("identical configuration gives identical report bytes") {
  ScenarioReport a = run("gb-failure-order4", 5);
  ScenarioReport b = run("gb-failure-order4", 5);
  REQUIRE(canonical_bytes(a) == canonical_bytes(b));
  ScenarioReport c = run("gb-failure-order4", 6);
  REQUIRE(canonical_bytes(a) != canonical_bytes(c));  // corpus is seeded
}

TEST_CASE("report json carries the documented schema fields") {
  ScenarioReport r = run("series-telescoping");
  json j = to_json(r, true);
  REQUIRE(j.at("schema_version").get<std::string>() == report_schema_version);
  REQUIRE(j.at("scenario").get<std::string>() == "series-telescoping");
  REQUIRE(j.contains("description"));
  REQUIRE(j.contains("paper_anchor"));
  REQUIRE(j.at("config").contains("theta"));
  REQUIRE(j.at("config").contains("seed"));
  REQUIRE(j.contains("sign_conventions"));
  REQUIRE(j.at("all_pass").get<bool>());
  REQUIRE(j.at("checks").size() == r.checks.size());
  for (auto& c : j.at("checks")) {
    REQUIRE(c.contains("name"));
    REQUIRE(c.contains("value"));
    REQUIRE(c.contains("uncertainty"));
    REQUIRE(c.contains("tolerance"));
    REQUIRE(c.contains("pass"));
    REQUIRE(c.contains("paper_ref"));
  }
  REQUIRE(j.contains("timing"));
  // canonical bytes exclude the only nondeterministic block
  json canon = json::parse(canonical_bytes(r));
  REQUIRE_FALSE(canon.contains("timing"));
}

TEST_CASE("csv flattening has one row per check") {
  ScenarioReport r = run("series-telescoping");
  std::istringstream rows(csv_rows(r));
  std::string line;
  std::getline(rows, line);
  REQUIRE(line ==
          "scenario,check,value_re,value_im,uncertainty,tolerance,pass,paper_ref");
  std::size_t count = 0;
  while (std::getline(rows, line))
    if (!line.empty()) ++count;
  REQUIRE(count == r.checks.size());
}

TEST_CASE("cli exit codes: pass, unknown scenario, bad flag") {
  REQUIRE(run_cli("run series-telescoping") == 0);
  REQUIRE(run_cli("run no-such-scenario") == 2);
  REQUIRE(run_cli("run") != 0);           // missing scenario name
  REQUIRE(run_cli("run series-telescoping --scale bogus") != 0);
}

TEST_CASE("cli list --json matches the registry") {
  auto path = tmp_file("nct_list.json");
  std::string cmd = std::string(NCT_CLI_PATH) + " list --json > " +
                    path.string() + " 2>/dev/null";
  REQUIRE(std::system(cmd.c_str()) == 0);
  std::ifstream in(path);
  json j = json::parse(in);
  REQUIRE(j.size() == scenario_registry().size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    REQUIRE(j[i].at("name").get<std::string>() == scenario_registry()[i].name);
    REQUIRE(j[i].contains("paper_anchor"));
  }
  std::filesystem::remove(path);
}

TEST_CASE("cli report and csv outputs round trip") {
  auto jpath = tmp_file("nct_report.json");
  auto cpath = tmp_file("nct_report.csv");
  REQUIRE(run_cli("run powers-rieffel-obstruction --out " + jpath.string() +
                  " --csv " + cpath.string()) == 0);
  std::ifstream in(jpath);
  json j = json::parse(in);
  REQUIRE(j.at("scenario").get<std::string>() == "powers-rieffel-obstruction");
  REQUIRE(j.at("all_pass").get<bool>());
  std::ifstream cin_(cpath);
  std::string header;
  std::getline(cin_, header);
  REQUIRE(header.rfind("scenario,check,", 0) == 0);
  std::filesystem::remove(jpath);
  std::filesystem::remove(cpath);
}

TEST_CASE("cli seeded runs are byte-identical modulo timing") {
  auto p1 = tmp_file("nct_det1.json"), p2 = tmp_file("nct_det2.json");
  REQUIRE(run_cli("run gb-failure-order4 --seed 9 --out " + p1.string()) == 0);
  REQUIRE(run_cli("run gb-failure-order4 --seed 9 --out " + p2.string()) == 0);
  std::ifstream i1(p1), i2(p2);
  json j1 = json::parse(i1), j2 = json::parse(i2);
  j1.erase("timing");
  j2.erase("timing");
  REQUIRE(j1.dump() == j2.dump());
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("tolerance and theta overrides reach the checks") {
  ScenarioConfig cfg;
  cfg.scenario = "series-telescoping";
  cfg.tol = 1e-3;
  ScenarioReport r = run_scenario(cfg);
  REQUIRE(r.checks.back().tolerance == 1e-3);
  ScenarioConfig cfg2;
  cfg2.scenario = "gb-failure-order4";
  cfg2.theta = 3.0 / 7.0;  // rational angle: closed forms still hold
  ScenarioReport r2 = run_scenario(cfg2);
  REQUIRE(r2.all_pass());
}
