// Command-line runner for the verification scenarios.

#include <nctorus/scenarios.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"nctorus: noncommutative-torus curvature verification"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list available scenarios");
  bool list_json = false;
  list->add_flag("--json", list_json, "machine-readable catalog");

  auto* run = app.add_subcommand("run", "run one scenario");
  std::string scenario, scale = "unit", out_path, csv_path;
  double theta = 0.6180339887498949, tol = 0;
  int box = 0;
  std::uint64_t seed = 1;
  run->add_option("scenario", scenario, "scenario name")->required();
  run->add_option("--theta", theta, "twist angle (base value for n=4)");
  run->add_option("--scale", scale, "derivation scale: unit|2pi")
      ->check(CLI::IsMember({"unit", "2pi"}));
  run->add_option("--box", box, "box radius override");
  run->add_option("--tol", tol, "tolerance override");
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--out", out_path, "write JSON report to this path");
  run->add_option("--csv", csv_path, "write flattened check rows as CSV");

  CLI11_PARSE(app, argc, argv);

  if (*list) {
    if (list_json) {
      nct::json j = nct::json::array();
      for (auto& s : nct::scenario_registry())
        j.push_back({{"name", s.name},
                     {"description", s.description},
                     {"paper_anchor", s.anchor}});
      std::cout << j.dump(2) << "\n";
    } else {
      for (auto& s : nct::scenario_registry())
        std::printf("%-30s %s\n  [%s]\n", s.name.c_str(),
                    s.description.c_str(), s.anchor.c_str());
    }
    return 0;
  }

  nct::ScenarioConfig cfg;
  cfg.scenario = scenario;
  cfg.theta = theta;
  cfg.ds = scale == "2pi" ? nct::DerivationScale::two_pi
                          : nct::DerivationScale::unit;
  cfg.box_radius = box;
  cfg.tol = tol;
  cfg.seed = seed;
  cfg.out_path = out_path;

  nct::ScenarioReport rep;
  try {
    rep = nct::run_scenario(cfg);
  } catch (const nct::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::printf("%s  [%s]\n", rep.scenario.c_str(), rep.paper_anchor.c_str());
  for (auto& c : rep.checks) {
    std::printf("  %s  %-60s  |value| = %.3e  (tol %.1e + unc %.1e)  [%s]%s%s\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(), std::abs(c.value),
                c.tolerance, c.uncertainty, c.paper_ref.c_str(),
                c.note.empty() ? "" : "  -- ", c.note.c_str());
  }
  std::printf("%s: %zu checks, %s, %.2f s\n", rep.scenario.c_str(),
              rep.checks.size(), rep.all_pass() ? "all passed" : "FAILURES",
              rep.wall_seconds);

  if (!out_path.empty()) nct::write_report(rep, out_path);
  if (!csv_path.empty()) {
    std::ofstream f(csv_path);
    f << nct::csv_rows(rep);
  }
  return rep.all_pass() ? 0 : 1;
}
