#pragma once

// Scenario configuration and machine-readable verification reports.
// Schema documented in docs/report-schema.md; version bumps on any field
// change.  Canonical bytes (used for determinism comparisons) exclude the
// "timing" object, which is the only nondeterministic part of a report.

#include <nctorus/core.hpp>
#include <nctorus/serialize.hpp>

#include <chrono>
#include <fstream>
#include <string>
#include <vector>

namespace nct {

inline constexpr const char* report_schema_version = "1";

struct ScenarioConfig {
  std::string scenario;
  double theta = 0.6180339887498949;  // (sqrt(5)-1)/2
  DerivationScale ds = DerivationScale::unit;
  int box_radius = 0;      // 0 = scenario default
  double tol = 0;          // 0 = per-check defaults
  std::uint64_t seed = 1;
  std::string out_path;
};

struct CheckRecord {
  std::string name;
  cplx value = 0;
  double uncertainty = 0;
  double tolerance = 0;
  bool pass = false;
  std::string paper_ref;
  std::string note;
};

struct ScenarioReport {
  std::string scenario;
  std::string description;
  std::string paper_anchor;
  ScenarioConfig config;
  std::vector<CheckRecord> checks;
  double wall_seconds = 0;
  std::string timestamp;

  bool all_pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  void add(CheckRecord c) { checks.push_back(std::move(c)); }
};

inline json to_json(const ScenarioConfig& cfg) {
  json j;
  j["scenario"] = cfg.scenario;
  j["theta"] = cfg.theta;
  j["derivation_scale"] = cfg.ds == DerivationScale::unit ? "unit" : "2pi";
  j["box_radius"] = cfg.box_radius;
  j["tol"] = cfg.tol;
  j["seed"] = cfg.seed;
  return j;
}

inline json to_json(const ScenarioReport& r, bool with_timing = true) {
  json j;
  j["schema_version"] = report_schema_version;
  j["scenario"] = r.scenario;
  j["description"] = r.description;
  j["paper_anchor"] = r.paper_anchor;
  j["config"] = to_json(r.config);
  j["sign_conventions"] = {
      {"cocycle", "U^a U^b = exp(2 pi i sum_{j>k} theta_jk a_j b_k) U^{a+b}"},
      {"derivation", r.config.ds == DerivationScale::unit
                         ? "d_j(U^k) = i k_j U^k"
                         : "d_j(U^k) = 2 pi i k_j U^k"},
      {"curvature", "R(X,Y) = nabla_Y nabla_X - nabla_X nabla_Y on [X,Y]=0"}};
  j["all_pass"] = r.all_pass();
  json cs = json::array();
  for (auto& c : r.checks) {
    json cj;
    cj["name"] = c.name;
    cj["value"] = {c.value.real(), c.value.imag()};
    cj["uncertainty"] = c.uncertainty;
    cj["tolerance"] = c.tolerance;
    cj["pass"] = c.pass;
    cj["paper_ref"] = c.paper_ref;
    if (!c.note.empty()) cj["note"] = c.note;
    cs.push_back(cj);
  }
  j["checks"] = cs;
  if (with_timing)
    j["timing"] = {{"timestamp", r.timestamp}, {"wall_seconds", r.wall_seconds}};
  return j;
}

inline std::string canonical_bytes(const ScenarioReport& r) {
  return to_json(r, false).dump(2) + "\n";
}

inline std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_report(const ScenarioReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output path: " + path);
  out << to_json(r, true).dump(2) << "\n";
}

inline std::string csv_rows(const ScenarioReport& r) {
  std::string s = "scenario,check,value_re,value_im,uncertainty,tolerance,pass,paper_ref\n";
  auto esc = [](std::string v) {
    for (auto& ch : v)
      if (ch == ',') ch = ';';
    return v;
  };
  for (auto& c : r.checks) {
    char row[256];
    std::snprintf(row, sizeof(row), "%s,%s,%.17g,%.17g,%.3g,%.3g,%d,%s\n",
                  esc(r.scenario).c_str(), esc(c.name).c_str(), c.value.real(),
                  c.value.imag(), c.uncertainty, c.tolerance, int(c.pass),
                  esc(c.paper_ref).c_str());
    s += row;
  }
  return s;
}

}  // namespace nct
