#include "qtel/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qtel {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void csv_row(std::ostringstream& os, const std::string& section, const std::string& name,
             const std::string& field, const std::string& value) {
  os << csv_escape(section) << ',' << csv_escape(name) << ',' << csv_escape(field) << ','
     << csv_escape(value) << '\n';
}

}  // namespace

int report_exit_code(const ExperimentReport& r) {
  if (!r.exact_pass) return 3;
  if (!r.statistical_pass) return 2;
  return 0;
}

ScalarCheck statistical_check(std::string name, double observed, double expected,
                              double stddev) {
  ScalarCheck c;
  c.name = std::move(name);
  c.observed = observed;
  c.expected = expected;
  c.tolerance = 0.0;
  c.z_score = stddev > 0.0 ? (observed - expected) / stddev
                           : (observed == expected ? 0.0 : 1e300);
  c.pass = std::abs(c.z_score) <= kZLimit;
  return c;
}

ScalarCheck exact_check(std::string name, double observed, double expected,
                        double tolerance) {
  ScalarCheck c;
  c.name = std::move(name);
  c.observed = observed;
  c.expected = expected;
  c.tolerance = tolerance;
  c.pass = std::abs(observed - expected) <= tolerance;
  return c;
}

BranchCount branch_count(std::string key, long long count, long long trials,
                         double expected_probability) {
  BranchCount b;
  b.key = std::move(key);
  b.count = count;
  b.expected_probability = expected_probability;
  b.observed_fraction = trials > 0 ? static_cast<double>(count) / trials : 0.0;
  const double var = expected_probability * (1.0 - expected_probability);
  const double sd = trials > 0 ? std::sqrt(var / trials) : 0.0;
  b.z_score = sd > 0.0 ? (b.observed_fraction - expected_probability) / sd
                       : (b.observed_fraction == expected_probability ? 0.0 : 1e300);
  b.pass = std::abs(b.z_score) <= kZLimit;
  return b;
}

void finalize_report(ExperimentReport& r) {
  r.statistical_pass = true;
  r.exact_pass = true;
  for (const auto& b : r.branches)
    if (!b.pass) r.statistical_pass = false;
  for (const auto& c : r.checks) {
    if (c.pass) continue;
    if (c.tolerance > 0.0)
      r.exact_pass = false;
    else
      r.statistical_pass = false;
  }
}

std::string to_json(const ExperimentReport& r) {
  ordered_json j;
  j["command"] = r.command;
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["wall_clock"] = r.wall_clock;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : r.parameters) params[k] = v;
  j["parameters"] = params;
  ordered_json branches = ordered_json::array();
  for (const auto& b : r.branches) {
    ordered_json e;
    e["key"] = b.key;
    e["count"] = b.count;
    e["expected_probability"] = b.expected_probability;
    e["observed_fraction"] = b.observed_fraction;
    e["z_score"] = b.z_score;
    e["pass"] = b.pass;
    branches.push_back(e);
  }
  j["branches"] = branches;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["observed"] = c.observed;
    e["expected"] = c.expected;
    if (c.tolerance > 0.0)
      e["tolerance"] = c.tolerance;
    else
      e["z_score"] = c.z_score;
    e["pass"] = c.pass;
    checks.push_back(e);
  }
  j["checks"] = checks;
  j["fidelity_min"] = r.fidelity_min;
  j["fidelity_mean"] = r.fidelity_mean;
  ordered_json notes = ordered_json::object();
  for (const auto& [k, v] : r.notes) notes[k] = v;
  j["notes"] = notes;
  j["statistical_pass"] = r.statistical_pass;
  j["exact_pass"] = r.exact_pass;
  j["exit_code"] = report_exit_code(r);
  return j.dump(2) + "\n";
}

std::string to_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "section,name,field,value\n";
  csv_row(os, "meta", "", "command", r.command);
  csv_row(os, "meta", "", "seed", std::to_string(r.seed));
  csv_row(os, "meta", "", "trials", std::to_string(r.trials));
  csv_row(os, "meta", "", "wall_clock", r.wall_clock);
  for (const auto& [k, v] : r.parameters) csv_row(os, "parameter", k, "value", v);
  for (const auto& b : r.branches) {
    csv_row(os, "branch", b.key, "count", std::to_string(b.count));
    csv_row(os, "branch", b.key, "expected_probability", fmt(b.expected_probability));
    csv_row(os, "branch", b.key, "observed_fraction", fmt(b.observed_fraction));
    csv_row(os, "branch", b.key, "z_score", fmt(b.z_score));
    csv_row(os, "branch", b.key, "pass", b.pass ? "true" : "false");
  }
  for (const auto& c : r.checks) {
    csv_row(os, "check", c.name, "observed", fmt(c.observed));
    csv_row(os, "check", c.name, "expected", fmt(c.expected));
    if (c.tolerance > 0.0)
      csv_row(os, "check", c.name, "tolerance", fmt(c.tolerance));
    else
      csv_row(os, "check", c.name, "z_score", fmt(c.z_score));
    csv_row(os, "check", c.name, "pass", c.pass ? "true" : "false");
  }
  csv_row(os, "summary", "", "fidelity_min", fmt(r.fidelity_min));
  csv_row(os, "summary", "", "fidelity_mean", fmt(r.fidelity_mean));
  for (const auto& [k, v] : r.notes) csv_row(os, "note", k, "value", v);
  csv_row(os, "summary", "", "statistical_pass", r.statistical_pass ? "true" : "false");
  csv_row(os, "summary", "", "exact_pass", r.exact_pass ? "true" : "false");
  csv_row(os, "summary", "", "exit_code", std::to_string(report_exit_code(r)));
  return os.str();
}

std::string to_table(const ExperimentReport& r) {
  std::ostringstream os;
  char line[256];
  os << "== " << r.command << " ==  seed " << r.seed << "  trials " << r.trials << "  ("
     << r.wall_clock << ")\n";
  if (!r.parameters.empty()) {
    os << "config:";
    for (const auto& [k, v] : r.parameters) os << ' ' << k << '=' << v;
    os << '\n';
  }
  if (!r.branches.empty()) {
    std::snprintf(line, sizeof(line), "  %-14s %10s %12s %12s %8s  %s\n", "branch", "count",
                  "observed", "exact", "z", "ok");
    os << line;
    for (const auto& b : r.branches) {
      std::snprintf(line, sizeof(line), "  %-14s %10lld %12.6f %12.6f %8.2f  %s\n",
                    b.key.c_str(), b.count, b.observed_fraction, b.expected_probability,
                    b.z_score, b.pass ? "PASS" : "FAIL");
      os << line;
    }
  }
  for (const auto& c : r.checks) {
    if (c.tolerance > 0.0)
      std::snprintf(line, sizeof(line), "  %-28s observed %.12g expected %.12g (tol %.1e)  %s\n",
                    c.name.c_str(), c.observed, c.expected, c.tolerance,
                    c.pass ? "PASS" : "FAIL");
    else
      std::snprintf(line, sizeof(line), "  %-28s observed %.12g expected %.12g (z %+.2f)  %s\n",
                    c.name.c_str(), c.observed, c.expected, c.z_score,
                    c.pass ? "PASS" : "FAIL");
    os << line;
  }
  std::snprintf(line, sizeof(line), "  fidelity min %.12f mean %.12f\n", r.fidelity_min,
                r.fidelity_mean);
  os << line;
  for (const auto& [k, v] : r.notes) os << "  note " << k << ": " << v << '\n';
  os << "  overall: " << (report_exit_code(r) == 0 ? "PASS" : "FAIL") << " (exit "
     << report_exit_code(r) << ")\n";
  return os.str();
}

void write_report_file(const ExperimentReport& r, const std::string& path) {
  const auto dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : path.substr(dot);
  std::string payload;
  if (ext == ".json")
    payload = to_json(r);
  else if (ext == ".csv")
    payload = to_csv(r);
  else
    throw std::invalid_argument("write_report_file: unsupported extension '" + ext +
                                "' (use .json or .csv)");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_report_file: cannot open " + path);
  out << payload;
}

std::string wall_clock_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace qtel
