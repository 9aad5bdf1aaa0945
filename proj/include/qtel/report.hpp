#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

// Machine-readable experiment reports: JSON or CSV to a file, a plain table
// to stdout.  Reports are byte-identical across runs with the same seed and
// config except for the wall_clock field.

namespace qtel {

inline constexpr double kZLimit = 4.0;  // statistical pass threshold per check

struct BranchCount {
  std::string key;
  long long count = 0;
  double expected_probability = 0.0;  // exact, from enumeration
  double observed_fraction = 0.0;
  double z_score = 0.0;
  bool pass = true;
};

// One named comparison.  tolerance > 0 marks an exact check (|obs - exp| <=
// tolerance); tolerance == 0 marks a statistical check (|z| <= kZLimit).
struct ScalarCheck {
  std::string name;
  double observed = 0.0;
  double expected = 0.0;
  double z_score = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct ExperimentReport {
  std::string command;
  std::uint64_t seed = 0;
  long long trials = 0;
  std::string wall_clock;  // excluded from determinism comparisons
  std::vector<std::pair<std::string, std::string>> parameters;  // config echo
  std::vector<BranchCount> branches;
  std::vector<ScalarCheck> checks;
  double fidelity_min = 1.0;
  double fidelity_mean = 1.0;
  std::vector<std::pair<std::string, std::string>> notes;
  bool statistical_pass = true;
  bool exact_pass = true;
};

// 0 all pass, 2 statistical failure, 3 exact/residual failure (dominates).
int report_exit_code(const ExperimentReport& r);

std::string to_json(const ExperimentReport& r);
std::string to_csv(const ExperimentReport& r);
std::string to_table(const ExperimentReport& r);

// Writes by extension (.json or .csv); throws on anything else.
void write_report_file(const ExperimentReport& r, const std::string& path);

// Fills z-score and pass for a statistical check with known variance.
ScalarCheck statistical_check(std::string name, double observed, double expected,
                              double stddev);
ScalarCheck exact_check(std::string name, double observed, double expected,
                        double tolerance);

// Binomial branch comparison at the given trial count.
BranchCount branch_count(std::string key, long long count, long long trials,
                         double expected_probability);

// Recomputes statistical_pass / exact_pass from branches and checks.
void finalize_report(ExperimentReport& r);

// Current UTC time, ISO 8601, for the wall_clock field.
std::string wall_clock_now();

}  // namespace qtel
