#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "oracles.hpp"
#include "qtel/experiments.hpp"

using namespace qtel;

namespace {

std::string drop_wall_clock(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.find("wall_clock") == std::string::npos) out << line << '\n';
  return out.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("reports are byte-identical for a fixed seed, modulo wall clock") {
  RotationConfig cfg;
  cfg.axis = Axis::Z;
  cfg.trials = 400;
  cfg.max_cycles = 5;
  cfg.seed = 7;
  ExperimentReport a = run_rotation_experiment(cfg);
  ExperimentReport b = run_rotation_experiment(cfg);
  CHECK(drop_wall_clock(to_json(a)) == drop_wall_clock(to_json(b)));
  CHECK(drop_wall_clock(to_csv(a)) == drop_wall_clock(to_csv(b)));

  cfg.seed = 8;
  ExperimentReport c = run_rotation_experiment(cfg);
  bool differs = std::abs(a.fidelity_mean - c.fidelity_mean) > 0;
  for (std::size_t i = 0; i < a.branches.size(); ++i)
    differs = differs || a.branches[i].count != c.branches[i].count;
  CHECK(differs);
}

TEST_CASE("exit codes: statistical failures give 2, exact failures dominate with 3") {
  ExperimentReport ok;
  ok.checks.push_back(exact_check("near", 1.0 + 1e-14, 1.0, 1e-10));
  ok.checks.push_back(statistical_check("close", 0.251, 0.25, 0.01));
  finalize_report(ok);
  CHECK(report_exit_code(ok) == 0);
  CHECK(to_json(ok).find("\"exit_code\": 0") != std::string::npos);

  ExperimentReport stat = ok;
  stat.checks.push_back(statistical_check("off", 10.0, 0.0, 1.0));
  finalize_report(stat);
  CHECK(report_exit_code(stat) == 2);
  CHECK_FALSE(stat.statistical_pass);
  CHECK(stat.exact_pass);

  ExperimentReport exact = stat;
  exact.checks.push_back(exact_check("way_off", 1.0, 0.0, 1e-10));
  finalize_report(exact);
  CHECK(report_exit_code(exact) == 3);

  ExperimentReport branch_fail;
  branch_fail.branches.push_back(branch_count("k", 900, 1000, 0.5));
  finalize_report(branch_fail);
  CHECK(report_exit_code(branch_fail) == 2);
}

TEST_CASE("compile report exposes angles, step count and residual") {
  CompileConfig cfg;
  cfg.target = hadamard();
  cfg.name = "H";
  ExperimentReport r = run_compile_report(cfg);
  CHECK(report_exit_code(r) == 0);
  bool saw_steps = false, saw_elided = false;
  for (const auto& [k, v] : r.parameters) {
    if (k == "step_count") {
      CHECK(v == "44");
      saw_steps = true;
    }
    if (k == "elided_factors") {
      CHECK(v == "1");
      saw_elided = true;
    }
  }
  CHECK(saw_steps);
  CHECK(saw_elided);
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].name == "residual");
  CHECK(r.checks[0].observed > 0.0);  // floating-point residual, tiny but nonzero

  // An unreachable tolerance flips the exact verdict.
  cfg.tolerance = 1e-300;
  ExperimentReport tight = run_compile_report(cfg);
  CHECK(report_exit_code(tight) == 3);

  // The identity compiles to an empty sequence with zero residual.
  CompileConfig ident;
  ident.target = Matrix::identity(2);
  ident.name = "I";
  ident.tolerance = 1e-15;
  ExperimentReport ri = run_compile_report(ident);
  CHECK(report_exit_code(ri) == 0);
  bool saw_note = false;
  for (const auto& [k, v] : ri.notes)
    if (k == "sequence") {
      CHECK(v == "(empty)");
      saw_note = true;
    }
  CHECK(saw_note);

  CompileConfig bad = ident;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(run_compile_report(bad), std::invalid_argument);
}

TEST_CASE("named unitaries parse, with clear failures") {
  CHECK(named_unitary("H").max_abs_diff(hadamard()) < 1e-15);
  CHECK(named_unitary("h").max_abs_diff(hadamard()) < 1e-15);
  CHECK(named_unitary("X").max_abs_diff(pauli('x')) < 1e-15);
  CHECK(named_unitary("rz:1.25").max_abs_diff(
            oracle::expm(complexd(0, -0.625) * pauli('z'))) < 1e-13);
  CHECK(named_unitary("rx:-0.5").max_abs_diff(
            oracle::expm(complexd(0, 0.25) * pauli('x'))) < 1e-13);
  CHECK_THROWS_AS(named_unitary("Q"), std::invalid_argument);
  CHECK_THROWS_AS(named_unitary("rz:"), std::invalid_argument);
  CHECK_THROWS_AS(named_unitary("rz:1.2x"), std::invalid_argument);
  try {
    named_unitary("Q");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("rz:PHI") != std::string::npos);
  }
}

TEST_CASE("matrix files round-trip") {
  const std::string path = "harness_matrix_tmp.txt";
  {
    std::ofstream out(path);
    out << "0 0  1 0\n1 0  0 0\n";
  }
  CHECK(load_matrix_file(path).max_abs_diff(pauli('x')) < 1e-15);
  {
    std::ofstream out(path);
    out << "1 0 0 0\n";  // too short
  }
  CHECK_THROWS_AS(load_matrix_file(path), std::invalid_argument);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_matrix_file(path), std::invalid_argument);
}

TEST_CASE("tree report: exact checks and the measurement accounting notes") {
  TreeConfig cfg;
  cfg.axis = Axis::Z;
  cfg.cycles = 3;
  ExperimentReport r = run_tree_report(cfg);
  CHECK(report_exit_code(r) == 0);
  for (const auto& c : r.checks) CHECK(c.pass);

  bool saw_rate = false, saw_alternative = false, saw_expected = false;
  for (const auto& [k, v] : r.notes) {
    if (k == "measurements_per_cycle") {
      CHECK(v.find("9/4") != std::string::npos);
      CHECK(v.find("2.25") != std::string::npos);
      saw_rate = true;
    }
    if (k == "alternative_accounting") {
      CHECK(v.find("= 1 ") != std::string::npos);
      saw_alternative = true;
    }
    if (k == "expected_measurements") {
      CHECK(v == "3.9375");  // 2.25 * (2 - 2^{-2})
      saw_expected = true;
    }
  }
  CHECK(saw_rate);
  CHECK(saw_alternative);
  CHECK(saw_expected);

  cfg.cycles = 0;
  CHECK_THROWS_AS(run_tree_report(cfg), std::invalid_argument);
  cfg.cycles = 13;
  CHECK_THROWS_AS(run_tree_report(cfg), std::invalid_argument);
}

TEST_CASE("rotation experiment with the deterministic zz correction") {
  RotationConfig cfg;
  cfg.axis = Axis::Z;
  cfg.correction = CorrectionMode::ZzPulse;
  cfg.trials = 300;
  cfg.seed = 11;
  ExperimentReport r = run_rotation_experiment(cfg);
  CHECK(report_exit_code(r) == 0);
  for (const auto& c : r.checks) {
    if (c.name == "success_fraction") CHECK(c.observed == doctest::Approx(1.0));
    if (c.name == "mean_cycles") CHECK(c.observed == doctest::Approx(1.0));
  }
  CHECK(r.fidelity_min >= 1.0 - 1e-10);

  cfg.axis = Axis::X;
  CHECK_THROWS_AS(run_rotation_experiment(cfg), std::invalid_argument);
  RotationConfig bad;
  bad.trials = 0;
  CHECK_THROWS_AS(run_rotation_experiment(bad), std::invalid_argument);
}

TEST_CASE("dgb and teleport experiments pass with exact enumerated branches") {
  DgbConfig dgb;
  dgb.phi = 1.1;
  dgb.trials = 400;
  dgb.seed = 13;
  ExperimentReport rd = run_dgb_experiment(dgb);
  CHECK(report_exit_code(rd) == 0);
  REQUIRE(rd.branches.size() == 2);
  CHECK(std::abs(rd.branches[0].expected_probability - 0.5) < 1e-12);
  CHECK(std::abs(rd.branches[1].expected_probability - 0.5) < 1e-12);

  TeleportConfig tp;
  tp.trials = 400;
  tp.seed = 17;
  ExperimentReport rt = run_teleport_experiment(tp);
  CHECK(report_exit_code(rt) == 0);
  REQUIRE(rt.branches.size() == 4);
  for (const auto& b : rt.branches)
    CHECK(std::abs(b.expected_probability - 0.25) < 1e-12);
  CHECK(rt.fidelity_min >= 1.0 - 1e-10);
}

TEST_CASE("gate teleport experiment: enumerated match probability is exactly 1/4") {
  GateTeleportConfig cfg;
  cfg.unitary = hadamard();
  cfg.name = "H";
  cfg.trials = 500;
  cfg.seed = 19;
  ExperimentReport r = run_gate_teleport_experiment(cfg);
  CHECK(report_exit_code(r) == 0);
  REQUIRE(r.branches.size() == 2);
  CHECK(r.branches[0].key == "alpha=beta");
  CHECK(std::abs(r.branches[0].expected_probability - 0.25) < 1e-12);
  bool saw_attempts = false;
  for (const auto& c : r.checks)
    if (c.name == "mean_attempts") {
      CHECK(std::abs(c.expected - 4.0) < 1e-6);  // capped geometric, cap 100
      saw_attempts = true;
    }
  CHECK(saw_attempts);
  CHECK(r.fidelity_min >= 1.0 - 1e-10);

  cfg.unitary = Matrix(2, {complexd(1, 0), complexd(1, 0), complexd(0, 0), complexd(1, 0)});
  CHECK_THROWS_AS(run_gate_teleport_experiment(cfg), std::invalid_argument);
}

TEST_CASE("csv output quotes fields containing commas or quotes") {
  ExperimentReport r;
  r.command = "demo";
  r.branches.push_back(branch_count("S=1,0", 250, 1000, 0.25));
  r.notes.push_back({"caption", "say \"hi\""});
  finalize_report(r);
  std::string csv = to_csv(r);
  CHECK(csv.rfind("section,name,field,value\n", 0) == 0);
  CHECK(csv.find("\"S=1,0\"") != std::string::npos);
  CHECK(csv.find("\"say \"\"hi\"\"\"") != std::string::npos);
}

TEST_CASE("report files are written by extension") {
  ExperimentReport r;
  r.command = "demo";
  finalize_report(r);
  const std::string jpath = "harness_report_tmp.json";
  write_report_file(r, jpath);
  CHECK(slurp(jpath) == to_json(r));
  std::remove(jpath.c_str());

  const std::string cpath = "harness_report_tmp.csv";
  write_report_file(r, cpath);
  CHECK(slurp(cpath) == to_csv(r));
  std::remove(cpath.c_str());

  CHECK_THROWS_AS(write_report_file(r, "harness_report_tmp.txt"), std::invalid_argument);
  CHECK_THROWS_AS(write_report_file(r, "no_extension"), std::invalid_argument);

  std::string table = to_table(r);
  CHECK(table.find("demo") != std::string::npos);
  CHECK(table.find("overall: PASS") != std::string::npos);
}
