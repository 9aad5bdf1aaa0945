#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qtel/experiments.hpp"

// CLI for the teleportation-based gate experiments: Monte Carlo campaigns,
// exact branch-tree reports, and pulse-compiler verification.
//
// Exit codes: 0 all checks pass, 1 usage error, 2 statistical check failed
// (|z| > 4), 3 exact check / verification residual exceeded.

namespace {

int emit(const qtel::ExperimentReport& report, const std::string& out_path) {
  std::cout << qtel::to_table(report);
  if (!out_path.empty()) qtel::write_report_file(report, out_path);
  return qtel::report_exit_code(report);
}

qtel::Matrix resolve_unitary(const std::string& name, const std::string& matrix_file,
                             std::string& echo) {
  if (!matrix_file.empty()) {
    echo = "file:" + matrix_file;
    return qtel::load_matrix_file(matrix_file);
  }
  echo = name;
  return qtel::named_unitary(name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exchange-pulse teleportation experiments: measurement-driven "
               "single-qubit gates, exact branch enumeration, pulse-sequence "
               "compilation"};
  app.require_subcommand(1);

  qtel::RotationConfig rot;
  std::string rot_correction = "repeat";
  std::string out_path;

  auto add_rotation = [&](const char* cmd, const char* desc) {
    CLI::App* sub = app.add_subcommand(cmd, desc);
    sub->add_option("--trials", rot.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--max-cycles", rot.max_cycles, "cycle cap per trial")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", rot.seed, "RNG seed");
    sub->add_option("--phi-z0", rot.phi_z0, "zz angle of the preparation pulse");
    sub->add_option("--correction", rot_correction, "erred-cycle handling")
        ->check(CLI::IsMember({"repeat", "zz"}));
    sub->add_option("--out", out_path, "report file (.json or .csv)");
    return sub;
  };
  CLI::App* rz = add_rotation("rz", "teleported pi/4 z rotation");
  CLI::App* rx = add_rotation("rx", "teleported pi/4 x rotation");

  qtel::DgbConfig dgb;
  CLI::App* dgb_cmd = app.add_subcommand("dgb", "measured zz phase rotation");
  dgb_cmd->add_option("--phi", dgb.phi, "rotation angle: output exp(-i phi/2 Z) psi")
      ->required();
  dgb_cmd->add_option("--trials", dgb.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  dgb_cmd->add_option("--seed", dgb.seed, "RNG seed");
  dgb_cmd->add_option("--out", out_path, "report file (.json or .csv)");

  qtel::TeleportConfig tp;
  CLI::App* tp_cmd = app.add_subcommand("teleport", "one-qubit state teleportation");
  tp_cmd->add_option("--trials", tp.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  tp_cmd->add_option("--seed", tp.seed, "RNG seed");
  tp_cmd->add_option("--out", out_path, "report file (.json or .csv)");

  qtel::GateTeleportConfig gt;
  std::string gt_name = "H";
  std::string gt_file;
  CLI::App* gt_cmd = app.add_subcommand("gate-teleport", "gate teleportation with retries");
  gt_cmd->add_option("--unitary", gt_name, "I, X, Y, Z, H, rz:PHI, ry:PHI, rx:PHI");
  gt_cmd->add_option("--matrix-file", gt_file, "four complex 're im' pairs, row-major");
  gt_cmd->add_option("--trials", gt.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  gt_cmd->add_option("--seed", gt.seed, "RNG seed");
  gt_cmd->add_option("--attempt-cap", gt.attempt_cap, "retry limit per trial")
      ->check(CLI::PositiveNumber);
  gt_cmd->add_option("--out", out_path, "report file (.json or .csv)");

  qtel::TreeConfig tree;
  std::string tree_axis = "z";
  CLI::App* tree_cmd = app.add_subcommand("tree", "exact branch tree report");
  tree_cmd->add_option("--axis", tree_axis, "rotation axis")->check(CLI::IsMember({"z", "x"}));
  tree_cmd->add_option("--cycles", tree.cycles, "cycles to expand (1..12)")
      ->check(CLI::Range(1, 12));
  tree_cmd->add_option("--phi-z0", tree.phi_z0, "zz angle of the preparation pulse");
  tree_cmd->add_option("--out", out_path, "report file (.json or .csv)");

  qtel::CompileConfig comp;
  std::string comp_name;
  std::string comp_file;
  CLI::App* comp_cmd = app.add_subcommand("compile", "compile a 2x2 unitary into pulses");
  comp_cmd->add_option("--target", comp_name, "I, X, Y, Z, H, rz:PHI, ry:PHI, rx:PHI");
  comp_cmd->add_option("--matrix-file", comp_file, "four complex 're im' pairs, row-major");
  comp_cmd->add_option("--tolerance", comp.tolerance, "residual bound")
      ->check(CLI::PositiveNumber);
  comp_cmd->add_option("--out", out_path, "report file (.json or .csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (rz->parsed() || rx->parsed()) {
      rot.axis = rz->parsed() ? qtel::Axis::Z : qtel::Axis::X;
      rot.correction = rot_correction == "zz" ? qtel::CorrectionMode::ZzPulse
                                              : qtel::CorrectionMode::RepeatFlipped;
      return emit(qtel::run_rotation_experiment(rot), out_path);
    }
    if (dgb_cmd->parsed()) return emit(qtel::run_dgb_experiment(dgb), out_path);
    if (tp_cmd->parsed()) return emit(qtel::run_teleport_experiment(tp), out_path);
    if (gt_cmd->parsed()) {
      gt.unitary = resolve_unitary(gt_name, gt_file, gt.name);
      return emit(qtel::run_gate_teleport_experiment(gt), out_path);
    }
    if (tree_cmd->parsed()) {
      tree.axis = tree_axis == "x" ? qtel::Axis::X : qtel::Axis::Z;
      return emit(qtel::run_tree_report(tree), out_path);
    }
    if (comp_cmd->parsed()) {
      if (comp_name.empty() && comp_file.empty())
        throw std::invalid_argument("compile: give --target or --matrix-file");
      comp.target = resolve_unitary(comp_name, comp_file, comp.name);
      return emit(qtel::run_compile_report(comp), out_path);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
