// Command-line driver for the weighted spectral toolkit: generates discrete
// self-shrinker surfaces, assembles the Gaussian-weighted operators, solves
// for the low spectrum, and runs the nodal/symmetry analysis with a JSON
// report per run.
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "driftlap/pipeline.hpp"

namespace {

void add_common_options(CLI::App* cmd, driftlap::RunConfig& cfg) {
  cmd->add_option("--surface", cfg.surface,
                  "sphere[:LEVEL] | cylinder[:ZMAX[:NA[:NZ]]] | "
                  "disk[:RMAX[:RES]] | angenent[:PROFILE_POINTS[:NA]]")
      ->capture_default_str();
  cmd->add_option("--group", cfg.group,
                  "trivial | dihedral:N | prismatic:N (angular resolutions "
                  "are rounded up to stay invariant)")
      ->capture_default_str();
  cmd->add_option("--k", cfg.k, "number of eigenpairs, constant mode included")
      ->capture_default_str();
  cmd->add_option("--tol", cfg.tol, "eigensolver residual tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", cfg.max_iter, "eigensolver iteration cap")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "seed for all randomized stages")
      ->capture_default_str();
  cmd->add_option("--planes", cfg.planes,
                  "random planes for the two-piece check")
      ->capture_default_str();
  cmd->add_option("--combos", cfg.combos,
                  "random combinations per eigenvalue cluster")
      ->capture_default_str();
  cmd->add_option("--ode-tol", cfg.ode_tol, "profile shooting tolerance")
      ->capture_default_str();
  cmd->add_option("--residual-gate", cfg.residual_gate,
                  "max allowed shrinker-equation residual")
      ->capture_default_str();
  cmd->add_option("--gap-tol", cfg.gap_tol,
                  "relative gap that separates eigenvalue clusters")
      ->capture_default_str();
  cmd->add_option("--zero-tol", cfg.zero_tol,
                  "nodal zero band relative to max|f|")
      ->capture_default_str();
  cmd->add_option("--out", cfg.out_dir,
                  "output directory (omit to write no files)");
  cmd->add_option("--format", cfg.format, "mesh export format: off|obj|vtk|json")
      ->capture_default_str();
  cmd->add_flag("--export-mesh", cfg.export_mesh,
                "also export the mesh on full runs");
  cmd->add_flag("--export-matrices", cfg.export_matrices,
                "also export the stiffness and mass matrices on full runs");
  cmd->add_flag("--dense", cfg.use_dense,
                "use the dense reference eigensolver (small meshes only)");
}

int run_stage(const driftlap::RunConfig& cfg, driftlap::Stage stage) {
  const driftlap::PipelineResult result = driftlap::run_pipeline(cfg, stage);
  driftlap::print_summary(result.report, std::cout);
  return result.checks_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Spectral toolkit for discrete self-shrinker surfaces: generation, "
      "Gaussian-weighted finite elements, low spectrum, nodal and symmetry "
      "analysis"};
  app.require_subcommand(1);

  driftlap::RunConfig cfg;
  auto* c_generate = app.add_subcommand(
      "generate", "build a surface mesh and validate the shrinker identity");
  auto* c_assemble = app.add_subcommand(
      "assemble", "generate, then assemble the weighted stiffness and mass");
  auto* c_solve =
      app.add_subcommand("solve", "assemble, then compute the low spectrum");
  auto* c_analyze = app.add_subcommand(
      "analyze", "solve, then run the nodal and symmetry analysis");
  auto* c_run = app.add_subcommand(
      "run", "full pipeline with all checks and optional exports");
  for (auto* cmd : {c_generate, c_assemble, c_solve, c_analyze, c_run})
    add_common_options(cmd, cfg);

  std::string compare_a, compare_b;
  double compare_tol = 0.005;
  auto* c_compare = app.add_subcommand(
      "compare", "compare the eigenvalue tables of two run reports");
  c_compare->add_option("report_a", compare_a, "first report.json")
      ->required();
  c_compare->add_option("report_b", compare_b, "second report.json")
      ->required();
  c_compare
      ->add_option("--tol", compare_tol,
                   "max allowed relative eigenvalue difference")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_compare->parsed())
      return driftlap::compare_reports(compare_a, compare_b, compare_tol,
                                       std::cout);
    if (c_generate->parsed()) return run_stage(cfg, driftlap::Stage::Generate);
    if (c_assemble->parsed()) return run_stage(cfg, driftlap::Stage::Assemble);
    if (c_solve->parsed()) return run_stage(cfg, driftlap::Stage::Solve);
    if (c_analyze->parsed()) return run_stage(cfg, driftlap::Stage::Analyze);
    if (c_run->parsed()) return run_stage(cfg, driftlap::Stage::Run);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
