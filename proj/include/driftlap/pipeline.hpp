// End-to-end driver: surface generation, validation against the shrinker
// equation, weighted-operator assembly, eigensolve, and spectral/nodal/
// symmetry analysis, with a deterministic JSON report per run.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "driftlap/eigensolve.hpp"
#include "driftlap/mesh.hpp"
#include "driftlap/shrinkers.hpp"
#include "driftlap/symmetry.hpp"

#include "json.hpp"

namespace driftlap {

// Everything a run needs; every field has a deterministic default, and the
// resolved values are embedded in the report so a run can be reproduced.
struct RunConfig {
  std::string surface = "sphere:4";
  std::string group = "trivial";
  int k = 10;                    // eigenpairs to compute
  double tol = 1e-8;             // eigensolver residual target
  int max_iter = 800;
  std::uint64_t seed = 0;
  int planes = 100;              // random planes for the two-piece check
  int combos = 20;               // random combinations per eigenvalue cluster
  double ode_tol = 1e-8;         // profile shooting tolerance
  double residual_gate = 0.05;   // max allowed shrinker-equation residual
  double gap_tol = 0.01;         // eigenvalue cluster grouping tolerance
  double zero_tol = 1e-6;        // nodal zero band, relative to max|f|
  double perm_tol = 1e-8;        // vertex matching tolerance for symmetries
  std::string out_dir;           // empty: write no files
  std::string format = "json";   // mesh export format
  bool export_mesh = false;      // also export the mesh on full runs
  bool export_matrices = false;  // also export K and M on full runs
  bool use_dense = false;        // dense reference solver instead of LOBPCG
};

// Pipeline stages; each stage runs everything before it.
enum class Stage { Generate, Assemble, Solve, Analyze, Run };

// Parsed "kind[:param[:param...]]" surface description with all defaults
// resolved.  canonical() prints the fully-resolved spec string.
struct SurfaceSpec {
  std::string kind;  // "sphere" | "cylinder" | "disk" | "angenent"
  int sphere_level = 4;
  double cylinder_z_max = 8.0;
  int cylinder_na = 64;
  int cylinder_nz = 128;
  double disk_r_max = 8.0;
  int disk_resolution = 40;
  int angenent_profile_points = 512;
  int angenent_na = 256;

  std::string canonical() const;
};

SurfaceSpec parse_surface(const std::string& text);

// Adjusts angular resolutions upward so the mesh is exactly invariant under
// the rotational part of `group` (no-op for the trivial group and for the
// icosahedral sphere, whose symmetries are fixed by construction).
SurfaceSpec align_surface_to_group(const SurfaceSpec& spec,
                                   const SymmetryGroup& group);

struct BuiltSurface {
  std::unique_ptr<TriangleMesh> mesh;      // stable address for operator use
  std::optional<ProfileCurve> profile;     // revolved surfaces only
  SurfaceSpec spec;                        // resolved parameters
};

BuiltSurface build_surface(const SurfaceSpec& spec, double ode_tol);

struct PipelineResult {
  std::unique_ptr<TriangleMesh> mesh;
  std::optional<ProfileCurve> profile;
  ShrinkerReport shrinker;
  Spectrum spectrum;                       // stages >= Solve
  std::vector<EigenvalueCluster> clusters;
  nlohmann::json report;
  bool checks_passed = true;
};

// Runs the pipeline up to `stage`, writes any requested files under
// cfg.out_dir, and returns the in-memory results together with the report.
PipelineResult run_pipeline(const RunConfig& cfg, Stage stage);

// Compares the eigenvalue tables of two run reports; relative differences
// beyond `tol` (or a failure to load either report) give a nonzero return.
// A difference in table lengths is reported but only the common prefix is
// compared.
int compare_reports(const std::string& path_a, const std::string& path_b,
                    double tol, std::ostream& log);

// One-line-per-item human summary of a report to `log`.
void print_summary(const nlohmann::json& report, std::ostream& log);

}  // namespace driftlap
