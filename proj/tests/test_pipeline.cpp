#include "doctest.h"
#include "support.hpp"

#include "driftlap/mesh_io.hpp"
#include "driftlap/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace driftlap;
namespace fs = std::filesystem;

namespace {

nlohmann::json load_json(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("surface parsing") {
  SUBCASE("full forms") {
    const SurfaceSpec sphere = parse_surface("sphere:3");
    CHECK(sphere.kind == "sphere");
    CHECK(sphere.sphere_level == 3);
    const SurfaceSpec cyl = parse_surface("cylinder:8:64:128");
    CHECK(cyl.cylinder_z_max == 8.0);
    CHECK(cyl.cylinder_na == 64);
    CHECK(cyl.cylinder_nz == 128);
    const SurfaceSpec disk = parse_surface("disk:8:40");
    CHECK(disk.disk_r_max == 8.0);
    CHECK(disk.disk_resolution == 40);
    const SurfaceSpec torus = parse_surface("angenent:256:128");
    CHECK(torus.angenent_profile_points == 256);
    CHECK(torus.angenent_na == 128);
  }
  SUBCASE("defaults and canonical round trip") {
    CHECK(parse_surface("sphere").sphere_level == 4);
    CHECK(parse_surface("angenent").angenent_profile_points == 512);
    for (const char* text :
         {"sphere:4", "cylinder:8:64:128", "disk:8:40", "angenent:512:256"}) {
      const SurfaceSpec spec = parse_surface(text);
      CHECK(parse_surface(spec.canonical()).canonical() == spec.canonical());
    }
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(parse_surface("moebius"), std::invalid_argument);
    CHECK_THROWS_AS(parse_surface("sphere:-1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_surface("sphere:abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_surface("cylinder:0:64:128"), std::invalid_argument);
    CHECK_THROWS_AS(parse_surface("cylinder:8:2:128"), std::invalid_argument);
    CHECK_THROWS_AS(parse_surface("disk:8:0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_surface("angenent:7:128"), std::invalid_argument);
    CHECK_THROWS_AS(parse_surface(""), std::invalid_argument);
  }
}

TEST_CASE("surfaces align to the requested group") {
  const SymmetryGroup d8 = parse_group("dihedral:8");
  SurfaceSpec cyl = parse_surface("cylinder:8:62:127");
  cyl = align_surface_to_group(cyl, d8);
  CHECK(cyl.cylinder_na == 64);   // next multiple of 8
  CHECK(cyl.cylinder_nz == 128);  // even for the z-flip

  SurfaceSpec disk = parse_surface("disk:8:40");
  disk = align_surface_to_group(disk, parse_group("dihedral:9"));
  CHECK(disk.disk_resolution == 42);  // 6 * 42 divisible by 9

  SurfaceSpec torus = parse_surface("angenent:256:100");
  torus = align_surface_to_group(torus, parse_group("prismatic:16"));
  CHECK(torus.angenent_na == 112);

  SurfaceSpec sphere = parse_surface("sphere:4");
  const SurfaceSpec unchanged = align_surface_to_group(sphere, d8);
  CHECK(unchanged.canonical() == sphere.canonical());

  SurfaceSpec trivially = parse_surface("cylinder:8:62:127");
  const SurfaceSpec same =
      align_surface_to_group(trivially, trivial_group());
  CHECK(same.canonical() == trivially.canonical());
}

TEST_CASE("generation stage writes mesh and report") {
  const fs::path dir = testsupport::scratch_dir("gen");
  RunConfig cfg;
  cfg.surface = "sphere:2";
  cfg.out_dir = dir.string();
  cfg.format = "off";
  const PipelineResult res = run_pipeline(cfg, Stage::Generate);
  CHECK(res.mesh->vertex_count() == 162);
  CHECK(res.checks_passed);

  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "mesh.off"));
  const nlohmann::json report = load_json(dir / "report.json");
  CHECK(report["stage"] == "generate");
  CHECK(report["mesh"]["vertices"] == 162);
  CHECK(report["mesh"]["euler_characteristic"] == 2);
  CHECK(report["surface"]["weighted_area"].get<double>() > 1.3);
  CHECK_FALSE(report.contains("spectrum"));

  const ImportedMesh back = import_mesh((dir / "mesh.off").string());
  CHECK(back.mesh.vertex_count() == 162);
  fs::remove_all(dir);
}

TEST_CASE("solve stage emits the spectrum table") {
  const fs::path dir = testsupport::scratch_dir("solve");
  RunConfig cfg;
  cfg.surface = "sphere:3";
  cfg.k = 6;
  cfg.out_dir = dir.string();
  const PipelineResult res = run_pipeline(cfg, Stage::Solve);
  REQUIRE(res.spectrum.converged);
  CHECK(res.spectrum.eigenvalues[1] ==
        doctest::Approx(0.502886).epsilon(1e-4));

  const nlohmann::json report = load_json(dir / "report.json");
  REQUIRE(report.contains("spectrum"));
  CHECK(report["spectrum"]["eigenvalues"].size() == 6);
  CHECK(report["spectrum"]["converged"] == true);
  REQUIRE(fs::exists(dir / "spectrum.csv"));

  std::ifstream csv(dir / "spectrum.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "index,eigenvalue,residual");
  int rows = 0;
  for (std::string line; std::getline(csv, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 6);
  fs::remove_all(dir);
}

TEST_CASE("full run passes its own gates on a modest cylinder") {
  const fs::path dir = testsupport::scratch_dir("run");
  RunConfig cfg;
  cfg.surface = "cylinder:8:32:64";
  cfg.k = 8;
  cfg.planes = 40;
  cfg.combos = 10;
  cfg.out_dir = dir.string();
  cfg.export_mesh = true;
  cfg.export_matrices = true;
  cfg.format = "vtk";
  const PipelineResult res = run_pipeline(cfg, Stage::Run);
  CHECK(res.checks_passed);

  const nlohmann::json report = load_json(dir / "report.json");
  CHECK(report["checks_passed"] == true);
  for (const char* name :
       {"shrinker_residual", "coordinate_residual", "solver_converged",
        "lambda_1", "domain_bound", "two_piece", "cluster_combinations"}) {
    INFO(name);
    REQUIRE(report["checks"].contains(name));
    CHECK(report["checks"][name]["pass"] == true);
  }
  CHECK(report["nodal"]["two_piece"]["failures"] == 0);
  CHECK(report.contains("timings"));
  CHECK(report["config"]["surface_resolved"] == "cylinder:8:32:64");

  // Requested exports: mesh with the leading eigenmodes, and both matrices.
  REQUIRE(fs::exists(dir / "mesh.vtk"));
  REQUIRE(fs::exists(dir / "stiffness.mtx"));
  REQUIRE(fs::exists(dir / "mass.mtx"));
  const ImportedMesh back = import_mesh((dir / "mesh.vtk").string());
  CHECK(back.mesh.vertex_count() == res.mesh->vertex_count());
  CHECK(back.fields.count("eigenmode_1") == 1);
  for (int i = 0; i < back.mesh.vertex_count(); ++i)
    CHECK((back.mesh.vertices[i] - res.mesh->vertices[i]).norm() == 0.0);
  fs::remove_all(dir);
}

TEST_CASE("nodal curves export at the analyze stage") {
  const fs::path dir = testsupport::scratch_dir("analyze");
  RunConfig cfg;
  cfg.surface = "sphere:2";
  cfg.k = 4;
  cfg.planes = 10;
  cfg.combos = 5;
  cfg.out_dir = dir.string();
  run_pipeline(cfg, Stage::Analyze);
  CHECK(fs::exists(dir / "zero_curves.obj"));
  const nlohmann::json report = load_json(dir / "report.json");
  REQUIRE(report.contains("nodal"));
  CHECK(report["nodal"]["zero_curves"]["loops"].get<int>() >= 1);
  fs::remove_all(dir);
}

TEST_CASE("repeated runs are byte-identical apart from timings") {
  const fs::path dir_a = testsupport::scratch_dir("rep_a");
  const fs::path dir_b = testsupport::scratch_dir("rep_b");
  RunConfig cfg;
  cfg.surface = "sphere:2";
  cfg.k = 5;
  cfg.planes = 20;
  cfg.combos = 5;
  cfg.seed = 99;
  cfg.out_dir = dir_a.string();
  run_pipeline(cfg, Stage::Analyze);
  cfg.out_dir = dir_b.string();
  run_pipeline(cfg, Stage::Analyze);

  nlohmann::json a = load_json(dir_a / "report.json");
  nlohmann::json b = load_json(dir_b / "report.json");
  a.erase("timings");
  b.erase("timings");
  a["config"].erase("out");
  b["config"].erase("out");
  CHECK(a.dump() == b.dump());
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("report comparison tool") {
  const fs::path dir = testsupport::scratch_dir("compare");
  RunConfig cfg;
  cfg.surface = "sphere:3";
  cfg.k = 4;
  cfg.out_dir = (dir / "a").string();
  run_pipeline(cfg, Stage::Solve);
  cfg.out_dir = (dir / "b").string();
  run_pipeline(cfg, Stage::Solve);
  cfg.surface = "sphere:4";
  cfg.out_dir = (dir / "c").string();
  run_pipeline(cfg, Stage::Solve);

  std::ostringstream log;
  // Identical runs agree to any tolerance.
  CHECK(compare_reports((dir / "a" / "report.json").string(),
                        (dir / "b" / "report.json").string(), 1e-12,
                        log) == 0);
  // Neighboring resolutions agree to 0.5% on the first four eigenvalues.
  CHECK(compare_reports((dir / "a" / "report.json").string(),
                        (dir / "c" / "report.json").string(), 0.005,
                        log) == 0);
  // But not to a micro tolerance.
  CHECK(compare_reports((dir / "a" / "report.json").string(),
                        (dir / "c" / "report.json").string(), 1e-6,
                        log) != 0);
  // Missing files are a distinct failure.
  CHECK(compare_reports((dir / "a" / "report.json").string(),
                        (dir / "nowhere.json").string(), 0.005, log) == 2);
  fs::remove_all(dir);
}

TEST_CASE("group-aware run embeds the symmetry verdict") {
  const fs::path dir = testsupport::scratch_dir("group");
  RunConfig cfg;
  cfg.surface = "cylinder:6:24:32";
  cfg.group = "prismatic:4";
  cfg.k = 5;
  cfg.planes = 10;
  cfg.combos = 5;
  cfg.out_dir = dir.string();
  const PipelineResult res = run_pipeline(cfg, Stage::Analyze);
  const nlohmann::json report = load_json(dir / "report.json");
  REQUIRE(report.contains("symmetry"));
  CHECK(report["symmetry"]["invariant"] == true);
  CHECK(report["symmetry"]["axioms"] == "pass");
  CHECK(report["symmetry"]["pullback_isometry_defect"].get<double>() <=
        1e-10);
  CHECK(report["symmetry"]["equivariance_residual"].get<double>() <=
        report["symmetry"]["equivariance_gate"].get<double>());
  CHECK(report["checks"]["symmetry"]["pass"] == true);
  CHECK(res.checks_passed);
  fs::remove_all(dir);
}

TEST_CASE("summary printer names the verdict") {
  RunConfig cfg;
  cfg.surface = "sphere:1";
  cfg.k = 4;
  cfg.planes = 5;
  cfg.combos = 3;
  const PipelineResult res = run_pipeline(cfg, Stage::Solve);
  std::ostringstream out;
  print_summary(res.report, out);
  CHECK(out.str().find("spectrum") != std::string::npos);
  CHECK(out.str().find("surface") != std::string::npos);
  CHECK(out.str().find("overall") != std::string::npos);
}

TEST_CASE("invalid configurations fail loudly") {
  RunConfig cfg;
  cfg.surface = "nonsense";
  CHECK_THROWS_AS(run_pipeline(cfg, Stage::Generate), std::invalid_argument);

  RunConfig bad_format;
  bad_format.surface = "sphere:1";
  bad_format.format = "stl";
  bad_format.out_dir = testsupport::scratch_dir("badfmt").string();
  CHECK_THROWS_AS(run_pipeline(bad_format, Stage::Generate),
                  std::invalid_argument);

  RunConfig bad_group;
  bad_group.surface = "sphere:1";
  bad_group.group = "cubic:3";
  CHECK_THROWS_AS(run_pipeline(bad_group, Stage::Generate),
                  std::invalid_argument);
}

}  // TEST_SUITE("pipeline")
