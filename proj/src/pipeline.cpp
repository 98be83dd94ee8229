#include "driftlap/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "driftlap/mesh_io.hpp"
#include "driftlap/nodal.hpp"
#include "driftlap/rng.hpp"
#include "driftlap/weighted_operator.hpp"

namespace driftlap {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, sep)) parts.push_back(token);
  return parts;
}

int parse_int(const std::string& token, const std::string& what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad " + what + ": '" + token + "'");
  }
  if (used != token.size())
    throw std::invalid_argument("bad " + what + ": '" + token + "'");
  return value;
}

double parse_double(const std::string& token, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad " + what + ": '" + token + "'");
  }
  if (used != token.size() || !std::isfinite(value))
    throw std::invalid_argument("bad " + what + ": '" + token + "'");
  return value;
}

int round_up_multiple(int value, int factor) {
  return ((value + factor - 1) / factor) * factor;
}

std::string stage_name(Stage stage) {
  switch (stage) {
    case Stage::Generate: return "generate";
    case Stage::Assemble: return "assemble";
    case Stage::Solve: return "solve";
    case Stage::Analyze: return "analyze";
    case Stage::Run: return "run";
  }
  return "unknown";
}

bool at_least(Stage stage, Stage floor) {
  return static_cast<int>(stage) >= static_cast<int>(floor);
}

class StageTimer {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }
  double total() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
  std::chrono::steady_clock::time_point last_ = start_;
};

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string spectrum_csv(const Spectrum& spectrum) {
  std::string text = "index,eigenvalue,residual\n";
  for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
    text += std::to_string(i);
    text += ',';
    text += format_g17(spectrum.eigenvalues[i]);
    text += ',';
    text += format_g17(spectrum.residuals[i]);
    text += '\n';
  }
  return text;
}

std::string mesh_file_name(const std::string& format) {
  return "mesh." + format;
}

}  // namespace

std::string SurfaceSpec::canonical() const {
  std::ostringstream os;
  if (kind == "sphere") {
    os << "sphere:" << sphere_level;
  } else if (kind == "cylinder") {
    os << "cylinder:" << cylinder_z_max << ':' << cylinder_na << ':'
       << cylinder_nz;
  } else if (kind == "disk") {
    os << "disk:" << disk_r_max << ':' << disk_resolution;
  } else if (kind == "angenent") {
    os << "angenent:" << angenent_profile_points << ':' << angenent_na;
  } else {
    os << kind;
  }
  return os.str();
}

SurfaceSpec parse_surface(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.empty()) throw std::invalid_argument("empty surface spec");

  SurfaceSpec spec;
  spec.kind = parts[0];
  const std::size_t extra = parts.size() - 1;

  if (spec.kind == "sphere") {
    if (extra > 1) throw std::invalid_argument("sphere takes one parameter");
    if (extra >= 1) spec.sphere_level = parse_int(parts[1], "sphere level");
    if (spec.sphere_level < 0 || spec.sphere_level > 9)
      throw std::invalid_argument("sphere level must be in [0, 9]");
  } else if (spec.kind == "cylinder") {
    if (extra > 3)
      throw std::invalid_argument("cylinder takes at most three parameters");
    if (extra >= 1) spec.cylinder_z_max = parse_double(parts[1], "z_max");
    if (extra >= 2) spec.cylinder_na = parse_int(parts[2], "angular count");
    if (extra >= 3) spec.cylinder_nz = parse_int(parts[3], "axial count");
    if (spec.cylinder_z_max <= 0.0)
      throw std::invalid_argument("cylinder z_max must be positive");
    if (spec.cylinder_na < 3 || spec.cylinder_nz < 3)
      throw std::invalid_argument("cylinder resolution must be at least 3");
  } else if (spec.kind == "disk") {
    if (extra > 2)
      throw std::invalid_argument("disk takes at most two parameters");
    if (extra >= 1) spec.disk_r_max = parse_double(parts[1], "r_max");
    if (extra >= 2) spec.disk_resolution = parse_int(parts[2], "resolution");
    if (spec.disk_r_max <= 0.0)
      throw std::invalid_argument("disk r_max must be positive");
    if (spec.disk_resolution < 1)
      throw std::invalid_argument("disk resolution must be at least 1");
  } else if (spec.kind == "angenent") {
    if (extra > 2)
      throw std::invalid_argument("angenent takes at most two parameters");
    if (extra >= 1)
      spec.angenent_profile_points = parse_int(parts[1], "profile points");
    if (extra >= 2) spec.angenent_na = parse_int(parts[2], "angular count");
    if (spec.angenent_profile_points < 8 ||
        spec.angenent_profile_points % 2 != 0)
      throw std::invalid_argument("profile points must be even and >= 8");
    if (spec.angenent_na < 3)
      throw std::invalid_argument("angular count must be at least 3");
  } else {
    throw std::invalid_argument("unknown surface kind: '" + spec.kind + "'");
  }
  return spec;
}

SurfaceSpec align_surface_to_group(const SurfaceSpec& spec,
                                   const SymmetryGroup& group) {
  if (group.kind == "trivial") return spec;
  const int n = group.n;
  // The staggered grids are carried to themselves by a rotation through
  // 2*pi/n exactly when n divides the angular count, and by the z-flip and
  // half-turns when the axial/ring count is even; round the requested
  // resolutions up so every group element maps the triangulation to itself.
  SurfaceSpec out = spec;
  if (spec.kind == "cylinder") {
    out.cylinder_na = round_up_multiple(spec.cylinder_na, n);
    out.cylinder_nz = round_up_multiple(spec.cylinder_nz, 2);
  } else if (spec.kind == "angenent") {
    out.angenent_na = round_up_multiple(spec.angenent_na, n);
  } else if (spec.kind == "disk") {
    // The angular count is 6 * resolution; make it a multiple of n.
    const int step = n / std::gcd(n, 6);
    out.disk_resolution = round_up_multiple(spec.disk_resolution, step);
  }
  return out;
}

BuiltSurface build_surface(const SurfaceSpec& spec, double ode_tol) {
  BuiltSurface out;
  out.spec = spec;
  if (spec.kind == "sphere") {
    out.mesh = std::make_unique<TriangleMesh>(make_sphere(spec.sphere_level));
  } else if (spec.kind == "cylinder") {
    out.mesh = std::make_unique<TriangleMesh>(make_cylinder(
        spec.cylinder_z_max, spec.cylinder_na, spec.cylinder_nz));
  } else if (spec.kind == "disk") {
    out.mesh = std::make_unique<TriangleMesh>(
        make_disk(spec.disk_r_max, spec.disk_resolution));
  } else if (spec.kind == "angenent") {
    out.profile = shoot_angenent_profile(0.3, 0.6, ode_tol,
                                         spec.angenent_profile_points);
    out.mesh =
        std::make_unique<TriangleMesh>(revolve(*out.profile, spec.angenent_na));
  } else {
    throw std::invalid_argument("unknown surface kind: '" + spec.kind + "'");
  }
  return out;
}

namespace {

json config_json(const RunConfig& cfg, const SurfaceSpec& resolved,
                 const SymmetryGroup& group) {
  json j;
  j["surface"] = cfg.surface;
  j["surface_resolved"] = resolved.canonical();
  j["group"] = cfg.group;
  j["group_tag"] = group.tag();
  j["k"] = cfg.k;
  j["tol"] = cfg.tol;
  j["max_iter"] = cfg.max_iter;
  j["seed"] = cfg.seed;
  j["planes"] = cfg.planes;
  j["combos"] = cfg.combos;
  j["ode_tol"] = cfg.ode_tol;
  j["residual_gate"] = cfg.residual_gate;
  j["gap_tol"] = cfg.gap_tol;
  j["zero_tol"] = cfg.zero_tol;
  j["perm_tol"] = cfg.perm_tol;
  j["out"] = cfg.out_dir;
  j["format"] = cfg.format;
  j["export_mesh"] = cfg.export_mesh;
  j["export_matrices"] = cfg.export_matrices;
  j["use_dense"] = cfg.use_dense;
  return j;
}

json clusters_json(const std::vector<EigenvalueCluster>& clusters) {
  json arr = json::array();
  for (const auto& c : clusters)
    arr.push_back({{"value", c.value},
                   {"multiplicity", c.multiplicity},
                   {"first_index", c.first_index}});
  return arr;
}

// Frobenius M-norm of the component of sigma*U outside span(U).
double subspace_defect(const Eigen::SparseMatrix<double>& M,
                       const Eigen::MatrixXd& U, const Eigen::MatrixXd& MU,
                       const Eigen::MatrixXd& V) {
  const Eigen::MatrixXd D = V - U * (MU.transpose() * V);
  return std::sqrt(std::max(0.0, (D.transpose() * (M * D)).trace()));
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg, Stage stage) {
  StageTimer timer;
  json report;
  json timings;
  json checks;

  if (cfg.k < 1) throw std::invalid_argument("k must be at least 1");
  if (cfg.planes < 1) throw std::invalid_argument("planes must be at least 1");
  if (cfg.combos < 1) throw std::invalid_argument("combos must be at least 1");

  const SymmetryGroup group = parse_group(cfg.group);
  const SurfaceSpec requested = parse_surface(cfg.surface);
  const SurfaceSpec spec = align_surface_to_group(requested, group);
  if (!cfg.out_dir.empty()) parse_mesh_format(cfg.format);  // validate early

  report["config"] = config_json(cfg, spec, group);
  report["stage"] = stage_name(stage);

  const fs::path out_dir(cfg.out_dir);
  if (!cfg.out_dir.empty()) fs::create_directories(out_dir);

  // ---- generate -----------------------------------------------------------
  PipelineResult result;
  {
    BuiltSurface built = build_surface(spec, cfg.ode_tol);
    result.mesh = std::move(built.mesh);
    result.profile = std::move(built.profile);
  }
  const TriangleMesh& mesh = *result.mesh;
  result.shrinker = shrinker_residual(mesh);

  report["mesh"] = {{"vertices", mesh.vertex_count()},
                    {"faces", mesh.face_count()},
                    {"edges", mesh.edge_count()},
                    {"euler_characteristic", mesh.euler_characteristic()},
                    {"has_boundary", mesh.has_boundary()},
                    {"mean_edge_length", mean_edge_length(mesh)}};
  report["surface"] = {
      {"max_abs_residual", result.shrinker.max_abs_residual},
      {"mean_abs_residual", result.shrinker.mean_abs_residual},
      {"weighted_area", result.shrinker.weighted_area},
      {"normalization_constant", result.shrinker.normalization_constant},
      {"interior_vertices", result.shrinker.interior_vertices},
      {"skipped_vertices", result.shrinker.skipped_vertices}};
  if (result.profile) {
    report["surface"]["profile"] = {
        {"r0", result.profile->r0},
        {"closure_defect", result.profile->closure_defect},
        {"points", result.profile->points.size()},
        {"length", result.profile->arclength.back()}};
  }
  checks["shrinker_residual"] = {
      {"pass", result.shrinker.max_abs_residual <= cfg.residual_gate},
      {"max_abs_residual", result.shrinker.max_abs_residual},
      {"gate", cfg.residual_gate}};
  timings["generate"] = timer.lap();

  if (!cfg.out_dir.empty()) {
    if (stage == Stage::Generate)
      export_mesh(mesh, (out_dir / mesh_file_name(cfg.format)).string(),
                  parse_mesh_format(cfg.format));
    if (result.profile &&
        (stage == Stage::Generate || stage == Stage::Run))
      export_profile_csv(*result.profile, (out_dir / "profile.csv").string());
  }

  // ---- assemble ------------------------------------------------------------
  WeightedOperators ops;
  if (at_least(stage, Stage::Assemble)) {
    ops = assemble(mesh);
    const double cres[3] = {coordinate_residual(ops, 0),
                            coordinate_residual(ops, 1),
                            coordinate_residual(ops, 2)};
    report["operators"] = {
        {"nnz_stiffness", static_cast<std::int64_t>(ops.K.nonZeros())},
        {"nnz_mass", static_cast<std::int64_t>(ops.M.nonZeros())},
        {"mass_total", ops.lumped_mass.sum()},
        {"coordinate_residuals", {cres[0], cres[1], cres[2]}}};
    const double worst = std::max({cres[0], cres[1], cres[2]});
    checks["coordinate_residual"] = {
        {"pass", worst <= 0.02}, {"max", worst}, {"gate", 0.02}};
    timings["assemble"] = timer.lap();

    if (!cfg.out_dir.empty() &&
        (stage == Stage::Assemble ||
         (stage == Stage::Run && cfg.export_matrices))) {
      export_matrix_market(ops.K, (out_dir / "stiffness.mtx").string());
      export_matrix_market(ops.M, (out_dir / "mass.mtx").string());
    }
  }

  // ---- solve ---------------------------------------------------------------
  if (at_least(stage, Stage::Solve)) {
    if (cfg.use_dense) {
      result.spectrum = dense_spectrum(ops, cfg.k);
    } else {
      SolveOptions sopts;
      sopts.k = cfg.k;
      sopts.tol = cfg.tol;
      sopts.max_iter = cfg.max_iter;
      sopts.seed = cfg.seed;
      result.spectrum = solve_smallest(ops, sopts);
    }
    result.clusters = multiplicity_clusters(result.spectrum, cfg.gap_tol);

    report["spectrum"] = {{"eigenvalues", result.spectrum.eigenvalues},
                          {"residuals", result.spectrum.residuals},
                          {"iterations", result.spectrum.iterations},
                          {"converged", result.spectrum.converged},
                          {"clusters", clusters_json(result.clusters)}};
    checks["solver_converged"] = {{"pass", result.spectrum.converged}};

    if (result.clusters.size() >= 2) {
      const double lambda1 = result.clusters[1].value;
      checks["lambda_1"] = {{"pass", std::abs(lambda1 - 0.5) <= 0.01},
                            {"value", lambda1},
                            {"target", 0.5},
                            {"tolerance", 0.01}};
      if (!mesh.has_boundary()) {
        // Closed shrinkers: first nonzero eigenvalue must land in [1/4, 1/2].
        checks["closed_surface_window"] = {
            {"pass", lambda1 >= 0.25 - 0.01 && lambda1 <= 0.5 + 0.01},
            {"value", lambda1},
            {"window", {0.25, 0.5}},
            {"slack", 0.01}};
      }
    }
    timings["solve"] = timer.lap();

    if (!cfg.out_dir.empty())
      write_text_file(out_dir / "spectrum.csv", spectrum_csv(result.spectrum));
  }

  // ---- analyze ---------------------------------------------------------------
  if (at_least(stage, Stage::Analyze)) {
    const int n_eig = static_cast<int>(result.spectrum.eigenvalues.size());
    json nodal;

    {  // Domain-count bound for the leading eigenfunctions.
      const int m = std::min(10, n_eig);
      const std::vector<double> head(result.spectrum.eigenvalues.begin(),
                                     result.spectrum.eigenvalues.begin() + m);
      const auto rows = courant_check(
          mesh, result.spectrum.eigenvectors.leftCols(m), head, cfg.zero_tol);
      json jrows = json::array();
      bool all_pass = true;
      for (const auto& row : rows) {
        jrows.push_back({{"index", row.index},
                         {"eigenvalue", row.eigenvalue},
                         {"domains", row.domain_count},
                         {"bound", row.bound},
                         {"pass", row.pass}});
        all_pass = all_pass && row.pass;
      }
      nodal["domain_bound"] = jrows;
      checks["domain_bound"] = {{"pass", all_pass},
                                {"functions_checked", m}};
    }

    {  // Random planes through the origin should split the surface in two.
      const TwoPieceReport tp = two_piece_check(mesh, cfg.planes, cfg.seed + 1);
      nodal["two_piece"] = {{"planes_tested", tp.planes_tested},
                            {"degenerate_skipped", tp.degenerate_skipped},
                            {"failures", tp.failures}};
      checks["two_piece"] = {{"pass", tp.failures == 0},
                             {"failures", tp.failures},
                             {"planes", tp.planes_tested},
                             {"degenerate_skipped", tp.degenerate_skipped}};
    }

    if (result.clusters.size() >= 2) {
      // Random combinations inside the first nonzero eigenvalue cluster must
      // have exactly two sign domains.
      const auto& c1 = result.clusters[1];
      const Eigen::MatrixXd basis = result.spectrum.eigenvectors.middleCols(
          c1.first_index, c1.multiplicity);
      const std::vector<int> counts = combination_domain_counts(
          mesh, basis, cfg.combos, cfg.seed + 2, cfg.zero_tol);
      const bool all_two =
          std::all_of(counts.begin(), counts.end(),
                      [](int c) { return c == 2; });
      nodal["cluster_combinations"] = {{"counts", counts},
                                       {"cluster_first_index", c1.first_index},
                                       {"cluster_multiplicity",
                                        c1.multiplicity}};
      checks["cluster_combinations"] = {{"pass", all_two},
                                        {"combinations", cfg.combos}};

      // Zero-curve shape of the first nonzero mode (reported, not gated).
      const NodalCurveSet curves = extract_nodal_curves(
          mesh, result.spectrum.eigenvectors.col(c1.first_index));
      nodal["zero_curves"] = {{"loops", curves.loop_count},
                              {"open_chains", curves.open_chain_count}};
      if (!cfg.out_dir.empty()) {
        std::vector<bool> closed(curves.closed.begin(), curves.closed.end());
        export_polylines_obj(curves.polylines, closed,
                             (out_dir / "zero_curves.obj").string());
      }
    }
    report["nodal"] = nodal;

    if (group.kind != "trivial") {
      json sym;
      bool sym_pass = true;

      try {
        verify_group_axioms(group);
        sym["axioms"] = "pass";
      } catch (const std::exception& e) {
        sym["axioms"] = e.what();
        sym_pass = false;
      }

      double max_dev = 0.0;
      const bool invariant = is_invariant(mesh, group, cfg.perm_tol, &max_dev);
      sym["invariant"] = invariant;
      sym["max_vertex_deviation"] = max_dev;
      if (!invariant) sym_pass = false;

      if (invariant) {
        std::vector<VertexPermutation> perms;
        perms.reserve(group.elements.size());
        for (const auto& iso : group.elements)
          perms.push_back(induced_permutation(mesh, iso, cfg.perm_tol));

        {  // Pullback must preserve the weighted norm (it permutes vertices
           // with identical weights).
          std::mt19937_64 rng(cfg.seed + 3);
          Eigen::VectorXd f(mesh.vertex_count());
          for (Eigen::Index i = 0; i < f.size(); ++i)
            f[i] = standard_normal(rng);
          const double base = f.dot(ops.M * f);
          double worst = 0.0;
          for (const auto& perm : perms) {
            const VertexScalarField pf =
                pullback(VertexScalarField(mesh, f), perm);
            const double moved = pf.values.dot(ops.M * pf.values);
            worst = std::max(worst, std::abs(moved - base) / base);
          }
          sym["pullback_isometry_defect"] = worst;
          if (worst > 1e-10) sym_pass = false;
        }

        if (n_eig > 1) {
          // Pulled-back eigenfunctions stay eigenfunctions.
          double worst = 0.0;
          for (const auto& perm : perms) {
            for (int j = 1; j < n_eig; ++j) {
              const VertexScalarField pf = pullback(
                  VertexScalarField(mesh, result.spectrum.eigenvectors.col(j)),
                  perm);
              worst = std::max(
                  worst, eig_residual(ops, result.spectrum.eigenvalues[j],
                                      pf.values));
            }
          }
          sym["equivariance_residual"] = worst;
          sym["equivariance_gate"] = 10.0 * cfg.tol;
          if (worst > 10.0 * cfg.tol) sym_pass = false;
        }

        {  // Eigenspace stability: group elements must map each complete
           // eigenvalue cluster's span into itself.
          json jstab = json::array();
          for (std::size_t ci = 0; ci < result.clusters.size(); ++ci) {
            const auto& c = result.clusters[ci];
            const Eigen::MatrixXd U = result.spectrum.eigenvectors.middleCols(
                c.first_index, c.multiplicity);
            const Eigen::MatrixXd MU = ops.M * U;
            double defect = 0.0;
            for (const auto& perm : perms) {
              Eigen::MatrixXd V(U.rows(), U.cols());
              for (Eigen::Index j = 0; j < U.cols(); ++j)
                V.col(j) =
                    pullback(VertexScalarField(mesh, U.col(j)), perm).values;
              defect = std::max(defect, subspace_defect(ops.M, U, MU, V));
            }
            const bool complete =
                c.first_index + c.multiplicity - 1 < n_eig - 1;
            const bool gated = (ci == 1) && complete;
            jstab.push_back({{"first_index", c.first_index},
                             {"multiplicity", c.multiplicity},
                             {"value", c.value},
                             {"max_defect", defect},
                             {"gated", gated}});
            if (gated && defect > 1e-6) sym_pass = false;
          }
          sym["cluster_stability"] = jstab;
          sym["stability_gate"] = 1e-6;
        }

        if (n_eig > 1 && group.elements.size() > 1) {
          // Removing the rotated copy of a non-symmetric eigenfunction must
          // leave a nonzero field; report its weighted norm.
          const VertexScalarField u1(
              mesh, result.spectrum.eigenvectors.col(1));
          const VertexScalarField anti = antisymmetrize(u1, perms[1]);
          sym["antisymmetrized_mode_norm"] =
              std::sqrt(std::max(0.0, anti.values.dot(ops.M * anti.values)));
        }
      }

      sym["pass"] = sym_pass;
      report["symmetry"] = sym;
      checks["symmetry"] = {{"pass", sym_pass}, {"group", group.tag()}};
    }
    timings["analyze"] = timer.lap();
  }

  // ---- wrap up ---------------------------------------------------------------
  bool all_pass = true;
  for (const auto& [name, entry] : checks.items()) {
    (void)name;
    all_pass = all_pass && entry.value("pass", false);
  }
  result.checks_passed = all_pass;
  report["checks"] = checks;
  report["checks_passed"] = all_pass;
  timings["total"] = timer.total();
  report["timings"] = timings;
  result.report = report;

  if (!cfg.out_dir.empty()) {
    if (stage == Stage::Run && cfg.export_mesh) {
      NamedFields fields;
      const int m = std::min<int>(4, static_cast<int>(
                                         result.spectrum.eigenvectors.cols()));
      for (int j = 0; j < m; ++j)
        fields["eigenmode_" + std::to_string(j)] =
            result.spectrum.eigenvectors.col(j);
      export_mesh(mesh, fields, (out_dir / mesh_file_name(cfg.format)).string(),
                  parse_mesh_format(cfg.format));
    }
    write_text_file(out_dir / "report.json", report.dump(2) + "\n");
  }
  return result;
}

int compare_reports(const std::string& path_a, const std::string& path_b,
                    double tol, std::ostream& log) {
  json a, b;
  try {
    std::ifstream fa(path_a);
    if (!fa) throw std::runtime_error("cannot open " + path_a);
    fa >> a;
    std::ifstream fb(path_b);
    if (!fb) throw std::runtime_error("cannot open " + path_b);
    fb >> b;
  } catch (const std::exception& e) {
    log << "compare: " << e.what() << "\n";
    return 2;
  }

  if (!a.contains("spectrum") || !b.contains("spectrum") ||
      !a["spectrum"].contains("eigenvalues") ||
      !b["spectrum"].contains("eigenvalues")) {
    log << "compare: one of the reports has no eigenvalue table\n";
    return 2;
  }
  const std::vector<double> va = a["spectrum"]["eigenvalues"];
  const std::vector<double> vb = b["spectrum"]["eigenvalues"];
  const std::size_t m = std::min(va.size(), vb.size());
  if (va.size() != vb.size())
    log << "compare: table lengths differ (" << va.size() << " vs "
        << vb.size() << "); comparing the first " << m << "\n";
  if (m == 0) {
    log << "compare: empty eigenvalue tables\n";
    return 2;
  }

  double worst = 0.0;
  std::size_t worst_index = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double scale = std::max({1.0, std::abs(va[i]), std::abs(vb[i])});
    const double diff = std::abs(va[i] - vb[i]) / scale;
    if (diff > worst) {
      worst = diff;
      worst_index = i;
    }
  }
  log << "compare: " << m << " eigenvalues, max relative difference " << worst
      << " at index " << worst_index << " (tolerance " << tol << ")\n";
  return worst <= tol ? 0 : 1;
}

void print_summary(const json& report, std::ostream& log) {
  if (report.contains("config")) {
    const auto& cfg = report["config"];
    log << "surface   " << cfg.value("surface_resolved", std::string("?"))
        << "   group " << cfg.value("group_tag", std::string("?")) << "\n";
  }
  if (report.contains("mesh")) {
    const auto& m = report["mesh"];
    log << "mesh      " << m.value("vertices", 0) << " vertices, "
        << m.value("faces", 0) << " faces, euler "
        << m.value("euler_characteristic", 0) << "\n";
  }
  if (report.contains("surface")) {
    const auto& s = report["surface"];
    log << "shrinker  max residual " << s.value("max_abs_residual", 0.0)
        << ", weighted area " << s.value("weighted_area", 0.0) << "\n";
  }
  if (report.contains("spectrum")) {
    const auto& s = report["spectrum"];
    log << "spectrum  ";
    for (const auto& c : s["clusters"])
      log << c.value("value", 0.0) << " (x" << c.value("multiplicity", 0)
          << ")  ";
    log << "\n          iterations " << s.value("iterations", 0)
        << ", converged " << (s.value("converged", false) ? "yes" : "no")
        << "\n";
  }
  if (report.contains("checks")) {
    for (const auto& [name, entry] : report["checks"].items())
      log << (entry.value("pass", false) ? "  [pass] " : "  [FAIL] ") << name
          << "\n";
  }
  log << "overall   "
      << (report.value("checks_passed", false) ? "PASS" : "FAIL") << "\n";
}

}  // namespace driftlap
