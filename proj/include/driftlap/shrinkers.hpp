// Generators for the discrete self-shrinker surfaces (sphere of radius 2,
// cylinder of radius sqrt(2), flat disk, and the rotationally symmetric
// genus-1 torus obtained by shooting a closed geodesic of the weighted
// half-plane metric r*exp(-(r^2+z^2)/4) * (dr^2+dz^2)), plus validation of
// the shrinker identity H = (1/2)<x, nu> and the Gaussian-weighted area.
#pragma once

#include "driftlap/mesh.hpp"
#include "driftlap/symmetry.hpp"

#include <string>
#include <vector>

namespace driftlap {

// Default normalization for the Gaussian-weighted area: 1/(4*pi) makes the
// sphere of radius 2 score 4/e. The constant stays configurable because other
// conventions are in circulation.
inline constexpr double kGaussianAreaNormalization =
    1.0 / (4.0 * 3.141592653589793238462643);

// Icosphere of radius 2 centered at the origin; 20 * 4^level faces.
// Levels outside [0, 9] are rejected.
TriangleMesh make_sphere(int subdivision_level);

// Cylinder of radius sqrt(2) about the z-axis truncated at |z| <= z_max,
// with angular_resolution columns and axial_resolution rows of quads (each
// split into two triangles). Boundary rings are flagged.
TriangleMesh make_cylinder(double z_max, int angular_resolution,
                           int axial_resolution);

// Flat disk in the plane z = 0 of radius r_max: one center vertex,
// `resolution` concentric rings with 6*resolution sectors.
TriangleMesh make_disk(double r_max, int resolution);

// Closed meridian profile in the (r, z) half-plane, r > 0. For closed curves
// the first point is repeated at the end. Arclength and tangent angle are
// carried for CSV export and resampling diagnostics.
struct ProfileCurve {
  std::vector<Eigen::Vector2d> points;  // (r, z)
  std::vector<double> arclength;        // s per point, unit-speed parameter
  std::vector<double> tangent_angle;    // theta per point, (dr,dz)=(cos,sin)
  bool closed = false;
  double r0 = 0.0;             // inner starting radius found by the shooter
  double closure_defect = 0.0; // |tangent-angle mismatch| at the closing point
};

// Shoots the profile ODE
//   dr/ds = cos(theta), dz/ds = sin(theta),
//   dtheta/ds = -sin(theta) (1/r - r/2) - cos(theta) z/2
// from (r0, 0) with vertical tangent, and bisects r0 inside the bracket until
// the tangent at the return to z = 0 is vertical again (closure defect <=
// ode_tolerance). The upper arc is sampled at n_points/2 equal-arclength
// stations and mirrored across z = 0 into a closed curve of n_points + 1
// entries. Throws "bracket failure" when the closure defect does not change
// sign over the bracket and "stiff ODE failure" on integrator breakdown.
ProfileCurve shoot_angenent_profile(double r0_low = 0.3, double r0_high = 0.6,
                                    double ode_tolerance = 1e-8,
                                    int n_points = 512);

// Surface of revolution of a closed, non-self-intersecting profile about the
// z-axis; genus-1 mesh invariant under rotation by 2*pi/angular_resolution
// and under z -> -z. Throws on self-intersecting profiles.
TriangleMesh revolve(const ProfileCurve& profile, int angular_resolution);

// Replicates a fundamental-domain patch by a symmetry group and welds the
// coincident wall vertices (tolerance weld_tol). The patch must lie in the
// closure of the wedge {azimuth in [0, pi/n]} (additionally z >= 0 for
// prismatic groups); spilling outside, failed welds, or overlapping images
// are rejected with std::runtime_error.
TriangleMesh replicate_patch(const TriangleMesh& patch,
                             const SymmetryGroup& group,
                             double weld_tol = 1e-8);

// Residual of the shrinker identity and the weighted area.
struct ShrinkerReport {
  double max_abs_residual = 0.0;   // over interior vertices
  double mean_abs_residual = 0.0;  // over interior vertices
  double weighted_area = 0.0;      // c * sum_f area_f * exp(-|centroid|^2/4)
  double normalization_constant = kGaussianAreaNormalization;
  int interior_vertices = 0;
  int skipped_vertices = 0;  // degenerate one-rings
};

// Discrete mean curvature at each interior vertex from the cotangent
// mean-curvature vector over mixed Voronoi areas, signed by the outward
// vertex normal, compared against (1/2)<x, nu>. Boundary vertices are
// excluded. The weighted area uses the configurable normalization.
ShrinkerReport shrinker_residual(
    const TriangleMesh& mesh,
    double normalization_constant = kGaussianAreaNormalization);

// c * sum over faces of area * exp(-|centroid|^2 / 4).
double gaussian_weighted_area(
    const TriangleMesh& mesh,
    double normalization_constant = kGaussianAreaNormalization);

// CSV with header s,r,z,theta and one row per profile point.
void export_profile_csv(const ProfileCurve& profile, const std::string& path);

}  // namespace driftlap
