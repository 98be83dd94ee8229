#include "driftlap/shrinkers.hpp"

#include "driftlap/point_index.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <stdexcept>

namespace driftlap {

namespace {

constexpr double kPi = 3.141592653589793238462643;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

}  // namespace

TriangleMesh make_sphere(int subdivision_level) {
  // Level 9 is ~2.6M vertices; beyond that the request is a typo, not a mesh.
  if (subdivision_level < 0 || subdivision_level > 9)
    throw std::invalid_argument("subdivision level must be in [0, 9]");
  constexpr double kRadius = 2.0;
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> vertices = {
      {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : vertices) v *= kRadius / v.norm();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int level = 0; level < subdivision_level; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = vertices[a] + vertices[b];
      m *= kRadius / m.norm();
      const int idx = static_cast<int>(vertices.size());
      vertices.push_back(m);
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> refined;
    refined.reserve(4 * faces.size());
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      refined.push_back({f[0], ab, ca});
      refined.push_back({f[1], bc, ab});
      refined.push_back({f[2], ca, bc});
      refined.push_back({ab, bc, ca});
    }
    faces = std::move(refined);
  }
  return make_mesh(std::move(vertices), std::move(faces));
}

TriangleMesh make_cylinder(double z_max, int angular_resolution,
                           int axial_resolution) {
  if (z_max <= 0.0) throw std::invalid_argument("z_max must be positive");
  if (angular_resolution < 3 || axial_resolution < 3)
    throw std::invalid_argument("cylinder resolutions must be >= 3");
  const int na = angular_resolution;
  const int nz = axial_resolution;
  const double radius = std::sqrt(2.0);

  // Staggered rings: odd rings are rotated half an azimuth step, giving
  // valence-6 interior vertices, and the triangulation (not just the vertex
  // set) is carried to itself by the n-fold rotations, the horizontal
  // half-turns, and the z-flip (when the axial resolution is even).
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(na) * (nz + 1));
  for (int i = 0; i <= nz; ++i) {
    const double z = -z_max + 2.0 * z_max * i / nz;
    const double offset = 0.5 * (i % 2);
    for (int j = 0; j < na; ++j) {
      const double a = 2.0 * kPi * (j + offset) / na;
      vertices.emplace_back(radius * std::cos(a), radius * std::sin(a), z);
    }
  }
  std::vector<std::array<int, 3>> faces;
  faces.reserve(static_cast<std::size_t>(2) * na * nz);
  for (int i = 0; i < nz; ++i) {
    for (int j = 0; j < na; ++j) {
      const int j2 = (j + 1) % na;
      const int a = i * na + j;
      const int b = i * na + j2;
      const int c = (i + 1) * na + j;
      const int d = (i + 1) * na + j2;
      if (i % 2 == 0) {  // lower ring at offset 0, upper at offset 1/2
        faces.push_back({a, b, c});
        faces.push_back({b, d, c});
      } else {  // lower ring at offset 1/2, upper at offset 0
        faces.push_back({a, b, d});
        faces.push_back({a, d, c});
      }
    }
  }
  return make_mesh(std::move(vertices), std::move(faces));
}

TriangleMesh make_disk(double r_max, int resolution) {
  if (r_max <= 0.0) throw std::invalid_argument("r_max must be positive");
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  const int nr = resolution;
  const int nt = 6 * resolution;

  // Staggered rings (odd rings rotated half a step): the triangulation is
  // carried to itself by the in-plane rotations and reflections of the
  // annular grid, and interior vertices away from the hub have valence 6.
  std::vector<Vec3> vertices;
  vertices.reserve(1 + static_cast<std::size_t>(nr) * nt);
  vertices.emplace_back(0.0, 0.0, 0.0);
  for (int i = 1; i <= nr; ++i) {
    const double rad = r_max * i / nr;
    const double offset = 0.5 * (i % 2);
    for (int j = 0; j < nt; ++j) {
      const double t = 2.0 * kPi * (j + offset) / nt;
      vertices.emplace_back(rad * std::cos(t), rad * std::sin(t), 0.0);
    }
  }
  std::vector<std::array<int, 3>> faces;
  for (int j = 0; j < nt; ++j)
    faces.push_back({0, 1 + j, 1 + (j + 1) % nt});
  for (int i = 1; i < nr; ++i) {
    const int base0 = 1 + (i - 1) * nt;
    const int base1 = 1 + i * nt;
    for (int j = 0; j < nt; ++j) {
      const int j2 = (j + 1) % nt;
      const int a = base0 + j;   // inner ring
      const int b = base0 + j2;
      const int c = base1 + j;   // outer ring
      const int d = base1 + j2;
      // Windings chosen so every face normal points along +z.
      if (i % 2 == 1) {  // inner ring at offset 1/2, outer at offset 0
        faces.push_back({a, d, b});
        faces.push_back({a, c, d});
      } else {  // inner ring at offset 0, outer at offset 1/2
        faces.push_back({a, c, b});
        faces.push_back({b, c, d});
      }
    }
  }
  return make_mesh(std::move(vertices), std::move(faces));
}

namespace {

using OdeState = std::array<double, 3>;  // (r, z, theta)

void profile_rhs(const OdeState& y, OdeState& dydt, double /*s*/) {
  const double r = y[0];
  const double z = y[1];
  const double theta = y[2];
  if (r < 1e-9) throw std::runtime_error("stiff ODE failure: r -> 0");
  dydt[0] = std::cos(theta);
  dydt[1] = std::sin(theta);
  dydt[2] = -std::sin(theta) * (1.0 / r - r / 2.0) -
            std::cos(theta) * (z / 2.0);
}

struct UpperArc {
  double length = 0.0;       // arclength of the z = 0 return crossing
  double theta_end = 0.0;    // tangent angle at the crossing
};

// Integrates from (r0, 0) with vertical tangent until z returns to 0 from
// above; integrator tolerances are taken well below the requested closure
// tolerance so the bisection sees a smooth defect.
UpperArc integrate_upper_arc(double r0, double integ_tol) {
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_dense_output(integ_tol, integ_tol,
                                           odeint::runge_kutta_dopri5<OdeState>());
  OdeState y0 = {r0, 0.0, kPi / 2.0};
  stepper.initialize(y0, 0.0, 1e-3);
  constexpr double kMaxArclength = 60.0;
  constexpr int kMaxSteps = 2000000;
  for (int step = 0; step < kMaxSteps; ++step) {
    const double t_prev = stepper.current_time();
    try {
      stepper.do_step(profile_rhs);
    } catch (const std::exception& e) {
      const std::string what = e.what();
      if (what.find("stiff ODE failure") != std::string::npos) throw;
      throw std::runtime_error("stiff ODE failure: " + what);
    }
    const double t_cur = stepper.current_time();
    if (t_cur > kMaxArclength)
      throw std::runtime_error("stiff ODE failure: no return to z = 0");
    if (t_cur > 0.1 && stepper.current_state()[1] < 0.0) {
      // Bisect the crossing arclength inside the last step.
      double lo = std::max(t_prev, 0.1), hi = t_cur;
      OdeState y;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        stepper.calc_state(mid, y);
        (y[1] > 0.0 ? lo : hi) = mid;
      }
      const double s_cross = 0.5 * (lo + hi);
      stepper.calc_state(s_cross, y);
      return {s_cross, y[2]};
    }
  }
  throw std::runtime_error("stiff ODE failure: step limit exceeded");
}

}  // namespace

ProfileCurve shoot_angenent_profile(double r0_low, double r0_high,
                                    double ode_tolerance, int n_points) {
  if (!(r0_low > 0.0 && r0_high < 2.0 && r0_low < r0_high))
    throw std::invalid_argument("r0 bracket must satisfy 0 < low < high < 2");
  if (ode_tolerance <= 0.0 || ode_tolerance > 1e-2)
    throw std::invalid_argument("ode_tolerance out of range");
  if (n_points < 8 || n_points % 2 != 0)
    throw std::invalid_argument("n_points must be even and >= 8");

  const double integ_tol = std::max(1e-13, 0.01 * ode_tolerance);
  // Closure defect: tangent-angle mismatch against the vertical at the
  // return crossing (position closure is exact by the z-mirror construction).
  auto defect = [&](double r0) {
    return integrate_upper_arc(r0, integ_tol).theta_end + kPi / 2.0;
  };

  double lo = r0_low, hi = r0_high;
  double d_lo = defect(lo);
  const double d_hi = defect(hi);
  if (d_lo == 0.0) hi = lo;
  else if (d_hi == 0.0) lo = hi;
  else if ((d_lo > 0.0) == (d_hi > 0.0))
    throw std::runtime_error(
        "bracket failure: closure defect does not change sign over the bracket");

  double r0 = 0.5 * (lo + hi);
  double d_mid = defect(r0);
  for (int it = 0; it < 200 && std::abs(d_mid) > 0.5 * ode_tolerance &&
                   hi - lo > 1e-15;
       ++it) {
    if ((d_mid > 0.0) == (d_lo > 0.0)) {
      lo = r0;
      d_lo = d_mid;
    } else {
      hi = r0;
    }
    r0 = 0.5 * (lo + hi);
    d_mid = defect(r0);
  }
  if (std::abs(d_mid) > ode_tolerance)
    throw std::runtime_error("stiff ODE failure: closure defect stalled above tolerance");

  // Resample the upper arc at equal arclength (the ODE is unit-speed) and
  // mirror across z = 0 to close the curve.
  const UpperArc arc = integrate_upper_arc(r0, integ_tol);
  const int m = n_points / 2;
  std::vector<Eigen::Vector2d> upper(m + 1);
  std::vector<double> upper_theta(m + 1);
  {
    namespace odeint = boost::numeric::odeint;
    auto stepper = odeint::make_dense_output(
        integ_tol, integ_tol, odeint::runge_kutta_dopri5<OdeState>());
    OdeState y0 = {r0, 0.0, kPi / 2.0};
    stepper.initialize(y0, 0.0, 1e-3);
    int i = 1;
    int guard = 0;
    while (i <= m) {
      const double target = arc.length * i / m;
      if (target <= stepper.current_time()) {
        OdeState y;
        stepper.calc_state(std::min(target, stepper.current_time()), y);
        upper[i] = {y[0], y[1]};
        upper_theta[i] = y[2];
        ++i;
      } else {
        if (++guard > 2000000)
          throw std::runtime_error("stiff ODE failure: step limit exceeded");
        stepper.do_step(profile_rhs);
      }
    }
  }
  upper[0] = {r0, 0.0};
  upper_theta[0] = kPi / 2.0;
  upper[m].y() = 0.0;

  ProfileCurve profile;
  profile.closed = true;
  profile.r0 = r0;
  profile.closure_defect = std::abs(d_mid);
  const int total = 2 * m;
  profile.points.resize(total + 1);
  profile.arclength.resize(total + 1);
  profile.tangent_angle.resize(total + 1);
  for (int i = 0; i <= m; ++i) {
    profile.points[i] = upper[i];
    profile.arclength[i] = arc.length * i / m;
    profile.tangent_angle[i] = upper_theta[i];
  }
  for (int i = 1; i < m; ++i) {
    const int j = m - i;  // mirrored source on the upper arc
    profile.points[m + i] = {upper[j].x(), -upper[j].y()};
    profile.arclength[m + i] = 2.0 * arc.length - profile.arclength[j];
    profile.tangent_angle[m + i] = wrap_angle(kPi - upper_theta[j]);
  }
  profile.points[total] = profile.points[0];
  profile.arclength[total] = 2.0 * arc.length;
  profile.tangent_angle[total] = profile.tangent_angle[0];

  for (const auto& p : profile.points) {
    if (p.x() <= 0.0)
      throw std::runtime_error("profile left the half-plane r > 0");
  }
  return profile;
}

namespace {

// Proper crossing test for open segments in the plane (shared endpoints of
// adjacent profile segments are not crossings).
bool segments_cross(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                    const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
  auto orient = [](const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                   const Eigen::Vector2d& r) {
    return (q.x() - p.x()) * (r.y() - p.y()) -
           (q.y() - p.y()) * (r.x() - p.x());
  };
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
}

}  // namespace

TriangleMesh revolve(const ProfileCurve& profile, int angular_resolution) {
  if (!profile.closed)
    throw std::invalid_argument("revolve requires a closed profile");
  if (angular_resolution < 3)
    throw std::invalid_argument("angular resolution must be >= 3");
  const int rings = static_cast<int>(profile.points.size()) - 1;
  if (rings < 3) throw std::invalid_argument("profile has too few points");
  if ((profile.points.front() - profile.points.back()).norm() > 1e-8)
    throw std::invalid_argument("closed profile must repeat its first point");

  for (int i = 0; i < rings; ++i) {
    if (profile.points[i].x() <= 0.0)
      throw std::invalid_argument("profile must stay in the half-plane r > 0");
    for (int j = i + 2; j < rings; ++j) {
      if (i == 0 && j == rings - 1) continue;  // adjacent around the closure
      if (segments_cross(profile.points[i], profile.points[i + 1],
                         profile.points[j], profile.points[j + 1]))
        throw std::runtime_error("self-intersecting profile");
    }
  }

  const int na = angular_resolution;
  if (rings % 2 != 0)
    throw std::invalid_argument(
        "revolve requires an even number of profile segments");

  // Staggered rings: odd rings are rotated half an azimuth step so interior
  // vertices have valence 6 and the triangulation is carried to itself by
  // the n-fold rotations, the horizontal half-turns, and the z-flip
  // (profile sampling is symmetric under reversal).
  std::vector<Vec3> vertices;
  vertices.reserve(static_cast<std::size_t>(rings) * na);
  for (int i = 0; i < rings; ++i) {
    const double r = profile.points[i].x();
    const double z = profile.points[i].y();
    const double offset = 0.5 * (i % 2);
    for (int j = 0; j < na; ++j) {
      const double a = 2.0 * kPi * (j + offset) / na;
      vertices.emplace_back(r * std::cos(a), r * std::sin(a), z);
    }
  }
  std::vector<std::array<int, 3>> faces;
  faces.reserve(static_cast<std::size_t>(2) * rings * na);
  for (int i = 0; i < rings; ++i) {
    const int i2 = (i + 1) % rings;
    for (int j = 0; j < na; ++j) {
      const int j2 = (j + 1) % na;
      const int a = i * na + j;
      const int b = i * na + j2;
      const int c = i2 * na + j;
      const int d = i2 * na + j2;
      // Ring-first winding (outward for a profile traversed with the surface
      // on its left); the opposite handedness of the cylinder's strips.
      if (i % 2 == 0) {  // ring i at offset 0, ring i+1 at offset 1/2
        faces.push_back({a, c, b});
        faces.push_back({b, c, d});
      } else {  // ring i at offset 1/2, ring i+1 at offset 0
        faces.push_back({a, d, b});
        faces.push_back({a, c, d});
      }
    }
  }
  return make_mesh(std::move(vertices), std::move(faces));
}

TriangleMesh replicate_patch(const TriangleMesh& patch,
                             const SymmetryGroup& group, double weld_tol) {
  if (patch.vertex_count() == 0)
    throw std::invalid_argument("empty patch");
  const bool trivial = group.kind == "trivial";

  // Wall data for the wedge {azimuth in [0, pi/n]}.
  const Vec3 wall0_normal(0.0, 1.0, 0.0);
  const Vec3 wall1_normal(-std::sin(kPi / group.n), std::cos(kPi / group.n),
                          0.0);
  std::vector<char> on_wall(patch.vertex_count(), 0);
  if (!trivial) {
    for (int v = 0; v < patch.vertex_count(); ++v) {
      const Vec3& p = patch.vertices[v];
      const double d0 = p.dot(wall0_normal);
      const double d1 = p.dot(wall1_normal);
      if (d0 < -weld_tol || d1 > weld_tol)
        throw std::runtime_error(
            "patch spills outside the fundamental wedge at vertex " +
            std::to_string(v));
      if (group.kind == "prismatic" && p.z() < -weld_tol)
        throw std::runtime_error(
            "patch spills below z = 0 at vertex " + std::to_string(v));
      const bool wall = std::abs(d0) <= weld_tol || std::abs(d1) <= weld_tol ||
                        (group.kind == "prismatic" && std::abs(p.z()) <= weld_tol);
      on_wall[v] = wall ? 1 : 0;
    }
  }

  PointIndex welded(std::max(weld_tol, 1e-12));
  std::vector<int> weld_multiplicity;
  std::vector<char> welded_from_wall;
  std::vector<std::array<int, 3>> faces;
  std::set<std::array<int, 3>> face_keys;

  for (const auto& iso : group.elements) {
    const bool flip = iso.matrix.determinant() < 0.0;
    std::vector<int> local_to_welded(patch.vertex_count());
    for (int v = 0; v < patch.vertex_count(); ++v) {
      const Vec3 image = iso.matrix * patch.vertices[v];
      int idx = welded.nearest_within(image, weld_tol);
      if (idx < 0) {
        idx = welded.add(image);
        weld_multiplicity.push_back(0);
        welded_from_wall.push_back(0);
      }
      ++weld_multiplicity[idx];
      if (on_wall[v]) welded_from_wall[idx] = 1;
      local_to_welded[v] = idx;
    }
    for (const auto& f : patch.faces) {
      std::array<int, 3> g = {local_to_welded[f[0]], local_to_welded[f[1]],
                              local_to_welded[f[2]]};
      if (flip) std::swap(g[1], g[2]);
      if (g[0] == g[1] || g[1] == g[2] || g[2] == g[0])
        throw std::runtime_error("weld mismatch: face collapsed while welding");
      std::array<int, 3> key = g;
      std::sort(key.begin(), key.end());
      if (!face_keys.insert(key).second)
        throw std::runtime_error("weld mismatch: replicated patches overlap");
      faces.push_back(g);
    }
  }

  if (!trivial) {
    for (std::size_t v = 0; v < weld_multiplicity.size(); ++v) {
      if (welded_from_wall[v] && weld_multiplicity[v] < 2)
        throw std::runtime_error(
            "weld mismatch: wall vertex did not merge with any image");
    }
  }
  return make_mesh(welded.points(), std::move(faces));
}

double gaussian_weighted_area(const TriangleMesh& mesh,
                              double normalization_constant) {
  double sum = 0.0;
  for (int f = 0; f < mesh.face_count(); ++f) {
    const Vec3 c = face_centroid(mesh, f);
    sum += face_area(mesh, f) * std::exp(-c.squaredNorm() / 4.0);
  }
  return normalization_constant * sum;
}

ShrinkerReport shrinker_residual(const TriangleMesh& mesh,
                                 double normalization_constant) {
  const int nv = mesh.vertex_count();
  ShrinkerReport report;
  report.normalization_constant = normalization_constant;
  report.weighted_area = gaussian_weighted_area(mesh, normalization_constant);

  // Integrated cotangent mean-curvature vector per vertex.
  std::vector<Vec3> integrated(nv, Vec3::Zero());
  for (const auto& t : mesh.faces) {
    const Vec3& p0 = mesh.vertices[t[0]];
    const Vec3& p1 = mesh.vertices[t[1]];
    const Vec3& p2 = mesh.vertices[t[2]];
    const Vec3 e0 = p2 - p1;  // edge opposite corner 0
    const Vec3 e1 = p0 - p2;
    const Vec3 e2 = p1 - p0;
    const double area = 0.5 * e1.cross(e2).norm();
    if (area <= 0.0) continue;
    const Vec3 e[3] = {e0, e1, e2};
    // Local stiffness K_ab = <e_a, e_b> / (4 area); row sums vanish, so the
    // accumulated value is -(K x)_i = integral of the Laplacian of position.
    for (int a = 0; a < 3; ++a) {
      Vec3 kx = Vec3::Zero();
      for (int b = 0; b < 3; ++b)
        kx += (e[a].dot(e[b]) / (4.0 * area)) * mesh.vertices[t[b]];
      integrated[t[a]] -= kx;
    }
  }

  const std::vector<double> areas = mixed_voronoi_areas(mesh);
  const std::vector<Vec3> normals = vertex_normals(mesh);
  const double area_floor = 1e-12 * mean_face_area(mesh);

  double max_res = 0.0, sum_res = 0.0;
  int counted = 0, skipped = 0;
  for (int v = 0; v < nv; ++v) {
    if (mesh.boundary_flag[v]) continue;
    if (areas[v] <= area_floor) {
      std::cerr << "shrinker_residual: skipping vertex " << v
                << " with degenerate one-ring\n";
      ++skipped;
      continue;
    }
    const Vec3 hvec = integrated[v] / areas[v];
    const double sign = -hvec.dot(normals[v]) >= 0.0 ? 1.0 : -1.0;
    const double h = sign * hvec.norm();
    const double target = 0.5 * mesh.vertices[v].dot(normals[v]);
    const double res = std::abs(h - target);
    max_res = std::max(max_res, res);
    sum_res += res;
    ++counted;
  }
  report.max_abs_residual = max_res;
  report.mean_abs_residual = counted > 0 ? sum_res / counted : 0.0;
  report.interior_vertices = counted;
  report.skipped_vertices = skipped;
  return report;
}

void export_profile_csv(const ProfileCurve& profile, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "s,r,z,theta\n";
  char buf[160];
  for (std::size_t i = 0; i < profile.points.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n",
                  profile.arclength[i], profile.points[i].x(),
                  profile.points[i].y(), profile.tangent_angle[i]);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace driftlap
