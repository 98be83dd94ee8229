// Shared helpers for the unit tests: small reference meshes and scratch
// directories.
#pragma once

#include "driftlap/mesh.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace testsupport {

inline constexpr double kPi = 3.141592653589793238462643;

// Regular tetrahedron with outward orientation, circumradius sqrt(3).
inline driftlap::TriangleMesh tetrahedron() {
  std::vector<driftlap::Vec3> v = {
      {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  std::vector<std::array<int, 3>> f = {
      {0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return driftlap::make_mesh(std::move(v), std::move(f));
}

// Latitude-longitude sphere of the given radius: poles plus (n_rings - 1)
// interior rings of n_az vertices; quads split along a fixed diagonal.
// Vertex layout: index 0 = north pole, 1 = south pole, then ring-major.
inline driftlap::TriangleMesh uv_sphere(int n_rings, int n_az,
                                        double radius = 2.0) {
  std::vector<driftlap::Vec3> verts;
  verts.emplace_back(0, 0, radius);
  verts.emplace_back(0, 0, -radius);
  for (int i = 1; i < n_rings; ++i) {
    const double polar = kPi * i / n_rings;
    for (int j = 0; j < n_az; ++j) {
      const double az = 2.0 * kPi * j / n_az;
      verts.emplace_back(radius * std::sin(polar) * std::cos(az),
                         radius * std::sin(polar) * std::sin(az),
                         radius * std::cos(polar));
    }
  }
  auto ring = [n_az](int i, int j) {
    return 2 + (i - 1) * n_az + ((j % n_az) + n_az) % n_az;
  };
  std::vector<std::array<int, 3>> faces;
  for (int j = 0; j < n_az; ++j) {
    faces.push_back({0, ring(1, j), ring(1, j + 1)});
    faces.push_back({1, ring(n_rings - 1, j + 1), ring(n_rings - 1, j)});
  }
  for (int i = 1; i < n_rings - 1; ++i) {
    for (int j = 0; j < n_az; ++j) {
      const int a = ring(i, j), b = ring(i, j + 1);
      const int c = ring(i + 1, j + 1), d = ring(i + 1, j);
      faces.push_back({a, c, b});
      faces.push_back({a, d, c});
    }
  }
  return driftlap::make_mesh(std::move(verts), std::move(faces));
}

// The subset of uv_sphere(n_rings, n_az) with azimuth in [0, 2*pi/wedges]
// (wall columns included), positions identical to the full sphere's.
// With wedges = 4 this is a fundamental domain of the order-4 group of
// horizontal-axis half-turns and vertical rotations (kind "dihedral", n = 2).
inline driftlap::TriangleMesh uv_sphere_wedge(int n_rings, int n_az,
                                              int wedges,
                                              double radius = 2.0) {
  const int cols = n_az / wedges;  // wall-to-wall column count
  std::vector<driftlap::Vec3> verts;
  verts.emplace_back(0, 0, radius);
  verts.emplace_back(0, 0, -radius);
  for (int i = 1; i < n_rings; ++i) {
    const double polar = kPi * i / n_rings;
    for (int j = 0; j <= cols; ++j) {
      const double az = 2.0 * kPi * j / n_az;
      verts.emplace_back(radius * std::sin(polar) * std::cos(az),
                         radius * std::sin(polar) * std::sin(az),
                         radius * std::cos(polar));
    }
  }
  auto ring = [cols](int i, int j) { return 2 + (i - 1) * (cols + 1) + j; };
  std::vector<std::array<int, 3>> faces;
  for (int j = 0; j < cols; ++j) {
    faces.push_back({0, ring(1, j), ring(1, j + 1)});
    faces.push_back({1, ring(n_rings - 1, j + 1), ring(n_rings - 1, j)});
  }
  for (int i = 1; i < n_rings - 1; ++i) {
    for (int j = 0; j < cols; ++j) {
      const int a = ring(i, j), b = ring(i, j + 1);
      const int c = ring(i + 1, j + 1), d = ring(i + 1, j);
      faces.push_back({a, c, b});
      faces.push_back({a, d, c});
    }
  }
  return driftlap::make_mesh(std::move(verts), std::move(faces));
}

// Fresh scratch directory under the system temp root; unique per call.
inline std::filesystem::path scratch_dir(const std::string& label) {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path() /
                    ("driftlap_tests_" + label + "_" +
                     std::to_string(counter.fetch_add(1)));
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  return base;
}

}  // namespace testsupport
