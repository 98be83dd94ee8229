// Uniform-grid spatial hash for nearest-point queries, used for
// nearest-vertex matching under symmetries and for weld deduplication.
// Query radius must not exceed the cell size, so any point within the
// radius sits in one of the 27 cells around the query. Points may be
// appended incrementally (welding pattern: query, then add if unmatched).
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace driftlap {

class PointIndex {
 public:
  explicit PointIndex(double cell_size)
      : cell_(cell_size > 0 ? cell_size : 1.0) {}

  PointIndex(const std::vector<Eigen::Vector3d>& points, double cell_size)
      : PointIndex(cell_size) {
    points_.reserve(points.size());
    for (const auto& p : points) add(p);
  }

  // Appends a point and returns its index.
  int add(const Eigen::Vector3d& p) {
    const int i = static_cast<int>(points_.size());
    points_.push_back(p);
    cells_[key(p)].push_back(i);
    return i;
  }

  // Index of the nearest stored point within radius, or -1. Radius must be
  // <= the cell size given at construction.
  int nearest_within(const Eigen::Vector3d& q, double radius) const {
    const std::int64_t cx = coord(q.x());
    const std::int64_t cy = coord(q.y());
    const std::int64_t cz = coord(q.z());
    int best = -1;
    double best_d2 = radius * radius;
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy)
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const auto it = cells_.find(pack(cx + dx, cy + dy, cz + dz));
          if (it == cells_.end()) continue;
          for (int i : it->second) {
            const double d2 = (points_[i] - q).squaredNorm();
            if (d2 <= best_d2) {
              best_d2 = d2;
              best = i;
            }
          }
        }
    return best;
  }

  const std::vector<Eigen::Vector3d>& points() const { return points_; }
  int size() const { return static_cast<int>(points_.size()); }

 private:
  std::int64_t coord(double x) const {
    return static_cast<std::int64_t>(std::floor(x / cell_));
  }
  static std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z) {
    auto h = [](std::int64_t v) {
      return static_cast<std::uint64_t>(v) * 0x9E3779B97F4A7C15ull;
    };
    return h(x) ^ (h(y) << 21 | h(y) >> 43) ^ (h(z) << 42 | h(z) >> 22);
  }
  std::uint64_t key(const Eigen::Vector3d& p) const {
    return pack(coord(p.x()), coord(p.y()), coord(p.z()));
  }

  std::vector<Eigen::Vector3d> points_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace driftlap
