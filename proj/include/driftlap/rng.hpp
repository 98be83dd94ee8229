// Deterministic random sampling on top of std::mt19937_64. The std::
// distributions have implementation-defined streams, so uniform and normal
// variates are derived here directly from the engine's bits: results are
// identical across compilers and standard libraries for a given seed.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace driftlap {

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller (one value per call; no cached spare, to
// keep the stream position a pure function of the call count).
inline double standard_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.141592653589793238462643 * u2);
}

// Uniform direction on the unit sphere (normalized Gaussian triple).
inline Eigen::Vector3d random_unit_vector(std::mt19937_64& rng) {
  Eigen::Vector3d v;
  do {
    v = {standard_normal(rng), standard_normal(rng), standard_normal(rng)};
  } while (v.norm() < 1e-12);
  return v.normalized();
}

}  // namespace driftlap
