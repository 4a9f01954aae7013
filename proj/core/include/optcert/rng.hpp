#pragma once

#include "optcert/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace optcert {

// Deterministic random source. std::mt19937_64 has a fully specified bit
// stream, but the std distributions do not, so uniforms and normals are
// derived here from raw 64-bit draws to keep results identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; caches the second variate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Uniform over the solid ball of given radius centred at the origin:
  // gaussian direction scaled by U^{1/n}.
  Vec ball_point(int n, double radius) {
    Vec d(n);
    double norm2 = 0.0;
    do {
      for (int i = 0; i < n; ++i) d[i] = normal();
      norm2 = d.squaredNorm();
    } while (norm2 == 0.0);
    const double u = uniform();
    return d * (radius * std::pow(u, 1.0 / n) / std::sqrt(norm2));
  }

  // Unit direction, uniform on the sphere.
  Vec sphere_point(int n) {
    Vec d(n);
    double norm2 = 0.0;
    do {
      for (int i = 0; i < n; ++i) d[i] = normal();
      norm2 = d.squaredNorm();
    } while (norm2 == 0.0);
    return d / std::sqrt(norm2);
  }

  std::uint64_t bits() { return gen_(); }

  // Integer in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace optcert
