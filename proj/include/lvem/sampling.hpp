#pragma once

#include "lvem/kappa_tensor.hpp"

#include <random>

namespace lvem {

/// Deterministic draws for the property suites.
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }

  Vec3 unit_vector() {
    Vec3 v;
    do v = Vec3(normal(), normal(), normal());
    while (v.norm() < 1e-8);
    return v.normalized();
  }

  Mat3 matrix(double scale) {
    Mat3 m;
    for (int i = 0; i < 9; ++i) m(i) = scale * uniform();
    return m;
  }

  FourVector four_vector() { return {uniform(), Vec3(uniform(), uniform(), uniform())}; }

  /// Valid kappa set with entries of order `scale`; birefringent blocks are
  /// zero unless requested.
  KappaSet kappas(double scale, bool birefringent = false) {
    KappaSet k;
    k.e_minus = matrix(scale);
    k.o_plus = matrix(scale);
    k.tr = scale * uniform();
    if (birefringent) {
      k.e_plus = matrix(scale);
      k.o_minus = matrix(scale);
    }
    return k.symmetrized();
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

}  // namespace lvem
