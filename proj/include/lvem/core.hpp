#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace lvem {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kDefaultTolerance = 1e-12;

/// Raised when an input violates a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative or series evaluation fails to settle.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when operators from different Fock spaces are combined.
class SpaceMismatch : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Diagonal entry of the Minkowski metric diag(+1,-1,-1,-1).
constexpr double metric(int mu) noexcept { return mu == 0 ? 1.0 : -1.0; }

/// Three-dimensional Levi-Civita symbol on 0-based indices.
constexpr double levi_civita(int i, int j, int k) noexcept {
  if (i == j || j == k || i == k) return 0.0;
  // even permutations of (0,1,2) are cyclic shifts
  return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
}

/// Contravariant four-vector (x^0, x^1, x^2, x^3).
struct FourVector {
  double t = 0.0;
  Vec3 x = Vec3::Zero();

  FourVector() = default;
  FourVector(double t0, const Vec3& spatial) : t(t0), x(spatial) {}

  double operator[](int mu) const { return mu == 0 ? t : x[mu - 1]; }

  Eigen::Vector4d components() const { return {t, x[0], x[1], x[2]}; }

  static FourVector from_components(const Eigen::Vector4d& c) {
    return {c[0], Vec3(c[1], c[2], c[3])};
  }
};

inline Vec3 unit(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw InvalidInput("direction vector must be nonzero");
  return v / n;
}

}  // namespace lvem
