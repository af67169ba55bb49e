#pragma once

#include "lvem/kappa_tensor.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <vector>

namespace lvem {

/// Right-handed triad (eps1, eps2, eps3 = khat) for a propagation direction.
struct PolarizationFrame {
  Vec3 eps1;
  Vec3 eps2;
  Vec3 eps3;

  const Vec3& khat() const { return eps3; }
  /// Transverse (i = 0, 1) or longitudinal (i = 2) polarization vector.
  const Vec3& operator[](int i) const { return i == 0 ? eps1 : (i == 1 ? eps2 : eps3); }
};

namespace detail {

inline void require_unit(const Vec3& khat) {
  if (!khat.allFinite() || std::abs(khat.norm() - 1.0) > 1e-12)
    throw InvalidInput("direction must be a unit vector");
}

inline bool upper_hemisphere(const Vec3& k) {
  if (k.z() != 0.0) return k.z() > 0.0;
  if (k.y() != 0.0) return k.y() > 0.0;
  return k.x() > 0.0;
}

inline PolarizationFrame upper_frame(const Vec3& k) {
  Vec3 seed = Vec3::UnitX();
  if (seed.cross(k).norm() < 1e-12) seed = Vec3::UnitY();
  const Vec3 e1 = (seed - seed.dot(k) * k).normalized();
  return {e1, k.cross(e1), k};
}

}  // namespace detail

inline PolarizationFrame polarization_frame(const Vec3& khat) {
  detail::require_unit(khat);
  if (detail::upper_hemisphere(khat)) return detail::upper_frame(khat);
  const PolarizationFrame mirror = detail::upper_frame(-khat);
  return {mirror.eps1, -mirror.eps2, -mirror.eps3};
}

/// Leading-order fractional phase-velocity shift for non-birefringent
/// coefficients, evaluated in the frame of khat.
inline double delta_nonbiref(const KappaSet& k, const Vec3& khat) {
  k.validate();
  if (k.is_birefringent()) throw InvalidInput("delta_nonbiref requires kappa_e+ = kappa_o- = 0");
  const PolarizationFrame f = polarization_frame(khat);
  const Mat3 q = k.q_matrix();
  return f.eps1.dot(k.o_plus * f.eps2) - 0.5 * (f.eps1.dot(q * f.eps1) + f.eps2.dot(q * f.eps2));
}

/// k~^{ab} = K^{a m b n} khat_m khat_n.  The components of k are read as the
/// covariant k_mu = (omega, kvec); omega is replaced by |kvec|.
inline Mat4 ktilde(const KFTensor& kf, const FourVector& k) {
  const double n = k.x.norm();
  if (!(n > 0.0) || !k.x.allFinite()) throw InvalidInput("ktilde needs a nonzero wavevector");
  const Eigen::Vector4d kh(1.0, k.x[0] / n, k.x[1] / n, k.x[2] / n);
  Mat4 out = Mat4::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int m = 0; m < 4; ++m)
        for (int v = 0; v < 4; ++v) out(a, b) += kf.upper(a, m, b, v) * kh[m] * kh[v];
  return out;
}

struct RhoSigma {
  double rho = 0.0;
  double sigma = 0.0;
  double sigma_squared = 0.0;
  bool negative_sigma_squared = false;  // sigma^2 < -1e-18 before clamping
};

inline RhoSigma rho_sigma(const KFTensor& kf, const Vec3& khat) {
  detail::require_unit(khat);
  const Mat4 kt = ktilde(kf, FourVector(1.0, khat));
  double trace = 0.0;
  double square = 0.0;
  for (int a = 0; a < 4; ++a) {
    trace += metric(a) * kt(a, a);
    for (int b = 0; b < 4; ++b) square += metric(a) * metric(b) * kt(a, b) * kt(a, b);
  }
  RhoSigma r;
  r.rho = -0.5 * trace;
  r.sigma_squared = 0.5 * square - r.rho * r.rho;
  r.negative_sigma_squared = r.sigma_squared < -1e-18;
  r.sigma = std::sqrt(std::max(r.sigma_squared, 0.0));
  return r;
}

/// The 3x3 modified Ampere operator at trial frequency omega.
inline Mat3 ampere_matrix(const KFTensor& kf, const Vec3& kvec, double omega) {
  const Eigen::Vector4d kl(omega, kvec[0], kvec[1], kvec[2]);
  const double k2 = omega * omega - kvec.squaredNorm();
  Mat3 m = -k2 * Mat3::Identity() - kvec * kvec.transpose();
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      double s = 0.0;
      for (int b = 0; b < 4; ++b)
        for (int g = 0; g < 4; ++g) s += kf.upper(p + 1, b, g, q + 1) * kl[b] * kl[g];
      m(p, q) -= 2.0 * s;
    }
  return m;
}

struct AmpereRoot {
  double omega = 0.0;
  CVec3 evec = CVec3::Zero();
  double residual = 0.0;          // |M(omega) E| for unit E
  double longitudinal_angle = 0.0;  // angle between E and the plane orthogonal to kvec
};

/// Transverse propagating roots of the modified Ampere law, lower root first.
/// Each root is the zero of one of the two upper eigenvalue branches of the
/// (real symmetric) Ampere matrix, located by bracketing and bisection.
inline std::vector<AmpereRoot> solve_ampere(const KFTensor& kf, const Vec3& kvec) {
  const double kn = kvec.norm();
  if (!(kn > 0.0) || !kvec.allFinite()) throw InvalidInput("solve_ampere needs a nonzero wavevector");
  if (kf.max_abs() > 0.1) throw InvalidInput("coefficients outside the perturbative regime");

  auto branch = [&](double omega, int idx) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(ampere_matrix(kf, kvec, omega), Eigen::EigenvaluesOnly);
    return es.eigenvalues()[idx];
  };

  std::vector<AmpereRoot> roots;
  for (int idx = 1; idx <= 2; ++idx) {
    double half = std::max(5.0 * kf.frobenius(), 1e-9) * kn;
    double lo = kn - half;
    double hi = kn + half;
    int expansions = 0;
    while (!(branch(lo, idx) >= 0.0 && branch(hi, idx) <= 0.0)) {
      if (++expansions > 8) throw ConvergenceError("could not bracket a transverse Ampere root");
      half *= 2.0;
      lo = std::max(kn - half, 0.5 * kn);
      hi = kn + half;
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * kn; ++it) {
      const double mid = 0.5 * (lo + hi);
      (branch(mid, idx) > 0.0 ? lo : hi) = mid;
    }
    if ((hi - lo) > 1e-13 * kn) throw ConvergenceError("Ampere bisection did not converge");

    AmpereRoot r;
    r.omega = 0.5 * (lo + hi);
    Eigen::SelfAdjointEigenSolver<Mat3> es(ampere_matrix(kf, kvec, r.omega));
    const Vec3 e = es.eigenvectors().col(idx);
    r.evec = e.cast<Complex>();
    r.residual = (ampere_matrix(kf, kvec, r.omega) * e).norm();
    r.longitudinal_angle = std::asin(std::min(1.0, std::abs(e.dot(kvec / kn))));
    roots.push_back(r);
  }
  return roots;
}

/// Leading-order shifts together with the numerically solved roots.
struct DispersionResult {
  double delta = std::numeric_limits<double>::quiet_NaN();  // only for non-birefringent input
  double rho = 0.0;
  double sigma = 0.0;
  double omega_minus = 0.0;  // numeric roots in units of |k|
  double omega_plus = 0.0;
  double residual_minus = 0.0;
  double residual_plus = 0.0;
  bool sigma_warning = false;
};

inline DispersionResult analyze_dispersion(const KappaSet& kappas, const Vec3& khat) {
  const KFTensor kf = kf_from_kappas(kappas);
  DispersionResult d;
  if (!kappas.is_birefringent()) d.delta = delta_nonbiref(kappas, khat);
  const RhoSigma rs = rho_sigma(kf, khat);
  d.rho = rs.rho;
  d.sigma = rs.sigma;
  d.sigma_warning = rs.negative_sigma_squared;
  const auto roots = solve_ampere(kf, khat);
  d.omega_minus = roots[0].omega;
  d.omega_plus = roots[1].omega;
  d.residual_minus = roots[0].residual;
  d.residual_plus = roots[1].residual;
  return d;
}

}  // namespace lvem
