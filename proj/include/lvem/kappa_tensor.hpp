#pragma once

#include "lvem/core.hpp"

#include <algorithm>
#include <cmath>

namespace lvem {

/// Rank-4 photon-sector coefficient tensor.  Components are stored with all
/// indices raised; lowering multiplies by the metric once per index.
class KFTensor {
public:
  KFTensor() { c_.fill(0.0); }

  static KFTensor zero() { return {}; }

  double upper(int a, int b, int c, int d) const { return c_[offset(a, b, c, d)]; }
  double lower(int a, int b, int c, int d) const {
    return metric(a) * metric(b) * metric(c) * metric(d) * upper(a, b, c, d);
  }
  void set_upper(int a, int b, int c, int d, double v) { c_[offset(a, b, c, d)] = v; }

  /// Assigns one component and its seven images under the Riemann symmetries.
  void set_riemann(int a, int b, int c, int d, double v) {
    set_upper(a, b, c, d, v);
    set_upper(b, a, c, d, -v);
    set_upper(a, b, d, c, -v);
    set_upper(b, a, d, c, v);
    set_upper(c, d, a, b, v);
    set_upper(d, c, a, b, -v);
    set_upper(c, d, b, a, -v);
    set_upper(d, c, b, a, v);
  }

  const std::array<double, 256>& data() const { return c_; }
  std::array<double, 256>& data() { return c_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : c_) s += v * v;
    return std::sqrt(s);
  }

  /// The single trace T^mu_nu = (k_F)^{alpha mu}_{alpha nu}.
  Mat4 single_trace() const {
    Mat4 t = Mat4::Zero();
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu)
        for (int a = 0; a < 4; ++a) t(mu, nu) += metric(a) * metric(nu) * upper(a, mu, a, nu);
    return t;
  }

  KFTensor& operator+=(const KFTensor& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  KFTensor& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  friend KFTensor operator+(KFTensor a, const KFTensor& b) { return a += b; }
  friend KFTensor operator-(KFTensor a, const KFTensor& b) {
    for (std::size_t i = 0; i < a.c_.size(); ++i) a.c_[i] -= b.c_[i];
    return a;
  }
  friend KFTensor operator*(double s, KFTensor a) { return a *= s; }

private:
  static std::size_t offset(int a, int b, int c, int d) {
    return static_cast<std::size_t>(((a * 4 + b) * 4 + c) * 4 + d);
  }
  std::array<double, 256> c_;
};

/// The five 3x3 kappa-tilde blocks.  e_plus, e_minus and o_minus are
/// symmetric and traceless, o_plus is antisymmetric.
struct KappaSet {
  Mat3 e_plus = Mat3::Zero();
  Mat3 e_minus = Mat3::Zero();
  Mat3 o_plus = Mat3::Zero();
  Mat3 o_minus = Mat3::Zero();
  double tr = 0.0;

  static KappaSet zero() { return {}; }

  /// Largest deviation from the required symmetry and trace conditions.
  double structure_violation() const {
    auto sym_traceless = [](const Mat3& m) {
      return std::max((m - m.transpose()).cwiseAbs().maxCoeff(), std::abs(m.trace()));
    };
    return std::max({sym_traceless(e_plus), sym_traceless(e_minus), sym_traceless(o_minus),
                     (o_plus + o_plus.transpose()).cwiseAbs().maxCoeff()});
  }

  void validate(double tol = kDefaultTolerance) const {
    if (!std::isfinite(tr) || !e_plus.allFinite() || !e_minus.allFinite() ||
        !o_plus.allFinite() || !o_minus.allFinite())
      throw InvalidInput("kappa set contains non-finite entries");
    if (structure_violation() > tol)
      throw InvalidInput("kappa matrices violate symmetry/trace conditions");
  }

  /// Nearest valid set: symmetric traceless parts and the antisymmetric part.
  KappaSet symmetrized() const {
    auto st = [](const Mat3& m) {
      Mat3 s = 0.5 * (m + m.transpose());
      return Mat3(s - (s.trace() / 3.0) * Mat3::Identity());
    };
    KappaSet k;
    k.e_plus = st(e_plus);
    k.e_minus = st(e_minus);
    k.o_minus = st(o_minus);
    k.o_plus = 0.5 * (o_plus - o_plus.transpose());
    k.tr = tr;
    return k;
  }

  bool is_birefringent(double tol = kDefaultTolerance) const {
    return std::max(e_plus.cwiseAbs().maxCoeff(), o_minus.cwiseAbs().maxCoeff()) > tol;
  }

  /// Non-birefringent combination kappa_e- + I kappa_tr.
  Mat3 q_matrix() const { return e_minus + tr * Mat3::Identity(); }

  KappaSet scaled(double s) const {
    return {s * e_plus, s * e_minus, s * o_plus, s * o_minus, s * tr};
  }

  /// Observer rotation: every block transforms as R m R^T.
  KappaSet rotated(const Mat3& r) const {
    auto rot = [&](const Mat3& m) { return Mat3(r * m * r.transpose()); };
    return {rot(e_plus), rot(e_minus), rot(o_plus), rot(o_minus), tr};
  }

  double max_abs() const {
    return std::max({e_plus.cwiseAbs().maxCoeff(), e_minus.cwiseAbs().maxCoeff(),
                     o_plus.cwiseAbs().maxCoeff(), o_minus.cwiseAbs().maxCoeff(), std::abs(tr)});
  }
};

/// Residuals of the algebraic constraints on a coefficient tensor.
struct SymmetryReport {
  double antisym_first = 0.0;   // K^{abcd} + K^{bacd}
  double antisym_second = 0.0;  // K^{abcd} + K^{abdc}
  double pair_exchange = 0.0;   // K^{abcd} - K^{cdab}
  double bianchi = 0.0;         // K^{abcd} + K^{acdb} + K^{adbc}
  double double_trace = 0.0;    // K^{ab}_{ab}

  double max() const {
    return std::max({antisym_first, antisym_second, pair_exchange, bianchi, double_trace});
  }
  bool ok(double tol = kDefaultTolerance) const { return max() <= tol; }
};

inline SymmetryReport check_invariants(const KFTensor& kf) {
  SymmetryReport r;
  double dtrace = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      dtrace += metric(a) * metric(b) * kf.upper(a, b, a, b);
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const double v = kf.upper(a, b, c, d);
          r.antisym_first = std::max(r.antisym_first, std::abs(v + kf.upper(b, a, c, d)));
          r.antisym_second = std::max(r.antisym_second, std::abs(v + kf.upper(a, b, d, c)));
          r.pair_exchange = std::max(r.pair_exchange, std::abs(v - kf.upper(c, d, a, b)));
          r.bianchi = std::max(
              r.bianchi, std::abs(v + kf.upper(a, c, d, b) + kf.upper(a, d, b, c)));
        }
    }
  r.double_trace = std::abs(dtrace);
  return r;
}

namespace detail {

/// Electric, magnetic and mixed 3x3 blocks of the bivector form of K.
/// Spatial bivectors are ordered (23, 31, 12).
struct BivectorBlocks {
  Mat3 electric;  // K^{0j0k}
  Mat3 magnetic;  // (1/4) eps^{jpq} eps^{krs} K^{pqrs}
  Mat3 mixed;     // (1/2) eps^{kpq} K^{0jpq}
};

inline BivectorBlocks bivector_blocks(const KFTensor& kf) {
  BivectorBlocks b{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      b.electric(j, k) = kf.upper(0, j + 1, 0, k + 1);
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
          const double ekpq = levi_civita(k, p, q);
          if (ekpq != 0.0) b.mixed(j, k) += 0.5 * ekpq * kf.upper(0, j + 1, p + 1, q + 1);
          const double ejpq = levi_civita(j, p, q);
          if (ejpq == 0.0) continue;
          for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s) {
              const double ekrs = levi_civita(k, r, s);
              if (ekrs != 0.0)
                b.magnetic(j, k) += 0.25 * ejpq * ekrs * kf.upper(p + 1, q + 1, r + 1, s + 1);
            }
        }
    }
  return b;
}

}  // namespace detail

/// Decomposes a valid tensor into its kappa-tilde blocks.
inline KappaSet kappas_from_kf(const KFTensor& kf, double tol = kDefaultTolerance) {
  for (double v : kf.data())
    if (!std::isfinite(v)) throw InvalidInput("coefficient tensor contains non-finite entries");
  const SymmetryReport rep = check_invariants(kf);
  if (!rep.ok(tol * std::max(1.0, kf.max_abs())))
    throw InvalidInput("coefficient tensor violates Riemann symmetries or double trace");

  const auto [e, b, c] = detail::bivector_blocks(kf);
  const double tre = e.trace();
  KappaSet k;
  k.e_plus = -e + b;
  k.e_minus = -e - b + (2.0 / 3.0) * tre * Mat3::Identity();
  k.o_plus = c - c.transpose();
  k.o_minus = c + c.transpose();
  k.tr = -(2.0 / 3.0) * tre;
  return k;
}

/// Rebuilds the tensor from its kappa-tilde blocks.  The map is the exact
/// inverse of kappas_from_kf on valid inputs.
inline KFTensor kf_from_kappas(const KappaSet& k, double tol = kDefaultTolerance) {
  k.validate(tol);
  const Mat3 base = -k.e_minus - k.tr * Mat3::Identity();
  const Mat3 e = 0.5 * (base - k.e_plus);
  const Mat3 b = 0.5 * (base + k.e_plus);
  const Mat3 c = 0.5 * (k.o_minus + k.o_plus);

  KFTensor kf;
  // bivector index a <-> spatial pair (a+1, a+2) cyclically
  auto pair_of = [](int a) { return std::array<int, 2>{(a + 1) % 3 + 1, (a + 2) % 3 + 1}; };
  for (int j = 0; j < 3; ++j)
    for (int k2 = 0; k2 < 3; ++k2) {
      if (j <= k2) {
        kf.set_riemann(0, j + 1, 0, k2 + 1, e(j, k2));
        const auto pj = pair_of(j);
        const auto pk = pair_of(k2);
        kf.set_riemann(pj[0], pj[1], pk[0], pk[1], b(j, k2));
      }
      const auto pk = pair_of(k2);
      kf.set_riemann(0, j + 1, pk[0], pk[1], c(j, k2));
    }
  return kf;
}

/// (k_F)_{klmn} w^k x^l y^m z^n for a tensor antisymmetric in each index
/// pair.  The sum runs over ordered pairs with the vector bivectors
/// w^k x^l - w^l x^k, so coinciding vectors in one pair give exactly zero.
inline double contract4(const KFTensor& kf, const FourVector& w, const FourVector& x,
                        const FourVector& y, const FourVector& z) {
  double s = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const double left = w[a] * x[b] - w[b] * x[a];
      if (left == 0.0) continue;
      for (int c = 0; c < 4; ++c)
        for (int d = c + 1; d < 4; ++d) s += kf.lower(a, b, c, d) * left * (y[c] * z[d] - y[d] * z[c]);
    }
  return s;
}

/// Same contraction through the non-birefringent kappa blocks only.
inline double contract4_kappa(const KappaSet& k, const FourVector& w, const FourVector& x,
                              const FourVector& y, const FourVector& z,
                              double tol = kDefaultTolerance) {
  k.validate(tol);
  if (k.is_birefringent(tol))
    throw InvalidInput("contract4_kappa requires kappa_e+ = kappa_o- = 0");
  const Mat3 q = k.q_matrix();
  const Vec3 u = w.t * x.x - w.x * x.t;
  const Vec3 v = y.t * z.x - y.x * z.t;
  const Vec3 wx = w.x.cross(x.x);
  const Vec3 yz = y.x.cross(z.x);
  return -0.5 * u.dot(q * v) - 0.5 * (u.dot(k.o_plus * yz) + v.dot(k.o_plus * wx)) -
         0.5 * wx.dot(q * yz);
}

/// Leading-order coordinate redefinition x'^mu = x^mu - (1/2) T^mu_nu x^nu,
/// with T the single trace of the tensor.
inline FourVector coordinate_shift(const KFTensor& kf, const FourVector& event) {
  const Eigen::Vector4d x = event.components();
  return FourVector::from_components(x - 0.5 * kf.single_trace() * x);
}

}  // namespace lvem
