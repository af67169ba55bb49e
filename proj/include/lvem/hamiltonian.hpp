#pragma once

#include "lvem/dispersion.hpp"
#include "lvem/expm.hpp"
#include "lvem/fock_space.hpp"
#include "lvem/kappa_tensor.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <vector>

namespace lvem {

/// Polarization four-vectors eps_r^mu for +k and -k.  The scalar mode is
/// eps_0 = (scalar_sign, 0, 0, 0); +1 is the sign for which the raw Hamiltonian
/// reproduces the grouped blocks (see the README).
struct EpsilonTensor {
  std::array<Eigen::Vector4d, 4> plus;
  std::array<Eigen::Vector4d, 4> minus;

  static EpsilonTensor from_frame(const PolarizationFrame& f, double scalar_sign = 1.0) {
    EpsilonTensor e;
    auto spatial = [](const Vec3& v) { return Eigen::Vector4d(0.0, v[0], v[1], v[2]); };
    e.plus = {Eigen::Vector4d(scalar_sign, 0, 0, 0), spatial(f.eps1), spatial(f.eps2),
              spatial(f.eps3)};
    e.minus = {Eigen::Vector4d(scalar_sign, 0, 0, 0), spatial(f.eps1), spatial(-f.eps2),
               spatial(-f.eps3)};
    return e;
  }
};

/// Frame bilinears q(i,j) = eps_i.(kappa_e- + I kappa_tr).eps_j and
/// o(i,j) = eps_i.kappa_o+.eps_j, with i, j in {1, 2, 3}.
class FrameBilinears {
public:
  FrameBilinears(const KappaSet& k, const PolarizationFrame& f) {
    const Mat3 q = k.q_matrix();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        q_(i, j) = f[i].dot(q * f[j]);
        o_(i, j) = f[i].dot(k.o_plus * f[j]);
      }
  }
  double q(int i, int j) const { return q_(i - 1, j - 1); }
  double o(int i, int j) const { return o_(i - 1, j - 1); }

  double delta_plus() const { return o(1, 2) - 0.5 * (q(1, 1) + q(2, 2)); }
  double delta_minus() const { return -o(1, 2) - 0.5 * (q(1, 1) + q(2, 2)); }

private:
  Mat3 q_;
  Mat3 o_;
};

/// Coefficient-independent operator strings of the Hamiltonian, built once per
/// Fock space so that many coefficient draws only rescale and add them.
class HamiltonianTerms {
  LadderAlgebra alg_;
  std::vector<OperatorMatrix> a_abar_, abar_a_, a_a_, abar_abar_;

public:
  explicit HamiltonianTerms(const FockSpace& space) : alg_(space) {
    constexpr Direction P = Direction::plus;
    constexpr Direction Mn = Direction::minus;
    const LadderAlgebra& A = alg_;
    for (int r = 0; r < 4; ++r)
      for (int s = 0; s < 4; ++s) {
        a_abar_.push_back(A.a(P, r) * A.abar(P, s));
        abar_a_.push_back(A.abar(Mn, r) * A.a(Mn, s));
        a_a_.push_back(A.a(P, r) * A.a(Mn, s));
        abar_abar_.push_back(A.abar(Mn, r) * A.abar(P, s));
      }

    const OperatorMatrix& ad = A.a_d(P);
    const OperatorMatrix& ag = A.a_g(P);
    const OperatorMatrix& adm = A.a_d(Mn);
    const OperatorMatrix& agm = A.a_g(Mn);
    const OperatorMatrix adb = A.bar(ad), agb = A.bar(ag), admb = A.bar(adm), agmb = A.bar(agm);
    const Complex i(0.0, 1.0);

    t_plus = a_abar(1, 1) + a_abar(2, 2);
    t_minus = abar_a(1, 1) + abar_a(2, 2);

    pm_diag = A.a(P, 1) * A.a(Mn, 1) + A.abar(Mn, 1) * A.abar(P, 1) - A.a(P, 2) * A.a(Mn, 2) -
              A.abar(Mn, 2) * A.abar(P, 2);
    pm_12 = A.a(P, 1) * A.a(Mn, 2) + A.abar(Mn, 2) * A.abar(P, 1);
    pm_21 = A.a(P, 2) * A.a(Mn, 1) + A.abar(Mn, 1) * A.abar(P, 2);

    ls0 = -i * (ad * agb - ag * adb + agmb * adm - admb * agm);
    lslv_diag = ag * agb + admb * adm;
    lslv_pair = ag * adm - admb * agb;

    const OperatorMatrix left = agb + i * adm;
    const OperatorMatrix right = ag - i * admb;
    for (int r = 1; r <= 2; ++r) {
      ptls.push_back(A.a(P, r) * left + right * A.abar(P, r));
      mtls.push_back(right * A.a(Mn, r) + A.abar(Mn, r) * left);
    }

    xi_diag = A.abar(P, 1) * A.abar(Mn, 1) - A.a(Mn, 1) * A.a(P, 1) - A.abar(P, 2) * A.abar(Mn, 2) +
              A.a(Mn, 2) * A.a(P, 2);
    xi_off = A.abar(P, 1) * A.abar(Mn, 2) - A.a(P, 1) * A.a(Mn, 2) + A.abar(P, 2) * A.abar(Mn, 1) -
             A.a(P, 2) * A.a(Mn, 1);
  }

  const LadderAlgebra& algebra() const { return alg_; }
  const FockSpace& space() const { return alg_.space(); }

  // Bilinears of the raw form, polarization indices 0..3.
  const OperatorMatrix& a_abar(int r, int s) const { return a_abar_[4 * r + s]; }        // a_r(k) abar_s(k)
  const OperatorMatrix& abar_a(int r, int s) const { return abar_a_[4 * r + s]; }        // abar_r(-k) a_s(-k)
  const OperatorMatrix& a_a(int r, int s) const { return a_a_[4 * r + s]; }              // a_r(k) a_s(-k)
  const OperatorMatrix& abar_abar(int r, int s) const { return abar_abar_[4 * r + s]; }  // abar_r(-k) abar_s(k)

  // Strings of the grouped blocks and of the generator.
  OperatorMatrix t_plus = OperatorMatrix::zero(space());
  OperatorMatrix t_minus = OperatorMatrix::zero(space());
  OperatorMatrix pm_diag = OperatorMatrix::zero(space());
  OperatorMatrix pm_12 = OperatorMatrix::zero(space());
  OperatorMatrix pm_21 = OperatorMatrix::zero(space());
  OperatorMatrix ls0 = OperatorMatrix::zero(space());
  OperatorMatrix lslv_diag = OperatorMatrix::zero(space());
  OperatorMatrix lslv_pair = OperatorMatrix::zero(space());
  std::vector<OperatorMatrix> ptls;  // polarizations 1, 2
  std::vector<OperatorMatrix> mtls;
  OperatorMatrix xi_diag = OperatorMatrix::zero(space());
  OperatorMatrix xi_off = OperatorMatrix::zero(space());
};

/// The grouped free-field Hamiltonian (hbar = omega = 1) and its generator.
struct HamiltonianBundle {
  OperatorMatrix h_t;
  OperatorMatrix h_pm_t;
  OperatorMatrix h_ls0;
  OperatorMatrix h_ls_lv;
  OperatorMatrix h_plus_tls;
  OperatorMatrix h_minus_tls;
  OperatorMatrix xi;

  OperatorMatrix total() const { return h_t + h_pm_t + h_ls0 + h_ls_lv + h_plus_tls + h_minus_tls; }
};

namespace detail {

inline void require_perturbative(const KappaSet& k) {
  k.validate();
  if (k.is_birefringent()) throw InvalidInput("grouped Hamiltonian requires non-birefringent coefficients");
  if (k.max_abs() > 0.1) throw InvalidInput("coefficients outside the perturbative regime");
}

}  // namespace detail

inline OperatorMatrix xi_generators(const HamiltonianTerms& t, const KappaSet& k,
                                    const PolarizationFrame& f) {
  detail::require_perturbative(k);
  const FrameBilinears b(k, f);
  return 0.25 * (b.q(1, 1) - b.q(2, 2)) * t.xi_diag + 0.5 * b.q(1, 2) * t.xi_off;
}

inline HamiltonianBundle build_grouped(const HamiltonianTerms& t, const KappaSet& k,
                                       const PolarizationFrame& f) {
  detail::require_perturbative(k);
  const FrameBilinears b(k, f);
  const double q33 = b.q(3, 3);
  const double r2 = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  return HamiltonianBundle{
      (1.0 + b.delta_plus()) * t.t_plus + (1.0 + b.delta_minus()) * t.t_minus,
      0.5 * ((b.q(1, 1) - b.q(2, 2)) * t.pm_diag + 2.0 * b.q(1, 2) * t.pm_12 + 2.0 * b.q(1, 2) * t.pm_21),
      t.ls0,
      -q33 * t.lslv_diag - i * q33 * t.lslv_pair,
      -r2 * ((b.q(1, 3) - b.o(3, 2)) * t.ptls[0] + (b.q(2, 3) + b.o(3, 1)) * t.ptls[1]),
      r2 * ((b.q(1, 3) + b.o(3, 2)) * t.mtls[0] + (b.q(2, 3) - b.o(3, 1)) * t.mtls[1]),
      xi_generators(t, k, f)};
}

/// Raw leading-order Hamiltonian summed over all polarization pairs (r, s),
/// assembled directly from the tensor components in the given frame.
inline OperatorMatrix build_raw(const HamiltonianTerms& t, const KFTensor& kf,
                                const PolarizationFrame& f, double scalar_sign = 1.0) {
  const EpsilonTensor eps = EpsilonTensor::from_frame(f, scalar_sign);
  const Vec3& kh = f.khat();
  const auto& e = eps.plus;

  std::array<std::array<double, 4>, 4> cov{}, ca{}, cb{}, cc{};
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      double a = 0.0, b = 0.0, c = 0.0, g = 0.0;
      for (int m = 0; m < 4; ++m) g -= metric(m) * e[r][m] * e[s][m];
      for (int kap = 0; kap < 4; ++kap)
        for (int mu = 0; mu < 4; ++mu) {
          const double w = e[r][kap] * e[s][mu];
          if (w == 0.0) continue;
          b += w * kf.lower(kap, 0, mu, 0);
          for (int p = 1; p < 4; ++p) {
            c += w * kf.lower(mu, 0, kap, p) * kh[p - 1];
            for (int q = 1; q < 4; ++q) a += w * kf.lower(kap, p, mu, q) * kh[p - 1] * kh[q - 1];
          }
        }
      cov[r][s] = g;
      ca[r][s] = a;
      cb[r][s] = b;
      cc[r][s] = c;
    }

  OperatorMatrix h = OperatorMatrix::zero(t.space());
  auto add = [&h](double c, const OperatorMatrix& op) {
    if (c != 0.0) h += c * op;
  };
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) {
      const double A = ca[r][s], B = cb[r][s], C = cc[r][s];
      add(cov[r][s], t.a_abar(r, s) + t.abar_a(r, s));
      add(A + B - C, t.a_abar(r, s));
      add(A + B + C, t.abar_a(r, s));
      add(A - B + C, t.a_a(r, s));
      add(A - B - C, t.abar_abar(r, s));
      add(-C, t.a_abar(s, r) - t.abar_a(s, r));
      add(-C, t.a_a(s, r) - t.abar_abar(s, r));
    }
  return h;
}

/// Metric-unitary conjugation by exp(Xi).  The dense-block exponentials are
/// built on first use; vector application never needs them.
class SimilarityTransform {
public:
  explicit SimilarityTransform(const OperatorMatrix& xi) : xi_(xi) {}

  OperatorMatrix forward() const { return {xi_.space(), exponential(+1)}; }
  OperatorMatrix backward() const { return {xi_.space(), exponential(-1)}; }

  /// exp(Xi) H exp(-Xi).
  OperatorMatrix conjugate(const OperatorMatrix& h) const {
    if (!(h.space() == xi_.space())) throw SpaceMismatch("transform and operator spaces differ");
    return {xi_.space(), SparseOp((exponential(+1) * (h.matrix() * exponential(-1))).pruned())};
  }

  /// exp(Xi) H exp(-Xi) v without forming any exponential matrix.
  Eigen::VectorXcd apply(const OperatorMatrix& h, const Eigen::VectorXcd& v) const {
    if (!(h.space() == xi_.space())) throw SpaceMismatch("transform and operator spaces differ");
    const SparseOp& x = xi_.matrix();
    return expm_action(x, h.matrix() * expm_action(x, v, -1.0), 1.0);
  }

private:
  const SparseOp& exponential(int sign) const {
    auto& slot = sign > 0 ? forward_ : backward_;
    if (!slot) slot = block_expm(xi_.matrix(), static_cast<double>(sign));
    return *slot;
  }

  OperatorMatrix xi_;
  mutable std::optional<SparseOp> forward_;
  mutable std::optional<SparseOp> backward_;
};

inline OperatorMatrix similarity_transform(const OperatorMatrix& h, const OperatorMatrix& xi) {
  return SimilarityTransform(xi).conjugate(h);
}

/// Normal-ordered field momentum kvec * sum_r zeta_r (abar_r a_r(k) - abar_r a_r(-k)).
inline std::array<OperatorMatrix, 3> momentum_operator(const LadderAlgebra& alg, const Vec3& kvec) {
  OperatorMatrix count = OperatorMatrix::zero(alg.space());
  for (int r = 0; r < 4; ++r)
    count += zeta(r) * (alg.abar(Direction::plus, r) * alg.a(Direction::plus, r) -
                        alg.abar(Direction::minus, r) * alg.a(Direction::minus, r));
  return {kvec[0] * count, kvec[1] * count, kvec[2] * count};
}

/// exp(-i H t).
inline OperatorMatrix time_evolution(const OperatorMatrix& h, double t) {
  return {h.space(), block_expm(h.matrix(), Complex(0.0, -t))};
}

/// Basis state with the given transverse occupations and empty ghost modes.
inline Eigen::VectorXcd transverse_state(const FockSpace& space, int n1p, int n2p, int n1m, int n2m) {
  return space.basis_vector({0, n1p, n2p, 0, 0, n1m, n2m, 0});
}

/// Indices whose occupations all lie strictly below the cutoff, where
/// commutators are unaffected by truncation.
inline std::vector<Eigen::Index> interior_indices(const FockSpace& space) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    bool inside = true;
    for (int m = 0; m < space.modes() && inside; ++m) inside = space.occupation(i, m) < space.cutoff();
    if (inside) out.push_back(i);
  }
  return out;
}

/// Largest |X_ij| with i and j both interior.
inline double interior_max_abs(const OperatorMatrix& x) {
  const FockSpace& sp = x.space();
  std::vector<char> inside(static_cast<std::size_t>(sp.dim()), 0);
  for (Eigen::Index i : interior_indices(sp)) inside[i] = 1;
  double m = 0.0;
  for (Eigen::Index k = 0; k < x.matrix().outerSize(); ++k) {
    if (!inside[k]) continue;
    for (SparseOp::InnerIterator it(x.matrix(), k); it; ++it)
      if (inside[it.row()]) m = std::max(m, std::abs(it.value()));
  }
  return m;
}

/// Spectral diagnostics of the transformed Hamiltonian.
struct TransverseSpectrum {
  std::array<double, 2> gap_plus{};   // polarizations 1, 2 at +k
  std::array<double, 2> gap_minus{};  // polarizations 1, 2 at -k
  double pair_coupling_before = 0.0;  // max |<1_r(k) 1_s(-k)| H |0>|
  double pair_coupling_after = 0.0;   // same after the transform
};

inline TransverseSpectrum transverse_spectrum(const HamiltonianTerms& t, const HamiltonianBundle& b) {
  const LadderAlgebra& alg = t.algebra();
  const FockSpace& sp = t.space();
  const OperatorMatrix h = b.total();
  const SimilarityTransform st(b.xi);
  const Eigen::VectorXcd vac = transverse_state(sp, 0, 0, 0, 0);
  const double e0 = alg.inner(vac, st.apply(h, vac)).real();
  TransverseSpectrum out;
  for (int r = 1; r <= 2; ++r) {
    const Eigen::VectorXcd vp = transverse_state(sp, r == 1, r == 2, 0, 0);
    const Eigen::VectorXcd vm = transverse_state(sp, 0, 0, r == 1, r == 2);
    out.gap_plus[r - 1] = alg.inner(vp, st.apply(h, vp)).real() - e0;
    out.gap_minus[r - 1] = alg.inner(vm, st.apply(h, vm)).real() - e0;
  }
  const Eigen::VectorXcd hv = h * vac;
  const Eigen::VectorXcd hpv = st.apply(h, vac);
  for (int r = 1; r <= 2; ++r)
    for (int s = 1; s <= 2; ++s) {
      const Eigen::VectorXcd pair = transverse_state(sp, r == 1, r == 2, s == 1, s == 2);
      out.pair_coupling_before = std::max(out.pair_coupling_before, std::abs(alg.inner(pair, hv)));
      out.pair_coupling_after = std::max(out.pair_coupling_after, std::abs(alg.inner(pair, hpv)));
    }
  return out;
}

}  // namespace lvem
