#pragma once

#include "lvem/lvem.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

namespace lvem::checks {

/// Outcome of one property check.  For `near` the bound is the allowed
/// distance of `measured` from `target`.
struct CheckResult {
  enum class Kind { below, above, near, equal };

  std::string name;
  std::string module;
  Kind kind = Kind::below;
  double measured = 0.0;
  double bound = 0.0;
  double target = 0.0;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;

  static CheckResult below(std::string name, std::string module, double measured, double bound) {
    CheckResult c = make(std::move(name), std::move(module), Kind::below, measured, bound);
    c.passed = measured < bound;
    return c;
  }
  static CheckResult above(std::string name, std::string module, double measured, double bound) {
    CheckResult c = make(std::move(name), std::move(module), Kind::above, measured, bound);
    c.passed = measured > bound;
    return c;
  }
  static CheckResult near(std::string name, std::string module, double measured, double target, double width) {
    CheckResult c = make(std::move(name), std::move(module), Kind::near, measured, width, target);
    c.passed = std::abs(measured - target) <= width;
    return c;
  }
  static CheckResult equal(std::string name, std::string module, double measured, double target) {
    CheckResult c = make(std::move(name), std::move(module), Kind::equal, measured, 0.0, target);
    c.passed = measured == target;
    return c;
  }

  CheckResult& note(const std::string& s) {
    detail += (detail.empty() ? "" : "; ") + s;
    return *this;
  }

  static CheckResult make(std::string name, std::string module, Kind kind, double measured, double bound,
                          double target = 0.0) {
    CheckResult c;
    c.name = std::move(name);
    c.module = std::move(module);
    c.kind = kind;
    c.measured = measured;
    c.bound = bound;
    c.target = target;
    return c;
  }

  /// Adds a wall-clock budget on top of the numeric criterion.
  CheckResult& within(double budget) {
    if (seconds > budget) {
      passed = false;
      note("took " + std::to_string(seconds) + " s, budget " + std::to_string(budget) + " s");
    }
    return *this;
  }
};

inline const char* comparison(CheckResult::Kind k) {
  switch (k) {
    case CheckResult::Kind::below: return "<";
    case CheckResult::Kind::above: return ">";
    case CheckResult::Kind::near: return "+-";
    case CheckResult::Kind::equal: return "==";
  }
  return "?";
}

/// Runs `body` and stamps the elapsed time on its result.
template <class F>
CheckResult timed(F&& body) {
  const auto start = std::chrono::steady_clock::now();
  CheckResult r = body();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::max(y[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Power-law check that degrades to a plain bound when every value is at
/// roundoff level and there is nothing to fit.
inline CheckResult exponent_check(std::string name, std::string module, const std::vector<double>& scales,
                                  const std::vector<double>& values, double target, double width = 0.2) {
  const double top = *std::max_element(values.begin(), values.end());
  if (top < 1e-14) return CheckResult::below(std::move(name), std::move(module), top, 1e-14).note("nothing to fit");
  return CheckResult::near(std::move(name), std::move(module), loglog_slope(scales, values), target, width);
}

inline std::vector<Vec3> fibonacci_directions(int n) {
  std::vector<Vec3> out;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.push_back(Vec3(r * std::cos(golden * i), r * std::sin(golden * i), z).normalized());
  }
  return out;
}

inline KappaSet normalized_to(const KappaSet& shape, double s) { return shape.scaled(s / shape.max_abs()); }

// ---------------------------------------------------------------- tensors

inline double kappa_distance(const KappaSet& a, const KappaSet& b) {
  return std::max({(a.e_plus - b.e_plus).cwiseAbs().maxCoeff(), (a.e_minus - b.e_minus).cwiseAbs().maxCoeff(),
                   (a.o_plus - b.o_plus).cwiseAbs().maxCoeff(), (a.o_minus - b.o_minus).cwiseAbs().maxCoeff(),
                   std::abs(a.tr - b.tr)});
}

inline CheckResult kappa_roundtrip(Sampler& rng, int draws) {
  double worst = 0.0;
  for (int n = 0; n < draws; ++n) {
    const KappaSet k = rng.kappas(rng.uniform(0.0, 1.0), true);
    worst = std::max(worst, kappa_distance(kappas_from_kf(kf_from_kappas(k)), k));
  }
  return CheckResult::below("kappa_roundtrip", "kappa_tensor", worst, 1e-12).note(std::to_string(draws) + " draws");
}

inline CheckResult tensor_constraints(Sampler& rng, int draws) {
  double worst = 0.0;
  for (int n = 0; n < draws; ++n) worst = std::max(worst, check_invariants(kf_from_kappas(rng.kappas(1.0, true))).max());
  return CheckResult::below("tensor_constraints", "kappa_tensor", worst, 1e-12);
}

/// Slot symmetries of the contraction and the cyclic Bianchi sum.
inline CheckResult contraction_symmetries(Sampler& rng, int draws) {
  double worst = 0.0;
  for (int n = 0; n < draws; ++n) {
    const KFTensor kf = kf_from_kappas(rng.kappas(1.0, true));
    const FourVector w = rng.four_vector(), x = rng.four_vector(), y = rng.four_vector(), z = rng.four_vector();
    const double c = contract4(kf, w, x, y, z);
    worst = std::max({worst, std::abs(c + contract4(kf, x, w, y, z)), std::abs(c + contract4(kf, w, x, z, y)),
                      std::abs(c - contract4(kf, y, z, w, x)),
                      std::abs(c + contract4(kf, w, y, z, x) + contract4(kf, w, z, x, y))});
  }
  return CheckResult::below("contraction_symmetries", "kappa_tensor", worst, 1e-12);
}

inline CheckResult appendix_identity(Sampler& rng, int draws) {
  double worst = 0.0;
  for (int n = 0; n < draws; ++n) {
    const KappaSet k = rng.kappas(1.0);
    const KFTensor kf = kf_from_kappas(k);
    const FourVector w = rng.four_vector(), x = rng.four_vector(), y = rng.four_vector(), z = rng.four_vector();
    const double direct = contract4(kf, w, x, y, z);
    const double reduced = contract4_kappa(k, w, x, y, z);
    // relative to the size of the summed terms, so that an accidental
    // cancellation in one draw does not masquerade as an error
    const double scale = kf.max_abs() * w.components().norm() * x.components().norm() * y.components().norm() *
                         z.components().norm();
    worst = std::max(worst, std::abs(direct - reduced) / std::max(scale, 1e-300));
  }
  return CheckResult::below("appendix_identity", "kappa_tensor", worst, 1e-10).note(std::to_string(draws) + " draws");
}

// ------------------------------------------------------------- dispersion

inline CheckResult frame_parity(Sampler& rng, int draws) {
  double worst = 0.0;
  for (int n = 0; n < draws; ++n) {
    const Vec3 k = rng.unit_vector();
    const PolarizationFrame f = polarization_frame(k), g = polarization_frame(-k);
    worst = std::max({worst, (g.eps1 - f.eps1).cwiseAbs().maxCoeff(), (g.eps2 + f.eps2).cwiseAbs().maxCoeff(),
                      (g.eps3 + f.eps3).cwiseAbs().maxCoeff()});
  }
  return CheckResult::equal("frame_parity", "dispersion", worst, 0.0);
}

inline CheckResult delta_rotation(Sampler& rng, int draws) {
  double worst = 0.0;
  for (int n = 0; n < draws; ++n) {
    const KappaSet k = rng.kappas(0.05);
    const Vec3 kh = rng.unit_vector();
    const Mat3 r = Eigen::AngleAxisd(rng.uniform(-M_PI, M_PI), rng.unit_vector()).toRotationMatrix();
    worst = std::max(worst, std::abs(delta_nonbiref(k.rotated(r), (r * kh).normalized()) - delta_nonbiref(k, kh)));
  }
  return CheckResult::below("delta_rotation_covariance", "dispersion", worst, 1e-12);
}

/// rho equals delta and sigma vanishes for non-birefringent input; the two
/// numeric roots are then degenerate to second order.
inline std::vector<CheckResult> nonbirefringent_shifts(Sampler& rng, int draws) {
  double rho = 0.0, sigma = 0.0, split = 0.0;
  for (int n = 0; n < draws; ++n) {
    const KappaSet k = rng.kappas(1e-3);
    const Vec3 kh = rng.unit_vector();
    const KFTensor kf = kf_from_kappas(k);
    const RhoSigma rs = rho_sigma(kf, kh);
    rho = std::max(rho, std::abs(rs.rho - delta_nonbiref(k, kh)));
    sigma = std::max(sigma, rs.sigma);
    const auto roots = solve_ampere(kf, kh);
    split = std::max(split, std::abs(roots[1].omega - roots[0].omega));
  }
  return {CheckResult::below("rho_equals_delta", "dispersion", rho, 1e-12),
          // sigma is the root of a roundoff-level sigma^2, so it only reaches ~sqrt(eps) * s
          CheckResult::below("sigma_vanishes", "dispersion", sigma, 1e-9),
          CheckResult::below("root_degeneracy", "dispersion", split, 1e-5).note("kappa entries of order 1e-3")};
}

/// Power law of the worst |omega/|k| - 1 - delta| over a direction set.
inline CheckResult dispersion_scaling(Sampler& rng, const std::vector<double>& scales, int directions) {
  const KappaSet shape = rng.kappas(1.0);
  const auto dirs = fibonacci_directions(directions);
  std::vector<double> worst;
  for (double s : scales) {
    const KappaSet k = normalized_to(shape, s);
    const KFTensor kf = kf_from_kappas(k);
    double w = 0.0;
    for (const Vec3& kh : dirs) {
      const double delta = delta_nonbiref(k, kh);
      for (const AmpereRoot& r : solve_ampere(kf, kh)) w = std::max(w, std::abs(r.omega - 1.0 - delta));
    }
    worst.push_back(w);
  }
  return exponent_check("dispersion_scaling_exponent", "dispersion", scales, worst, 2.0)
      .note("worst residual " + std::to_string(worst.front()) + " at s = " + std::to_string(scales.front()));
}

// ------------------------------------------------------------- fock space

inline CheckResult metric_involution(const LadderAlgebra& alg) {
  const Eigen::VectorXd& s = alg.metric().signs();
  return CheckResult::equal("metric_involution", "fock_space", (s.array().square() - 1.0).abs().maxCoeff(), 0.0);
}

inline CheckResult interior_commutators(const LadderAlgebra& alg) {
  const FockSpace& sp = alg.space();
  double worst = 0.0;
  for (Direction d : kDirections)
    for (int r = 0; r < 4; ++r)
      for (Direction e : kDirections)
        for (int s = 0; s < 4; ++s) {
          OperatorMatrix c = commutator(alg.a(d, r), alg.abar(e, s));
          if (d == e && r == s) c -= zeta(r) * OperatorMatrix::identity(sp);
          worst = std::max(worst, interior_max_abs(c));
        }
  return CheckResult::below("interior_commutators", "fock_space", worst, 1e-13);
}

inline CheckResult bar_antihomomorphism(const LadderAlgebra& alg, Sampler& rng, int draws) {
  auto pick = [&]() {
    const Direction d = rng.uniform() < 0 ? Direction::plus : Direction::minus;
    const int r = std::min(3, static_cast<int>(rng.uniform(0.0, 4.0)));
    return Complex(rng.normal(), rng.normal()) * (rng.uniform() < 0 ? alg.a(d, r) : alg.abar(d, r));
  };
  double worst = 0.0;
  for (int n = 0; n < draws; ++n) {
    const OperatorMatrix x = pick() + pick() * pick();
    const OperatorMatrix y = pick() * pick() + pick();
    worst = std::max({worst, (alg.bar(x * y) - alg.bar(y) * alg.bar(x)).max_abs(), (alg.bar(alg.bar(x)) - x).max_abs()});
  }
  return CheckResult::below("bar_antihomomorphism", "fock_space", worst, 1e-12);
}

/// a_3 = (a_g - i a_d)/sqrt2 and a_0 = (a_g + i a_d)/sqrt2 recover the modes.
inline CheckResult dg_invertible(const LadderAlgebra& alg) {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  double worst = 0.0;
  for (Direction d : kDirections) {
    worst = std::max(worst, (h * (alg.a_g(d) - i * alg.a_d(d)) - alg.a(d, 3)).max_abs());
    worst = std::max(worst, (h * (alg.a_g(d) + i * alg.a_d(d)) - alg.a(d, 0)).max_abs());
  }
  return CheckResult::below("dg_invertible", "fock_space", worst, 1e-15);
}

// ------------------------------------------------------------ hamiltonian

inline CheckResult raw_equals_grouped(const HamiltonianTerms& t, Sampler& rng, int draws, int frames,
                                      double scale = 0.05) {
  std::vector<PolarizationFrame> fs;
  for (int n = 0; n < std::max(frames, 1); ++n) fs.push_back(polarization_frame(rng.unit_vector()));
  double worst = 0.0;
  for (int n = 0; n < draws; ++n) {
    const KappaSet k = rng.kappas(scale);
    const PolarizationFrame& f = fs[static_cast<std::size_t>(n) % fs.size()];
    worst = std::max(worst, (build_raw(t, kf_from_kappas(k), f) - build_grouped(t, k, f).total()).max_abs());
  }
  return CheckResult::below("raw_equals_grouped", "hamiltonian", worst, 1e-12)
      .note(std::to_string(draws) + " draws, " + std::to_string(fs.size()) + " frames, dim " +
            std::to_string(t.space().dim()));
}

inline CheckResult raw_equals_grouped_at(const HamiltonianTerms& t, const KappaSet& k, const PolarizationFrame& f) {
  const double err = (build_raw(t, kf_from_kappas(k), f) - build_grouped(t, k, f).total()).max_abs();
  return CheckResult::below("raw_equals_grouped_config", "hamiltonian", err, 1e-12);
}

inline CheckResult metric_hermiticity(const LadderAlgebra& alg, const HamiltonianBundle& b) {
  double worst = 0.0;
  for (const OperatorMatrix* h : {&b.h_t, &b.h_pm_t, &b.h_ls0, &b.h_ls_lv, &b.h_plus_tls, &b.h_minus_tls})
    worst = std::max(worst, (alg.bar(*h) - *h).max_abs());
  const OperatorMatrix h = b.total();
  worst = std::max(worst, (alg.bar(h) - h).max_abs());
  return CheckResult::below("metric_hermiticity", "hamiltonian", worst, 1e-13);
}

inline CheckResult xi_anti_self_adjoint(const LadderAlgebra& alg, const HamiltonianBundle& b) {
  return CheckResult::below("xi_anti_self_adjoint", "hamiltonian", (alg.bar(b.xi) + b.xi).max_abs(), 1e-13);
}

inline CheckResult metric_unitarity(const LadderAlgebra& alg, const OperatorMatrix& u) {
  const double err = (alg.bar(u) * u - OperatorMatrix::identity(alg.space())).max_abs();
  return CheckResult::below("metric_unitarity", "hamiltonian", err, 1e-10)
      .note("dim " + std::to_string(alg.space().dim()));
}

inline CheckResult free_number_conservation(const HamiltonianTerms& t) {
  const LadderAlgebra& alg = t.algebra();
  const OperatorMatrix h = build_grouped(t, KappaSet::zero(), polarization_frame(Vec3::UnitZ())).total();
  double worst = 0.0;
  for (Direction d : kDirections)
    for (int r = 1; r <= 2; ++r) worst = std::max(worst, commutator(alg.a(d, r).adjoint() * alg.a(d, r), h).max_abs());
  return CheckResult::equal("free_number_conservation", "hamiltonian", worst, 0.0);
}

struct GapSweep {
  std::vector<double> gap_residual;  // max |gap - 1 - delta|
  std::vector<double> cross_before;
  std::vector<double> cross_after;
};

/// Post-transform single-photon gaps and remaining (k, -k) pair couplings for
/// one coefficient shape at several overall sizes.
inline GapSweep gap_sweep(const HamiltonianTerms& t, const KappaSet& shape, const PolarizationFrame& f,
                          const std::vector<double>& scales) {
  GapSweep out;
  for (double s : scales) {
    const KappaSet k = normalized_to(shape, s);
    const FrameBilinears fb(k, f);
    const TransverseSpectrum spec = transverse_spectrum(t, build_grouped(t, k, f));
    double w = 0.0;
    for (int r = 0; r < 2; ++r)
      w = std::max({w, std::abs(spec.gap_plus[r] - 1.0 - fb.delta_plus()),
                    std::abs(spec.gap_minus[r] - 1.0 - fb.delta_minus())});
    out.gap_residual.push_back(w);
    out.cross_before.push_back(spec.pair_coupling_before);
    out.cross_after.push_back(spec.pair_coupling_after);
  }
  return out;
}

inline bool bitwise_equal(const SparseOp& a, const SparseOp& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
  const auto n = static_cast<std::size_t>(a.nonZeros());
  return std::equal(a.valuePtr(), a.valuePtr() + n, b.valuePtr()) &&
         std::equal(a.innerIndexPtr(), a.innerIndexPtr() + n, b.innerIndexPtr()) &&
         std::equal(a.outerIndexPtr(), a.outerIndexPtr() + a.outerSize() + 1, b.outerIndexPtr());
}

/// The momentum builder takes no coefficients, so building it beside a free
/// and a perturbed Hamiltonian must give the same bits.
inline CheckResult momentum_bitwise(const HamiltonianTerms& t, const KappaSet& k, const Vec3& kvec) {
  const LadderAlgebra& alg = t.algebra();
  const OperatorMatrix h_free = build_grouped(t, KappaSet::zero(), polarization_frame(unit(kvec))).total();
  const auto p_free = momentum_operator(alg, kvec);
  const OperatorMatrix h_lv = build_grouped(t, k, polarization_frame(unit(kvec))).total();
  const auto p_lv = momentum_operator(alg, kvec);
  int differing = 0;
  for (int c = 0; c < 3; ++c) differing += bitwise_equal(p_free[c].matrix(), p_lv[c].matrix()) ? 0 : 1;
  return CheckResult::equal("momentum_bitwise", "hamiltonian", differing, 0.0)
      .note("H changed by " + std::to_string((h_lv - h_free).max_abs()));
}

inline CheckResult momentum_conservation(const LadderAlgebra& alg, const Vec3& kvec, const OperatorMatrix& h) {
  const auto p = momentum_operator(alg, kvec);
  double worst = 0.0;
  for (int c = 0; c < 3; ++c) worst = std::max(worst, commutator(p[c], h).max_abs());
  return CheckResult::below("momentum_commutator", "hamiltonian", worst, 1e-12);
}

// ----------------------------------------------------------------- lorenz

inline CheckResult norm_classification(const FockSpace& sp) {
  int bad = 0;
  for (const DgOccupation& occ : dg_basis(sp)) {
    const StateClass c = classify(occ);
    const bool visible = c == StateClass::A || c == StateClass::C;
    if ((dg_metric_element(occ, occ) != Complex(0.0)) != visible) ++bad;
  }
  return CheckResult::equal("norm_classification", "lorenz", bad, 0.0);
}

inline CheckResult b_pairing(const FockSpace& sp) {
  const std::vector<DgOccupation> basis = dg_basis(sp);
  int bad = 0;
  for (const DgOccupation& b : basis) {
    if (classify(b) != StateClass::BPlus) continue;
    int partners = 0;
    for (const DgOccupation& other : basis) {
      const Complex e = dg_metric_element(b, other);
      if (e == Complex(0.0)) continue;
      ++partners;
      const int power = other.plus.ng - other.plus.nd + other.minus.ng - other.minus.nd;
      if (classify(other) != StateClass::BMinus || std::abs(e - std::pow(Complex(0, 1), power)) > 1e-15) ++bad;
    }
    if (partners != 1) ++bad;
  }
  return CheckResult::equal("b_pairing", "lorenz", bad, 0.0);
}

inline CheckResult counting_agreement() {
  const GhostSpace g;
  int mismatches = 0, compared = 0;
  for (Eigen::Index i = 0; i < g.space().dim(); ++i) {
    const GhostOccupation start = g.occupation(i);
    for (int n1 = 0; n1 <= 3; ++n1)
      for (int n2 = 0; n1 + n2 <= 3; ++n2) {
        if (!g.representable(start, n1, n2)) continue;
        ++compared;
        if (counting_oracle(start, n1, n2) != g.reaches_nonzero_norm(start, n1, n2)) ++mismatches;
      }
  }
  return CheckResult::equal("counting_oracle", "lorenz", mismatches, 0.0)
      .note(std::to_string(compared) + " cases on the dim " + std::to_string(g.space().dim()) + " ghost space");
}

inline Eigen::VectorXcd random_combination(const FockSpace& sp, Sampler& rng, const std::vector<DgOccupation>& pool,
                                           int terms) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(sp.dim());
  for (int t = 0; t < terms; ++t) {
    const auto pick = static_cast<std::size_t>(rng.uniform(0.0, 1.0) * pool.size()) % pool.size();
    v += Complex(rng.normal(), rng.normal()) * dg_basis_state(sp, pool[pick]);
  }
  return v;
}

inline OperatorMatrix random_transverse_observable(const LadderAlgebra& alg, Sampler& rng) {
  OperatorMatrix a = OperatorMatrix::zero(alg.space());
  for (Direction d : kDirections)
    for (int r = 1; r <= 2; ++r) a += rng.normal() * (alg.a(d, r).adjoint() * alg.a(d, r));
  const Complex c(rng.normal(), rng.normal());
  const OperatorMatrix swap = alg.a(Direction::plus, 1).adjoint() * alg.a(Direction::plus, 2);
  a += c * swap + std::conj(c) * swap.adjoint();
  const OperatorMatrix pair = alg.a(Direction::plus, 1) * alg.a(Direction::minus, 2);
  a += rng.normal() * (pair + pair.adjoint());
  return a;
}

inline CheckResult gupta_bleuler_inside_weak(const LadderAlgebra& alg, Sampler& rng, int draws) {
  const FockSpace& sp = alg.space();
  std::vector<DgOccupation> physical;
  for (const DgOccupation& occ : dg_basis(sp))
    if (occ.plus.nd == 0 && occ.minus.nd == 0) physical.push_back(occ);
  int bad = 0;
  for (int n = 0; n < draws; ++n) {
    const Eigen::VectorXcd psi = random_combination(sp, rng, physical, 4);
    if (!gupta_bleuler_check(alg, psi) || !weak_lorenz_check(alg, psi)) ++bad;
  }
  return CheckResult::equal("gupta_bleuler_within_weak", "lorenz", bad, 0.0);
}

/// Means of random transverse observables with and without random zero-norm,
/// orthogonal admixtures.  The admixture pool needs cutoff >= 2.
inline CheckResult indistinguishability(const LadderAlgebra& alg, Sampler& rng, int draws) {
  const FockSpace& sp = alg.space();
  std::vector<DgOccupation> reference, admixture;
  for (int n1 = 0; n1 <= 1; ++n1)
    for (int n2 = 0; n2 <= 1; ++n2)
      for (int m1 = 0; m1 <= 1; ++m1)
        for (int m2 = 0; m2 <= 1; ++m2) {
          for (int ng = 0; ng <= 2; ++ng) reference.push_back({{n1, n2, 0, ng}, {m1, m2, 0, 0}});
          for (int nd = 1; nd <= 2; ++nd) admixture.push_back({{n1, n2, 0, 0}, {m1, m2, nd, 0}});
        }
  double worst = 0.0;
  int done = 0;
  while (done < draws) {
    const Eigen::VectorXcd psi = random_combination(sp, rng, reference, 3);
    if (std::abs(alg.inner(psi, psi)) < 1e-3) continue;
    const Eigen::VectorXcd phi = random_combination(sp, rng, admixture, 3);
    const OperatorMatrix a = random_transverse_observable(alg, rng);
    const Complex c1(rng.normal(), rng.normal()), c2(rng.normal(), rng.normal());
    const ObservableMeans m = observable_indistinguishability(alg, psi, phi, c1, c2, a);
    worst = std::max(worst, std::abs(m.mean1 - m.mean2) / std::max(1.0, std::abs(m.mean1)));
    ++done;
  }
  return CheckResult::below("zero_norm_indistinguishability", "lorenz", worst, 1e-12)
      .note(std::to_string(draws) + " draws");
}

inline CheckResult ghost_decoupling(const LadderAlgebra& alg, Sampler& rng) {
  const FockSpace& sp = alg.space();
  const OperatorMatrix a = random_transverse_observable(alg, rng);
  const Eigen::VectorXcd base = transverse_state(sp, 1, 0, 0, 1) + 0.4 * transverse_state(sp, 0, 1, 1, 0);
  const Eigen::VectorXcd with_g =
      base + Complex(rng.normal(), rng.normal()) * dg_basis_state(sp, {{1, 0, 0, 2}, {0, 1, 0, 0}});
  const Complex m0 = alg.inner(base, a * base) / alg.inner(base, base);
  const Complex m1 = alg.inner(with_g, a * with_g) / alg.inner(with_g, with_g);
  return CheckResult::below("ghost_decoupling", "lorenz", std::abs(m0 - m1), 1e-12);
}

/// A deliberately inconsistent term c (a_d(k)^dag a_g(k)^dag + bar), which
/// creates C-class pairs straight out of the ghost vacuum.
inline OperatorMatrix c_leakage_fault(const LadderAlgebra& alg, double c) {
  const OperatorMatrix x = alg.a_d(Direction::plus).adjoint() * alg.a_g(Direction::plus).adjoint();
  return c * (x + alg.bar(x));
}

inline std::vector<CheckResult> leakage_checks(const LeakageReport& rep, bool expect_admixture) {
  std::vector<CheckResult> out;
  out.push_back(CheckResult::below("c_class_leakage", "lorenz", rep.c_leakage, 1e-10)
                    .note(std::to_string(rep.initial_states) + " initial states, " +
                          std::to_string(rep.forbidden_states) + " C-class states"));
  if (expect_admixture) out.push_back(CheckResult::above("b_class_admixture", "lorenz", rep.b_admixture, 1e-4));
  return out;
}

// ------------------------------------------------------------ interaction

/// The three constructed kappa_e- cases along z: diagonal, off-diagonal, mixed.
inline CheckResult coupling_closed_forms() {
  struct Case {
    double xx, yy, xy;
  };
  double worst = 0.0;
  for (const Case& c : {Case{3e-3, -1e-3, 0.0}, Case{0.0, 0.0, 2e-3}, Case{-2e-3, 5e-4, 1.5e-3}}) {
    KappaSet k;
    k.e_minus << c.xx, c.xy, 0.0, c.xy, c.yy, 0.0, 0.0, 0.0, -c.xx - c.yy;
    const CouplingTable t = vint_coefficients(k);
    const double d1 = 0.25 * (c.xx - c.yy), d2 = 0.5 * c.xy;
    worst = std::max({worst, std::abs(t.c[0][0] - (1.0 - d1)), std::abs(t.c[1][1] - (1.0 + d1)),
                      std::abs(t.c[0][1] + d2), std::abs(t.c[1][0] + d2),
                      std::abs((t.c[0][0] - t.c[1][1]) - 0.5 * (c.yy - c.xx))});
  }
  // the closed forms and the frame contraction may round apart in the last place
  return CheckResult::below("coupling_closed_forms", "interaction", worst, 5e-16);
}

inline CheckResult coupling_extraction(const HamiltonianTerms& t, Sampler& rng, int draws) {
  double worst = 0.0;
  for (int n = 0; n < draws; ++n) {
    const KappaSet k = rng.kappas(0.01);
    const Vec3 kh = rng.unit_vector();
    const TransformedPotentials p = transformed_potentials(t, k, polarization_frame(kh));
    const CouplingTable want = vint_coefficients(k, kh);
    const CouplingTable got = coupling_from_potentials(p.original, p.first_order);
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) worst = std::max(worst, std::abs(got.c[r][s] - want.c[r][s]));
  }
  return CheckResult::below("coupling_extraction", "interaction", worst, 1e-12);
}

inline CheckResult potentials_first_order(const HamiltonianTerms& t, Sampler& rng, const std::vector<double>& scales) {
  const KappaSet shape = rng.kappas(1.0);
  const PolarizationFrame f = polarization_frame(rng.unit_vector());
  std::vector<double> gap;
  for (double s : scales) {
    const TransformedPotentials p = transformed_potentials(t, normalized_to(shape, s), f);
    double w = 0.0;
    for (int r = 0; r < 2; ++r) w = std::max(w, interior_max_abs(p.exact[r] - p.first_order[r]));
    gap.push_back(w);
  }
  return exponent_check("potentials_first_order_exponent", "interaction", scales, gap, 2.0);
}

}  // namespace lvem::checks
