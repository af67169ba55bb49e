#pragma once

#include "lvem/fock_space.hpp"
#include "lvem/hamiltonian.hpp"


#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace lvem {

enum class StateClass { A, BPlus, BMinus, C };

inline std::string to_string(StateClass c) {
  switch (c) {
    case StateClass::A: return "A";
    case StateClass::BPlus: return "B+";
    case StateClass::BMinus: return "B-";
    case StateClass::C: return "C";
  }
  return "?";
}

/// Raised by checks whose inputs do not satisfy the stated preconditions.
class PreconditionViolation : public InvalidInput {
public:
  PreconditionViolation(const std::string& condition, const std::string& detail)
      : InvalidInput(condition + ": " + detail), condition_(condition) {}
  const std::string& condition() const { return condition_; }

private:
  std::string condition_;
};

/// Ghost-class label of a d/g basis state.  B+ and B- are distinguished by the
/// sign of n_d - n_g in the first direction (+k before -k) where it is nonzero.
inline StateClass classify(const DgOccupation& occ) {
  for (Direction d : kDirections) {
    const DgModes& m = occ[d];
    if (m.nd < 0 || m.ng < 0 || m.n1 < 0 || m.n2 < 0) throw InvalidInput("negative occupation");
  }
  for (Direction d : kDirections) {
    const DgModes& m = occ[d];
    if (m.nd != m.ng) return m.nd > m.ng ? StateClass::BPlus : StateClass::BMinus;
  }
  const bool empty = occ.plus.nd == 0 && occ.minus.nd == 0;
  return empty ? StateClass::A : StateClass::C;
}

/// The unique basis state with nonzero indefinite overlap: d and g swapped.
inline DgOccupation metric_partner(DgOccupation occ) {
  for (Direction d : kDirections) std::swap(occ[d].nd, occ[d].ng);
  return occ;
}

/// Closed-form <n|M|n'> between normalized d/g basis states:
/// transverse Kronecker deltas times i^(n_g' - n_d') delta(n_g, n_d') delta(n_d, n_g')
/// in each direction.
inline Complex dg_metric_element(const DgOccupation& bra, const DgOccupation& ket) {
  Complex out = 1.0;
  for (Direction d : kDirections) {
    const DgModes& n = bra[d];
    const DgModes& p = ket[d];
    if (n.n1 != p.n1 || n.n2 != p.n2 || n.ng != p.nd || n.nd != p.ng) return 0.0;
    const int e = ((p.ng - p.nd) % 4 + 4) % 4;
    static constexpr std::array<Complex, 4> powers{Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                                                   Complex(0, -1)};
    out *= powers[static_cast<std::size_t>(e)];
  }
  return out;
}

/// a_d(+k) psi = a_d(-k) psi = 0, together with the bra condition
/// <psi|M(-i a_g^dagger) = 0 in both directions.
inline bool gupta_bleuler_check(const LadderAlgebra& alg, const Eigen::VectorXcd& psi,
                                double tol = kDefaultTolerance) {
  const double scale = psi.norm();
  if (scale == 0.0) return true;
  const Complex mi(0.0, -1.0);
  for (Direction d : kDirections) {
    if ((alg.a_d(d) * psi).norm() >= tol * scale) return false;
    // row vector psi^dagger M (-i a_g^dagger) is the adjoint of (i a_g) M psi
    const Eigen::VectorXcd bra = (-mi) * (alg.a_g(d) * alg.metric().apply(psi));
    if (bra.norm() >= tol * scale) return false;
  }
  return true;
}

namespace detail {

/// Split of the eight-mode basis into a transverse index (modes 1,2,5,6)
/// and a ghost index (modes 0,3,4,7), each in base cutoff+1.
struct SectorSplit {
  Eigen::Index transverse = 0;
  Eigen::Index ghost = 0;
};

inline SectorSplit split_index(const FockSpace& sp, Eigen::Index i) {
  static constexpr std::array<int, 4> tmodes{1, 2, 5, 6};
  static constexpr std::array<int, 4> gmodes{0, 3, 4, 7};
  SectorSplit s;
  for (int m : tmodes) s.transverse = s.transverse * (sp.cutoff() + 1) + sp.occupation(i, m);
  for (int m : gmodes) s.ghost = s.ghost * (sp.cutoff() + 1) + sp.occupation(i, m);
  return s;
}

inline Eigen::Index sector_size(const FockSpace& sp) {
  Eigen::Index n = 1;
  for (int k = 0; k < 4; ++k) n *= sp.cutoff() + 1;
  return n;
}

}  // namespace detail

/// Ghost Gram matrix of the part of psi outside the ghost vacuum:
/// G_{TT'} = sum over ghost configurations of conj(phi_{T,g}) M_g phi_{T',g}.
inline Eigen::MatrixXcd ghost_gram(const LadderAlgebra& alg, const Eigen::VectorXcd& psi) {
  const FockSpace& sp = alg.space();
  const Eigen::Index n = detail::sector_size(sp);
  Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(n, n);  // rows transverse, cols ghost
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < sp.dim(); ++i) {
    const auto s = detail::split_index(sp, i);
    sign[s.ghost] = alg.metric().signs()[i];
    if (s.ghost != 0) phi(s.transverse, s.ghost) = psi[i];
  }
  return phi.conjugate() * sign.asDiagonal() * phi.transpose();
}

/// Weak Lorenz condition read through the partition of the state space: psi
/// is consistent when its component outside the ghost vacuum is invisible to
/// every transverse observable, i.e. its ghost Gram matrix vanishes.  Any
/// state passing the Gupta-Bleuler check passes this one.
inline bool weak_lorenz_check(const LadderAlgebra& alg, const Eigen::VectorXcd& psi,
                              double tol = kDefaultTolerance) {
  const double scale = psi.squaredNorm();
  if (scale == 0.0) return true;
  if (gupta_bleuler_check(alg, psi, tol)) return true;
  return ghost_gram(alg, psi).cwiseAbs().maxCoeff() < tol * scale;
}

struct ObservableMeans {
  Complex mean1;  // in psi
  Complex mean2;  // in c1 psi + c2 phi
};

/// Indefinite-metric means of a transverse observable in psi and in a
/// superposition with a zero-norm, psi-orthogonal admixture phi.
inline ObservableMeans observable_indistinguishability(const LadderAlgebra& alg,
                                                       const Eigen::VectorXcd& psi,
                                                       const Eigen::VectorXcd& phi, Complex c1,
                                                       Complex c2, const OperatorMatrix& a,
                                                       double tol = kDefaultTolerance) {
  const double scale = std::max(psi.squaredNorm(), phi.squaredNorm());
  for (Direction d : kDirections)
    for (int r : {0, 3}) {
      const double leak = std::max(commutator(a, alg.a(d, r)).max_abs(),
                                   commutator(a, alg.a(d, r).adjoint()).max_abs());
      if (leak > tol * std::max(1.0, a.max_abs()))
        throw PreconditionViolation("transverse_observable", "observable acts on ghost modes");
    }
  if (std::abs(alg.inner(phi, phi)) > tol * scale)
    throw PreconditionViolation("zero_norm_admixture", "<phi|phi> must vanish");
  if (std::abs(alg.inner(psi, phi)) > tol * scale)
    throw PreconditionViolation("orthogonal_admixture", "<psi|phi> must vanish");
  const Complex npsi = alg.inner(psi, psi);
  if (std::abs(npsi) <= tol * scale)
    throw PreconditionViolation("nonzero_norm_reference", "<psi|psi> must not vanish");

  const Eigen::VectorXcd chi = c1 * psi + c2 * phi;
  const Complex nchi = alg.inner(chi, chi);
  return {alg.inner(psi, a * psi) / npsi, alg.inner(chi, a * chi) / nchi};
}

/// Ghost occupations (n_d, n_g) at +k and (n_d', n_g') at -k.
struct GhostOccupation {
  int nd = 0;
  int ng = 0;
  int nd_m = 0;
  int ng_m = 0;
  friend bool operator==(const GhostOccupation&, const GhostOccupation&) = default;
};

/// Whether N1 applications of the Lorentz-violating scalar/longitudinal block
/// after N2 applications of the mixed transverse/ghost blocks can take the
/// given ghost occupations to a nonzero-norm configuration (n_d = n_g in each
/// direction).  Every term of both blocks raises d(+k) and g(-k) and lowers
/// g(+k) and d(-k); any ordering of a move multiset is therefore admissible
/// exactly when the lowered occupations stay nonnegative at the end.
inline bool counting_oracle(const GhostOccupation& n, int n1, int n2) {
  if (n.nd < 0 || n.ng < 0 || n.nd_m < 0 || n.ng_m < 0 || n1 < 0 || n2 < 0)
    throw InvalidInput("counting_oracle needs nonnegative integers");
  // LSLV moves: w1 (d+ up, g+ down), x1 (d- down, g- up), y1 (g+ down, d- down), z1 (d+ up, g- up)
  // mixed moves: w2 (d+ up), x2 (d- down), y2 (g+ down), z2 (g- up)
  for (int w1 = 0; w1 <= n1; ++w1)
    for (int x1 = 0; w1 + x1 <= n1; ++x1)
      for (int y1 = 0; w1 + x1 + y1 <= n1; ++y1) {
        const int z1 = n1 - w1 - x1 - y1;
        for (int w2 = 0; w2 <= n2; ++w2)
          for (int x2 = 0; w2 + x2 <= n2; ++x2)
            for (int y2 = 0; w2 + x2 + y2 <= n2; ++y2) {
              const int z2 = n2 - w2 - x2 - y2;
              const int md = n.nd + w1 + z1 + w2;
              const int mg = n.ng - w1 - y1 - y2;
              const int mdm = n.nd_m - x1 - y1 - x2;
              const int mgm = n.ng_m + x1 + z1 + z2;
              if (mg >= 0 && mdm >= 0 && md == mg && mdm == mgm) return true;
            }
      }
  return false;
}

/// Four independent bosons d(+k), g(+k), d(-k), g(-k) in the physical metric,
/// carrying the ghost parts of the Hamiltonian with unit coefficients.
class GhostSpace {
public:
  static constexpr int kCutoff = 3;

  GhostSpace() : space_(kCutoff, 4) {
    for (int m = 0; m < 4; ++m) b_.push_back(annihilator(space_, m));
    const Complex i(0.0, 1.0);
    const OperatorMatrix &d = b_[0], &g = b_[1], &dm = b_[2], &gm = b_[3];
    lslv_ = -i * (g * d.adjoint() - gm.adjoint() * dm) - i * (g * dm - gm.adjoint() * d.adjoint());
    mixed_ = i * d.adjoint() + i * dm + g - gm.adjoint();
  }

  const FockSpace& space() const { return space_; }
  /// Ghost factor of the scalar/longitudinal Lorentz-violating block.
  const OperatorMatrix& lslv() const { return lslv_; }
  /// Ghost factor shared by the mixed transverse/ghost blocks.
  const OperatorMatrix& mixed() const { return mixed_; }

  Eigen::Index index(const GhostOccupation& n) const {
    return space_.index({n.nd, n.ng, n.nd_m, n.ng_m});
  }
  GhostOccupation occupation(Eigen::Index i) const {
    const auto o = space_.occupation(i);
    return {o[0], o[1], o[2], o[3]};
  }

  /// lslv^N1 mixed^N2 |n>.
  Eigen::VectorXcd evolve(const GhostOccupation& n, int n1, int n2) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space_.dim());
    v[index(n)] = 1.0;
    for (int k = 0; k < n2; ++k) v = mixed_ * v;
    for (int k = 0; k < n1; ++k) v = lslv_ * v;
    return v;
  }

  /// True when the product reaches a nonzero-norm configuration with
  /// amplitude above tol.
  bool reaches_nonzero_norm(const GhostOccupation& n, int n1, int n2, double tol = 1e-12) const {
    const Eigen::VectorXcd v = evolve(n, n1, n2);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const GhostOccupation m = occupation(i);
      if (m.nd == m.ng && m.nd_m == m.ng_m && std::abs(v[i]) > tol) return true;
    }
    return false;
  }

  /// Start configurations for which N1 + N2 steps cannot hit the truncation.
  bool representable(const GhostOccupation& n, int n1, int n2) const {
    const int steps = n1 + n2;
    return n.nd + steps <= kCutoff && n.ng_m + steps <= kCutoff && n.ng <= kCutoff &&
           n.nd_m <= kCutoff;
  }

private:
  FockSpace space_;
  std::vector<OperatorMatrix> b_;
  OperatorMatrix lslv_ = OperatorMatrix::zero(space_);
  OperatorMatrix mixed_ = OperatorMatrix::zero(space_);
};

/// Every d/g basis occupation representable at the space's cutoff.
inline std::vector<DgOccupation> dg_basis(const FockSpace& sp) {
  std::vector<DgOccupation> out;
  const int n = sp.cutoff();
  std::vector<DgModes> single;
  for (int n1 = 0; n1 <= n; ++n1)
    for (int n2 = 0; n2 <= n; ++n2)
      for (int nd = 0; nd <= n; ++nd)
        for (int ng = 0; nd + ng <= n; ++ng) single.push_back({n1, n2, nd, ng});
  for (const DgModes& p : single)
    for (const DgModes& m : single) out.push_back({p, m});
  return out;
}

struct LeakageReport {
  double c_leakage = 0.0;    // largest C-sector weight sum_c |<c|M|psi_j>|^2 of any evolved state
  double b_admixture = 0.0;  // largest physical weight outside the ghost vacuum
  double worst_time = 0.0;   // checkpoint at which c_leakage was reached
  std::size_t initial_states = 0;
  std::size_t forbidden_states = 0;
  int checkpoints = 0;
};

namespace detail {

/// Ghost-vacuum basis states whose transverse occupations all sit below the
/// cutoff.  States already at the ceiling feel the truncation at first order
/// and are left out.
inline std::vector<Eigen::Index> leakage_initial_states(const FockSpace& sp) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < sp.dim(); ++i) {
    if (split_index(sp, i).ghost != 0) continue;
    bool inside = true;
    for (int m : {1, 2, 5, 6}) inside = inside && sp.occupation(i, m) < sp.cutoff();
    if (inside) out.push_back(i);
  }
  return out;
}

/// Measures evolved states against every representable C-class state.  Each
/// C-class basis state is its own metric partner, so the coefficient of |c>
/// in a state is <c|M|psi> up to a unit phase and the C-sector weight is the
/// squared column norm of the overlap matrix.
class LeakageProbe {
public:
  explicit LeakageProbe(const LadderAlgebra& alg) {
    const FockSpace& sp = alg.space();
    std::vector<DgOccupation> forbidden;
    for (const DgOccupation& occ : dg_basis(sp))
      if (classify(occ) == StateClass::C) forbidden.push_back(occ);
    dual_.resize(sp.dim(), static_cast<Eigen::Index>(forbidden.size()));
    for (std::size_t c = 0; c < forbidden.size(); ++c)
      dual_.col(static_cast<Eigen::Index>(c)) = alg.metric().apply(dg_basis_state(sp, forbidden[c]));
    ghostly_.resize(static_cast<std::size_t>(sp.dim()));
    for (Eigen::Index i = 0; i < sp.dim(); ++i) ghostly_[i] = split_index(sp, i).ghost != 0;
  }

  std::size_t forbidden_states() const { return static_cast<std::size_t>(dual_.cols()); }

  /// Folds the states at one time into the running report.
  void record(const Eigen::MatrixXcd& evolved, double time, LeakageReport& rep) const {
    ++rep.checkpoints;
    rep.initial_states = static_cast<std::size_t>(evolved.cols());
    rep.forbidden_states = forbidden_states();
    if (dual_.cols() > 0 && evolved.cols() > 0) {
      const double c = (dual_.adjoint() * evolved).colwise().squaredNorm().maxCoeff();
      if (c > rep.c_leakage) {
        rep.c_leakage = c;
        rep.worst_time = time;
      }
    }
    for (Eigen::Index j = 0; j < evolved.cols(); ++j) {
      double w = 0.0;
      for (Eigen::Index i = 0; i < evolved.rows(); ++i)
        if (ghostly_[i]) w += std::norm(evolved(i, j));
      rep.b_admixture = std::max(rep.b_admixture, w);
    }
  }

private:
  Eigen::MatrixXcd dual_;
  std::vector<char> ghostly_;
};

}  // namespace detail

/// Leakage of interior A-class (ghost vacuum) states into C-class states
/// under a precomputed propagator U.
inline LeakageReport invariance_leakage(const LadderAlgebra& alg, const OperatorMatrix& u) {
  if (!(u.space() == alg.space())) throw SpaceMismatch("propagator and algebra spaces differ");
  const auto initial = detail::leakage_initial_states(alg.space());
  Eigen::MatrixXcd evolved(alg.space().dim(), static_cast<Eigen::Index>(initial.size()));
  for (std::size_t j = 0; j < initial.size(); ++j)
    evolved.col(static_cast<Eigen::Index>(j)) = u.matrix().col(initial[j]);
  LeakageReport rep;
  detail::LeakageProbe(alg).record(evolved, 0.0, rep);
  return rep;
}

/// Same under exp(-i H t'), taking the worst value over `checkpoints` equally
/// spaced times t' in (0, t].  States are propagated as vectors.
inline LeakageReport invariance_leakage(const LadderAlgebra& alg, const OperatorMatrix& h, double t,
                                        int checkpoints = 8) {
  if (!(std::abs(t) <= 10.0)) throw InvalidInput("leakage horizon must satisfy |t omega| <= 10");
  if (checkpoints < 1) throw InvalidInput("need at least one checkpoint");
  if (!(h.space() == alg.space())) throw SpaceMismatch("Hamiltonian and algebra spaces differ");
  const FockSpace& sp = alg.space();
  const SparseOp& hm = h.matrix();
  const auto initial = detail::leakage_initial_states(sp);
  Eigen::MatrixXcd evolved = Eigen::MatrixXcd::Zero(sp.dim(), static_cast<Eigen::Index>(initial.size()));
  for (std::size_t j = 0; j < initial.size(); ++j) evolved(initial[j], static_cast<Eigen::Index>(j)) = 1.0;
  const detail::LeakageProbe probe(alg);
  const double dt = t / checkpoints;
  LeakageReport rep;
  for (int step = 1; step <= checkpoints; ++step) {
    for (Eigen::Index j = 0; j < evolved.cols(); ++j)
      evolved.col(j) = expm_action(hm, evolved.col(j), Complex(0.0, -dt));
    probe.record(evolved, step * dt, rep);
  }
  return rep;
}

inline LeakageReport invariance_leakage(const HamiltonianTerms& terms, const HamiltonianBundle& h, double t,
                                        int checkpoints = 8) {
  return invariance_leakage(terms.algebra(), h.total(), t, checkpoints);
}

}  // namespace lvem
