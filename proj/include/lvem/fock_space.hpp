#pragma once

#include "lvem/core.hpp"
#include "lvem/expm.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace lvem {

enum class Direction : int { plus = 0, minus = 1 };

inline constexpr std::array<Direction, 2> kDirections{Direction::plus, Direction::minus};

/// Diagonal commutator sign: [a_r, abar_s] = zeta_r delta_rs.
constexpr double zeta(int polarization) noexcept { return polarization == 0 ? -1.0 : 1.0; }

/// One of the eight modes: polarization r in {0,1,2,3} at momentum +k or -k.
struct ModeId {
  Direction direction = Direction::plus;
  int polarization = 0;

  constexpr int index() const { return 4 * static_cast<int>(direction) + polarization; }
  friend constexpr bool operator==(ModeId, ModeId) = default;
};

constexpr ModeId mode(Direction d, int r) { return {d, r}; }

/// Truncated bosonic Fock space: each of `modes` modes holds 0..cutoff quanta.
/// Basis states are ordered lexicographically with mode 0 most significant.
class FockSpace {
public:
  using Occupation = std::vector<int>;

  explicit FockSpace(int cutoff, int modes = 8) : cutoff_(cutoff), modes_(modes) {
    if (cutoff < 1 || cutoff > 4) throw InvalidInput("cutoff must lie in [1, 4]");
    if (modes < 1 || modes > 8) throw InvalidInput("mode count must lie in [1, 8]");
    dim_ = 1;
    for (int m = 0; m < modes_; ++m) dim_ *= cutoff_ + 1;
  }

  int cutoff() const { return cutoff_; }
  int modes() const { return modes_; }
  Eigen::Index dim() const { return dim_; }

  Eigen::Index stride(int m) const {
    Eigen::Index s = 1;
    for (int i = m + 1; i < modes_; ++i) s *= cutoff_ + 1;
    return s;
  }

  int occupation(Eigen::Index idx, int m) const {
    return static_cast<int>((idx / stride(m)) % (cutoff_ + 1));
  }

  Occupation occupation(Eigen::Index idx) const {
    Occupation occ(static_cast<std::size_t>(modes_));
    for (int m = modes_ - 1; m >= 0; --m) {
      occ[m] = static_cast<int>(idx % (cutoff_ + 1));
      idx /= cutoff_ + 1;
    }
    return occ;
  }

  Eigen::Index index(const Occupation& occ) const {
    if (static_cast<int>(occ.size()) != modes_) throw InvalidInput("occupation has wrong length");
    Eigen::Index idx = 0;
    for (int n : occ) {
      if (n < 0 || n > cutoff_) throw InvalidInput("occupation outside truncation");
      idx = idx * (cutoff_ + 1) + n;
    }
    return idx;
  }

  Eigen::VectorXcd basis_vector(const Occupation& occ) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim_);
    v[index(occ)] = 1.0;
    return v;
  }

  friend bool operator==(const FockSpace& a, const FockSpace& b) {
    return a.cutoff_ == b.cutoff_ && a.modes_ == b.modes_;
  }

private:
  int cutoff_;
  int modes_;
  Eigen::Index dim_ = 1;
};

inline FockSpace build_space(int cutoff) { return FockSpace(cutoff); }

/// Sparse operator tagged with the Fock space it acts on.  Arithmetic between
/// operators of different spaces throws SpaceMismatch.
class OperatorMatrix {
public:
  OperatorMatrix(const FockSpace& space, SparseOp m) : space_(space), m_(std::move(m)) {
    if (m_.rows() != space_.dim() || m_.cols() != space_.dim())
      throw SpaceMismatch("operator dimension does not match its space");
  }

  static OperatorMatrix zero(const FockSpace& space) {
    return {space, SparseOp(space.dim(), space.dim())};
  }
  static OperatorMatrix identity(const FockSpace& space) {
    SparseOp id(space.dim(), space.dim());
    id.setIdentity();
    return {space, std::move(id)};
  }

  const FockSpace& space() const { return space_; }
  const SparseOp& matrix() const { return m_; }
  Eigen::Index dim() const { return space_.dim(); }

  OperatorMatrix adjoint() const { return {space_, SparseOp(m_.adjoint())}; }

  double max_abs() const {
    double r = 0.0;
    for (Eigen::Index k = 0; k < m_.outerSize(); ++k)
      for (SparseOp::InnerIterator it(m_, k); it; ++it) r = std::max(r, std::abs(it.value()));
    return r;
  }

  OperatorMatrix& operator+=(const OperatorMatrix& o) {
    check(o);
    m_ += o.m_;
    return *this;
  }
  OperatorMatrix& operator-=(const OperatorMatrix& o) {
    check(o);
    m_ -= o.m_;
    return *this;
  }
  OperatorMatrix& operator*=(Complex s) {
    m_ *= s;
    return *this;
  }

  friend OperatorMatrix operator+(OperatorMatrix a, const OperatorMatrix& b) { return a += b; }
  friend OperatorMatrix operator-(OperatorMatrix a, const OperatorMatrix& b) { return a -= b; }
  friend OperatorMatrix operator-(OperatorMatrix a) { return a *= -1.0; }
  friend OperatorMatrix operator*(Complex s, OperatorMatrix a) { return a *= s; }
  friend OperatorMatrix operator*(double s, OperatorMatrix a) { return a *= s; }
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    a.check(b);
    return {a.space_, SparseOp((a.m_ * b.m_).pruned())};
  }
  friend Eigen::VectorXcd operator*(const OperatorMatrix& a, const Eigen::VectorXcd& v) {
    if (v.size() != a.dim()) throw SpaceMismatch("state dimension does not match operator");
    return a.m_ * v;
  }

private:
  void check(const OperatorMatrix& o) const {
    if (!(space_ == o.space_)) throw SpaceMismatch("operators belong to different Fock spaces");
  }

  FockSpace space_;
  SparseOp m_;
};

inline OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  return a * b - b * a;
}

/// Annihilation operator for a raw mode index of the space.
inline OperatorMatrix annihilator(const FockSpace& space, int mode_index) {
  if (mode_index < 0 || mode_index >= space.modes()) throw InvalidInput("mode index out of range");
  const Eigen::Index stride = space.stride(mode_index);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(space.dim()));
  for (Eigen::Index i = 0; i < space.dim(); ++i) {
    const int n = space.occupation(i, mode_index);
    if (n > 0) trip.emplace_back(i - stride, i, std::sqrt(static_cast<double>(n)));
  }
  SparseOp a(space.dim(), space.dim());
  a.setFromTriplets(trip.begin(), trip.end());
  return {space, std::move(a)};
}

inline OperatorMatrix annihilator(const FockSpace& space, ModeId m) {
  if (space.modes() != 8) throw InvalidInput("ModeId addressing needs the eight-mode photon space");
  if (m.polarization < 0 || m.polarization > 3) throw InvalidInput("polarization must be 0..3");
  return annihilator(space, m.index());
}

inline OperatorMatrix creator(const FockSpace& space, ModeId m) {
  return annihilator(space, m).adjoint();
}

/// Diagonal metric operator M = (-1)^(n_0(+k) + n_0(-k)).
class MetricOperator {
public:
  explicit MetricOperator(const FockSpace& space) : space_(space), signs_(space.dim()) {
    const bool photon = space.modes() == 8;
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
      const int n0 = photon ? space.occupation(i, 0) + space.occupation(i, 4) : 0;
      signs_[i] = (n0 % 2 == 0) ? 1.0 : -1.0;
    }
  }

  const FockSpace& space() const { return space_; }
  const Eigen::VectorXd& signs() const { return signs_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const {
    if (v.size() != space_.dim()) throw SpaceMismatch("state dimension does not match metric");
    return signs_.cast<Complex>().cwiseProduct(v);
  }

  OperatorMatrix as_operator() const {
    SparseOp m(space_.dim(), space_.dim());
    std::vector<Eigen::Triplet<Complex>> trip;
    for (Eigen::Index i = 0; i < space_.dim(); ++i) trip.emplace_back(i, i, signs_[i]);
    m.setFromTriplets(trip.begin(), trip.end());
    return {space_, std::move(m)};
  }

private:
  FockSpace space_;
  Eigen::VectorXd signs_;
};

inline MetricOperator metric_M(const FockSpace& space) { return MetricOperator(space); }

/// Adjoint with respect to the indefinite metric: Abar = M A^dagger M.
inline OperatorMatrix bar_adjoint(const MetricOperator& metric, const OperatorMatrix& a) {
  if (!(metric.space() == a.space())) throw SpaceMismatch("metric and operator spaces differ");
  SparseOp m = a.matrix().adjoint();
  const Eigen::VectorXd& s = metric.signs();
  for (Eigen::Index k = 0; k < m.outerSize(); ++k)
    for (SparseOp::InnerIterator it(m, k); it; ++it) it.valueRef() *= s[it.row()] * s[it.col()];
  return {a.space(), std::move(m)};
}

inline OperatorMatrix bar_adjoint(const FockSpace& space, const OperatorMatrix& a) {
  return bar_adjoint(metric_M(space), a);
}

/// <psi|M|phi>.
inline Complex indefinite_inner(const MetricOperator& metric, const Eigen::VectorXcd& psi,
                                const Eigen::VectorXcd& phi) {
  return psi.dot(metric.apply(phi));
}

inline Complex indefinite_inner(const FockSpace& space, const Eigen::VectorXcd& psi,
                                const Eigen::VectorXcd& phi) {
  return indefinite_inner(metric_M(space), psi, phi);
}

/// Ghost-mode combinations a_d = (i/sqrt2)(a_3 - a_0), a_g = (1/sqrt2)(a_3 + a_0).
struct DgPair {
  OperatorMatrix a_d;
  OperatorMatrix a_g;
};

inline DgPair dg_operators(const FockSpace& space, Direction dir) {
  const OperatorMatrix a0 = annihilator(space, mode(dir, 0));
  const OperatorMatrix a3 = annihilator(space, mode(dir, 3));
  const double h = 1.0 / std::sqrt(2.0);
  return {Complex(0.0, h) * (a3 - a0), h * (a3 + a0)};
}

/// Occupations in the transverse and d/g basis for one momentum direction.
struct DgModes {
  int n1 = 0;
  int n2 = 0;
  int nd = 0;
  int ng = 0;
  friend bool operator==(const DgModes&, const DgModes&) = default;
};

struct DgOccupation {
  DgModes plus;
  DgModes minus;

  const DgModes& operator[](Direction d) const { return d == Direction::plus ? plus : minus; }
  DgModes& operator[](Direction d) { return d == Direction::plus ? plus : minus; }
  friend bool operator==(const DgOccupation&, const DgOccupation&) = default;
};

namespace detail {

inline double inv_sqrt_factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return 1.0 / std::sqrt(f);
}

inline Eigen::VectorXcd apply_power(const OperatorMatrix& op, Eigen::VectorXcd v, int n) {
  for (int i = 0; i < n; ++i) v = op * v;
  return v;
}

}  // namespace detail

/// Normalized |n1, n2, n_d, n_g> (+k) x |n1', n2', n_d', n_g'> (-k), created with
/// the ordinary adjoints of the ladder operators.  Throws if the expansion in the
/// a_0/a_3 basis would exceed the truncation.
inline Eigen::VectorXcd dg_basis_state(const FockSpace& space, const DgOccupation& occ) {
  if (space.modes() != 8) throw InvalidInput("d/g basis states live in the eight-mode space");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.dim());
  v[0] = 1.0;
  for (Direction d : kDirections) {
    const DgModes& m = occ[d];
    if (m.n1 < 0 || m.n2 < 0 || m.nd < 0 || m.ng < 0) throw InvalidInput("negative occupation");
    if (m.n1 > space.cutoff() || m.n2 > space.cutoff() || m.nd + m.ng > space.cutoff())
      throw InvalidInput("d/g occupation overflows the truncation");
    const DgPair dg = dg_operators(space, d);
    v = detail::apply_power(creator(space, mode(d, 1)), v, m.n1) * detail::inv_sqrt_factorial(m.n1);
    v = detail::apply_power(creator(space, mode(d, 2)), v, m.n2) * detail::inv_sqrt_factorial(m.n2);
    v = detail::apply_power(dg.a_d.adjoint(), v, m.nd) * detail::inv_sqrt_factorial(m.nd);
    v = detail::apply_power(dg.a_g.adjoint(), v, m.ng) * detail::inv_sqrt_factorial(m.ng);
  }
  return v;
}

/// Cached ladder operators of the eight-mode space.  Immutable once built.
class LadderAlgebra {
public:
  explicit LadderAlgebra(const FockSpace& space) : space_(space), metric_(space) {
    if (space.modes() != 8) throw InvalidInput("LadderAlgebra needs the eight-mode photon space");
    a_.reserve(8);
    bar_.reserve(8);
    for (Direction d : kDirections)
      for (int r = 0; r < 4; ++r) {
        a_.push_back(annihilator(space, mode(d, r)));
        bar_.push_back(bar_adjoint(metric_, a_.back()));
      }
    for (Direction d : kDirections) dg_.push_back(dg_operators(space, d));
  }

  const FockSpace& space() const { return space_; }
  const MetricOperator& metric() const { return metric_; }

  const OperatorMatrix& a(Direction d, int r) const { return a_[mode(d, r).index()]; }
  const OperatorMatrix& abar(Direction d, int r) const { return bar_[mode(d, r).index()]; }
  const OperatorMatrix& a_d(Direction d) const { return dg_[static_cast<int>(d)].a_d; }
  const OperatorMatrix& a_g(Direction d) const { return dg_[static_cast<int>(d)].a_g; }
  OperatorMatrix bar(const OperatorMatrix& op) const { return bar_adjoint(metric_, op); }

  Complex inner(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& phi) const {
    return indefinite_inner(metric_, psi, phi);
  }

private:
  FockSpace space_;
  MetricOperator metric_;
  std::vector<OperatorMatrix> a_;
  std::vector<OperatorMatrix> bar_;
  std::vector<DgPair> dg_;
};

}  // namespace lvem
