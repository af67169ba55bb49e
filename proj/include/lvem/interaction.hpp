#pragma once

#include "lvem/hamiltonian.hpp"

#include <array>
#include <vector>

namespace lvem {

/// delta_1 = (q11 - q22)/4 and delta_2 = q12/2 in the frame of the mode.
struct CouplingDeltas {
  double delta1 = 0.0;
  double delta2 = 0.0;
};

inline CouplingDeltas coupling_deltas(const KappaSet& k, const PolarizationFrame& f) {
  const FrameBilinears b(k, f);
  return {0.25 * (b.q(1, 1) - b.q(2, 2)), 0.5 * b.q(1, 2)};
}

/// Transverse potentials A_r = a_r(k) + abar_r(-k) before and after exp(Xi).
struct TransformedPotentials {
  std::array<OperatorMatrix, 2> original;
  std::array<OperatorMatrix, 2> exact;        // exp(Xi) A_r exp(-Xi)
  std::array<OperatorMatrix, 2> first_order;  // (1 -/+ delta1) A_r - delta2 A_other
  CouplingDeltas deltas;
};

inline TransformedPotentials transformed_potentials(const HamiltonianTerms& t, const KappaSet& k,
                                                    const PolarizationFrame& f) {
  const LadderAlgebra& alg = t.algebra();
  const OperatorMatrix xi = xi_generators(t, k, f);
  const SimilarityTransform st(xi);
  const CouplingDeltas d = coupling_deltas(k, f);
  std::array<OperatorMatrix, 2> a{alg.a(Direction::plus, 1) + alg.abar(Direction::minus, 1),
                                  alg.a(Direction::plus, 2) + alg.abar(Direction::minus, 2)};
  return {a,
          {st.conjugate(a[0]), st.conjugate(a[1])},
          {(1.0 - d.delta1) * a[0] - d.delta2 * a[1], (1.0 + d.delta1) * a[1] - d.delta2 * a[0]},
          d};
}

/// Multipliers of the current in the transverse coupling: the potential
/// barA_r couples to sum_s c[r][s] j_s, and A_r to the same combination of j_s*.
struct CouplingTable {
  std::array<std::array<double, 2>, 2> c{{{1.0, 0.0}, {0.0, 1.0}}};

  std::array<Complex, 2> apply(const std::array<Complex, 2>& j) const {
    return {c[0][0] * j[0] + c[0][1] * j[1], c[1][0] * j[0] + c[1][1] * j[1]};
  }
};

inline CouplingTable vint_coefficients(const KappaSet& k, const Vec3& khat = Vec3::UnitZ()) {
  const CouplingDeltas d = coupling_deltas(k, polarization_frame(khat));
  CouplingTable t;
  t.c = {{{1.0 - d.delta1, -d.delta2}, {-d.delta2, 1.0 + d.delta1}}};
  return t;
}

/// Reads the table off a transformed potential pair by projecting each A'_r
/// on the untransformed A_s.  The projection only uses matrix elements between
/// interior states: over the full truncated space the first-order part of
/// exp(Xi) A exp(-Xi) integrates to zero against A, because the truncation
/// ceiling cancels it.
inline CouplingTable coupling_from_potentials(const std::array<OperatorMatrix, 2>& original,
                                              const std::array<OperatorMatrix, 2>& transformed) {
  const FockSpace& sp = original[0].space();
  std::vector<char> inside(static_cast<std::size_t>(sp.dim()), 0);
  for (Eigen::Index i : interior_indices(sp)) inside[i] = 1;
  auto project = [&](const OperatorMatrix& x, const OperatorMatrix& y) {
    const SparseOp prod = x.matrix().conjugate().cwiseProduct(y.matrix());
    Complex sum = 0.0;
    for (Eigen::Index k = 0; k < prod.outerSize(); ++k)
      if (inside[k])
        for (SparseOp::InnerIterator it(prod, k); it; ++it)
          if (inside[it.row()]) sum += it.value();
    return sum;
  };
  CouplingTable t;
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s) {
      // coefficient of A_s inside A'_r lands in row s, column r
      t.c[s][r] = (project(original[s], transformed[r]) / project(original[s], original[s])).real();
    }
  return t;
}

}  // namespace lvem
