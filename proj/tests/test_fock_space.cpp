#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lvem;

namespace {

Eigen::MatrixXcd dense(const OperatorMatrix& op) { return Eigen::MatrixXcd(op.matrix()); }

double max_abs_diff(const OperatorMatrix& a, const OperatorMatrix& b) { return (a - b).max_abs(); }

}  // namespace

TEST(FockSpace, DimensionsAndBounds) {
  EXPECT_EQ(build_space(1).dim(), 256);
  EXPECT_EQ(build_space(2).dim(), 6561);
  EXPECT_THROW(build_space(0), InvalidInput);
  EXPECT_THROW(build_space(5), InvalidInput);
}

TEST(FockSpace, IndexRoundTripAndOrdering) {
  const FockSpace sp = build_space(2);
  for (Eigen::Index i = 0; i < sp.dim(); i += 37) EXPECT_EQ(sp.index(sp.occupation(i)), i);
  // first mode most significant
  EXPECT_EQ(sp.index({1, 0, 0, 0, 0, 0, 0, 0}), 2187);
  EXPECT_EQ(sp.index({0, 0, 0, 0, 0, 0, 0, 1}), 1);
  EXPECT_THROW(sp.index({3, 0, 0, 0, 0, 0, 0, 0}), InvalidInput);
}

TEST(Ladder, MatchesKroneckerOracle) {
  const FockSpace sp = build_space(1);
  for (int m = 0; m < 8; ++m) {
    const Eigen::MatrixXcd want = oracle::kron_annihilator(1, 8, m);
    EXPECT_EQ((dense(annihilator(sp, m)) - want).cwiseAbs().maxCoeff(), 0.0);
  }
  const FockSpace small(3, 4);
  for (int m = 0; m < 4; ++m)
    EXPECT_EQ((dense(annihilator(small, m)) - oracle::kron_annihilator(3, 4, m)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Ladder, ActionOnNumberStates) {
  const FockSpace sp = build_space(2);
  const OperatorMatrix a = annihilator(sp, mode(Direction::plus, 1));
  EXPECT_EQ((a * sp.basis_vector({0, 0, 0, 0, 0, 0, 0, 0})).norm(), 0.0);
  const Eigen::VectorXcd two = sp.basis_vector({0, 2, 0, 0, 0, 0, 0, 0});
  const Eigen::VectorXcd one = sp.basis_vector({0, 1, 0, 0, 0, 0, 0, 0});
  EXPECT_NEAR((a * two - std::sqrt(2.0) * one).norm(), 0.0, 1e-15);
}

TEST(Metric, InvolutionAndScalarSigns) {
  const FockSpace sp = build_space(2);
  const MetricOperator m = metric_M(sp);
  EXPECT_EQ((m.signs().array() * m.signs().array() - 1.0).abs().maxCoeff(), 0.0);
  EXPECT_EQ(m.signs()[sp.index({1, 0, 0, 0, 0, 0, 0, 0})], -1.0);
  EXPECT_EQ(m.signs()[sp.index({1, 0, 0, 0, 1, 0, 0, 0})], 1.0);
  EXPECT_EQ(m.signs()[sp.index({0, 2, 2, 2, 0, 1, 1, 1})], 1.0);
  const Eigen::VectorXcd scalar = sp.basis_vector({1, 0, 0, 0, 0, 0, 0, 0});
  EXPECT_EQ(indefinite_inner(sp, scalar, scalar), Complex(-1.0));
}

TEST(BarAdjoint, LadderRelations) {
  const LadderAlgebra alg(build_space(1));
  for (Direction d : kDirections) {
    EXPECT_EQ(max_abs_diff(alg.abar(d, 0), -1.0 * alg.a(d, 0).adjoint()), 0.0);
    for (int r = 1; r < 4; ++r) EXPECT_EQ(max_abs_diff(alg.abar(d, r), alg.a(d, r).adjoint()), 0.0);
  }
}

TEST(BarAdjoint, InvolutiveAndAntiMultiplicative) {
  const LadderAlgebra alg(build_space(1));
  const OperatorMatrix x = Complex(0.3, 0.7) * alg.a(Direction::plus, 0) * alg.a(Direction::minus, 2) +
                           alg.abar(Direction::plus, 3);
  EXPECT_EQ(max_abs_diff(alg.bar(alg.bar(x)), x), 0.0);
  const OperatorMatrix y = alg.a(Direction::minus, 0) + alg.abar(Direction::plus, 1);
  EXPECT_LT(max_abs_diff(alg.bar(x * y), alg.bar(y) * alg.bar(x)), 1e-15);
}

TEST(Commutators, CovariantOnInteriorOnly) {
  const FockSpace sp = build_space(2);
  const LadderAlgebra alg(sp);
  for (Direction d : kDirections)
    for (int r = 0; r < 4; ++r)
      for (Direction e : kDirections)
        for (int s = 0; s < 4; ++s) {
          OperatorMatrix c = commutator(alg.a(d, r), alg.abar(e, s));
          if (d == e && r == s) c -= zeta(r) * OperatorMatrix::identity(sp);
          EXPECT_LT(interior_max_abs(c), 1e-14);
          // truncation damage only where the mode is full
          for (Eigen::Index k = 0; k < c.matrix().outerSize(); ++k)
            for (SparseOp::InnerIterator it(c.matrix(), k); it; ++it) {
              if (std::abs(it.value()) < 1e-14) continue;
              EXPECT_EQ(it.row(), it.col());
              EXPECT_EQ(sp.occupation(it.row(), mode(d, r).index()), sp.cutoff());
            }
          EXPECT_EQ(commutator(alg.a(d, r), alg.a(e, s)).max_abs(), 0.0);
        }
}

TEST(GhostModes, BarRelationsAndCommutators) {
  const FockSpace sp = build_space(2);
  const LadderAlgebra alg(sp);
  const Complex i(0.0, 1.0);
  for (Direction d : kDirections) {
    const OperatorMatrix& ad = alg.a_d(d);
    const OperatorMatrix& ag = alg.a_g(d);
    EXPECT_LT(max_abs_diff(alg.bar(ad), -i * ag.adjoint()), 1e-15);
    EXPECT_LT(max_abs_diff(alg.bar(ag), i * ad.adjoint()), 1e-15);
    EXPECT_LT(interior_max_abs(commutator(ad, alg.bar(ad))), 1e-15);
    EXPECT_LT(interior_max_abs(commutator(ag, alg.bar(ag))), 1e-15);
    EXPECT_LT(interior_max_abs(commutator(ad, alg.bar(ag)) - i * OperatorMatrix::identity(sp)), 1e-15);
  }
}

TEST(DgBasis, MetricElementsFollowClosedForm) {
  const FockSpace sp = build_space(2);
  std::vector<DgOccupation> states;
  for (int nd = 0; nd <= 2; ++nd)
    for (int ng = 0; nd + ng <= 2; ++ng)
      for (int md = 0; md <= 2; ++md)
        for (int mg = 0; md + mg <= 2; ++mg) states.push_back({{0, 0, nd, ng}, {0, 0, md, mg}});
  states.push_back({{1, 0, 1, 0}, {0, 2, 0, 1}});
  states.push_back({{1, 0, 0, 1}, {0, 2, 1, 0}});
  std::vector<Eigen::VectorXcd> v;
  for (const auto& s : states) v.push_back(dg_basis_state(sp, s));
  const MetricOperator m = metric_M(sp);
  for (std::size_t a = 0; a < states.size(); ++a) {
    EXPECT_NEAR(v[a].norm(), 1.0, 1e-14);
    for (std::size_t b = 0; b < states.size(); ++b)
      EXPECT_LT(std::abs(indefinite_inner(m, v[a], v[b]) - dg_metric_element(states[a], states[b])), 1e-14);
  }
}

TEST(DgBasis, SingleDQuantumMetricImage) {
  // M|1_d> = -i|1_g>
  const FockSpace sp = build_space(1);
  const Eigen::VectorXcd d1 = dg_basis_state(sp, {{0, 0, 1, 0}, {}});
  const Eigen::VectorXcd g1 = dg_basis_state(sp, {{0, 0, 0, 1}, {}});
  EXPECT_LT((metric_M(sp).apply(d1) - Complex(0, -1) * g1).norm(), 1e-15);
}

TEST(DgBasis, OverflowIsRejected) {
  const FockSpace sp = build_space(2);
  EXPECT_THROW(dg_basis_state(sp, {{0, 0, 2, 1}, {}}), InvalidInput);
  EXPECT_THROW(dg_basis_state(sp, {{3, 0, 0, 0}, {}}), InvalidInput);
  EXPECT_NO_THROW(dg_basis_state(build_space(4), {{0, 0, 4, 0}, {}}));
}

TEST(Operators, MixingSpacesThrows) {
  const OperatorMatrix a = annihilator(build_space(1), 0);
  const OperatorMatrix b = annihilator(build_space(2), 0);
  EXPECT_THROW(a + b, SpaceMismatch);
  EXPECT_THROW(a * b, SpaceMismatch);
}
