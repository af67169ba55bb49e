#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lvem;

namespace {

const LadderAlgebra& alg1() {
  static const LadderAlgebra a(build_space(1));
  return a;
}

const LadderAlgebra& alg2() {
  static const LadderAlgebra a(build_space(2));
  return a;
}

DgOccupation ghosts(int nd, int ng, int nd_m = 0, int ng_m = 0) { return {{0, 0, nd, ng}, {0, 0, nd_m, ng_m}}; }

}  // namespace

TEST(Classify, FigureLabels) {
  EXPECT_EQ(classify(ghosts(0, 0)), StateClass::A);
  EXPECT_EQ(classify({{2, 1, 0, 0}, {0, 1, 0, 0}}), StateClass::A);
  EXPECT_EQ(classify(ghosts(1, 1)), StateClass::C);
  EXPECT_EQ(classify(ghosts(0, 0, 2, 2)), StateClass::C);
  EXPECT_EQ(classify(ghosts(1, 0)), StateClass::BPlus);
  EXPECT_EQ(classify(ghosts(0, 1)), StateClass::BMinus);
  EXPECT_EQ(classify(ghosts(1, 1, 0, 2)), StateClass::BMinus);
  EXPECT_EQ(classify(metric_partner(ghosts(1, 0))), StateClass::BMinus);
  EXPECT_EQ(to_string(StateClass::BPlus), "B+");
  EXPECT_THROW(classify(ghosts(-1, 0)), InvalidInput);
}

TEST(Classify, NormIsNonzeroExactlyForAandC) {
  const FockSpace& sp = alg1().space();
  for (const DgOccupation& occ : dg_basis(build_space(2))) {
    const StateClass c = classify(occ);
    const bool visible = c == StateClass::A || c == StateClass::C;
    EXPECT_EQ(dg_metric_element(occ, occ) != Complex(0.0), visible);
  }
  for (const DgOccupation& occ : dg_basis(sp)) {
    const Eigen::VectorXcd v = dg_basis_state(sp, occ);
    const StateClass c = classify(occ);
    const bool visible = c == StateClass::A || c == StateClass::C;
    EXPECT_EQ(std::abs(alg1().inner(v, v)) > 1e-12, visible);
  }
}

TEST(Classify, ZeroNormStatesPairUpWithPrintedPhase) {
  const std::vector<DgOccupation> basis = dg_basis(build_space(2));
  for (const DgOccupation& b : basis) {
    if (classify(b) != StateClass::BPlus) continue;
    int partners = 0;
    for (const DgOccupation& other : basis) {
      const Complex e = dg_metric_element(b, other);
      if (e == Complex(0.0)) continue;
      ++partners;
      EXPECT_EQ(classify(other), StateClass::BMinus);
      EXPECT_EQ(other.plus.nd, b.plus.ng);
      EXPECT_EQ(other.minus.ng, b.minus.nd);
      const int power = other.plus.ng - other.plus.nd + other.minus.ng - other.minus.nd;
      EXPECT_LT(std::abs(e - std::pow(Complex(0, 1), power)), 1e-15);
    }
    EXPECT_EQ(partners, 1);
  }
}

TEST(Classify, PairPhaseMatchesOperatorConstruction) {
  const FockSpace& sp = alg2().space();
  const DgOccupation b = ghosts(1, 0, 2, 0);
  const Eigen::VectorXcd v = dg_basis_state(sp, b);
  const Eigen::VectorXcd w = dg_basis_state(sp, metric_partner(b));
  EXPECT_LT(std::abs(alg2().inner(w, v) - dg_metric_element(metric_partner(b), b)), 1e-14);
  EXPECT_LT(std::abs(alg2().inner(w, v) - std::pow(Complex(0, 1), -3)), 1e-14);
}

TEST(GuptaBleuler, Examples) {
  const FockSpace& sp = alg2().space();
  EXPECT_TRUE(gupta_bleuler_check(alg2(), dg_basis_state(sp, ghosts(0, 0))));
  EXPECT_TRUE(gupta_bleuler_check(alg2(), dg_basis_state(sp, ghosts(0, 1))));
  EXPECT_TRUE(gupta_bleuler_check(alg2(), dg_basis_state(sp, {{1, 1, 0, 2}, {0, 1, 0, 1}})));
  EXPECT_FALSE(gupta_bleuler_check(alg2(), dg_basis_state(sp, ghosts(1, 0))));
  EXPECT_FALSE(gupta_bleuler_check(alg2(), dg_basis_state(sp, ghosts(0, 0, 1, 1))));
  // scalar and longitudinal photons on their own violate it
  EXPECT_FALSE(gupta_bleuler_check(alg2(), sp.basis_vector({1, 0, 0, 0, 0, 0, 0, 0})));
  EXPECT_FALSE(gupta_bleuler_check(alg2(), sp.basis_vector({0, 0, 0, 1, 0, 0, 0, 0})));
}

TEST(WeakLorenz, Examples) {
  const LadderAlgebra alg4(build_space(4));
  const FockSpace& sp4 = alg4.space();
  const Eigen::VectorXcd four_d = dg_basis_state(sp4, {{1, 2, 4, 0}, {}});
  EXPECT_FALSE(gupta_bleuler_check(alg4, four_d));
  EXPECT_LT(std::abs(alg4.inner(four_d, four_d)), 1e-12);
  EXPECT_TRUE(weak_lorenz_check(alg4, four_d));

  // a zero-norm d admixture on top of a physical state is still acceptable
  const Eigen::VectorXcd mixed = dg_basis_state(sp4, {{1, 2, 0, 0}, {}}) + 0.7 * four_d;
  EXPECT_FALSE(gupta_bleuler_check(alg4, mixed));
  EXPECT_TRUE(weak_lorenz_check(alg4, mixed));

  const FockSpace& sp = alg2().space();
  EXPECT_FALSE(weak_lorenz_check(alg2(), dg_basis_state(sp, {{1, 0, 1, 1}, {}})));
  EXPECT_TRUE(weak_lorenz_check(alg2(), transverse_state(sp, 1, 2, 0, 1)));
}

TEST(WeakLorenz, ZeroScalarNormIsNotEnough) {
  // |T1>|1_d> + |T2>|1_g> has vanishing norm, but the transverse operator
  // |T1><T2| sees the interference between its two halves.
  const FockSpace& sp = alg2().space();
  const Eigen::VectorXcd psi =
      dg_basis_state(sp, {{1, 0, 1, 0}, {}}) + dg_basis_state(sp, {{0, 1, 0, 1}, {}});
  EXPECT_LT(std::abs(alg2().inner(psi, psi)), 1e-14);
  EXPECT_GT(ghost_gram(alg2(), psi).cwiseAbs().maxCoeff(), 0.1);
  EXPECT_FALSE(weak_lorenz_check(alg2(), psi));
}

TEST(WeakLorenz, ContainsGuptaBleuler) {
  const FockSpace& sp = alg2().space();
  Sampler rng(201);
  std::vector<DgOccupation> physical;
  for (const DgOccupation& occ : dg_basis(sp))
    if (occ.plus.nd == 0 && occ.minus.nd == 0) physical.push_back(occ);
  for (int n = 0; n < 25; ++n) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(sp.dim());
    for (int term = 0; term < 4; ++term) {
      const auto pick = static_cast<std::size_t>(rng.uniform(0.0, 1.0) * physical.size()) % physical.size();
      psi += Complex(rng.normal(), rng.normal()) * dg_basis_state(sp, physical[pick]);
    }
    ASSERT_TRUE(gupta_bleuler_check(alg2(), psi));
    EXPECT_TRUE(weak_lorenz_check(alg2(), psi));
  }
}

namespace {

// Random transverse observable: number operators, a polarization exchange and
// a +k/-k pair term, with random real or complex weights.
OperatorMatrix random_transverse_observable(const LadderAlgebra& alg, Sampler& rng) {
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

Eigen::VectorXcd random_combination(const FockSpace& sp, Sampler& rng, const std::vector<DgOccupation>& pool,
                                    int terms) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(sp.dim());
  for (int t = 0; t < terms; ++t) {
    const auto pick = static_cast<std::size_t>(rng.uniform(0.0, 1.0) * pool.size()) % pool.size();
    v += Complex(rng.normal(), rng.normal()) * dg_basis_state(sp, pool[pick]);
  }
  return v;
}

}  // namespace

TEST(Indistinguishability, RandomAdmixturesLeaveMeansUnchanged) {
  const FockSpace& sp = alg2().space();
  // psi: transverse states with optional g quanta at +k; phi: d quanta at -k
  std::vector<DgOccupation> reference, admixture;
  for (int n1 = 0; n1 <= 1; ++n1)
    for (int n2 = 0; n2 <= 1; ++n2)
      for (int m1 = 0; m1 <= 1; ++m1)
        for (int m2 = 0; m2 <= 1; ++m2) {
          for (int ng = 0; ng <= 2; ++ng) reference.push_back({{n1, n2, 0, ng}, {m1, m2, 0, 0}});
          for (int nd = 1; nd <= 2; ++nd) admixture.push_back({{n1, n2, 0, 0}, {m1, m2, nd, 0}});
        }
  Sampler rng(202);
  int checked = 0;
  while (checked < 100) {
    const Eigen::VectorXcd psi = random_combination(sp, rng, reference, 3);
    if (std::abs(alg2().inner(psi, psi)) < 1e-3) continue;  // needs a physical part
    const Eigen::VectorXcd phi = random_combination(sp, rng, admixture, 3);
    const OperatorMatrix a = random_transverse_observable(alg2(), rng);
    const Complex c1(rng.normal(), rng.normal()), c2(rng.normal(), rng.normal());
    const ObservableMeans m = observable_indistinguishability(alg2(), psi, phi, c1, c2, a);
    EXPECT_LT(std::abs(m.mean1 - m.mean2), 1e-12 * std::max(1.0, std::abs(m.mean1)));
    ++checked;
  }
}

TEST(Indistinguishability, GhostQuantaDecoupleFromTransverseMeans) {
  const FockSpace& sp = alg2().space();
  Sampler rng(203);
  const OperatorMatrix a = random_transverse_observable(alg2(), rng);
  const Eigen::VectorXcd base = transverse_state(sp, 1, 0, 0, 1) + 0.4 * transverse_state(sp, 0, 1, 1, 0);
  const Eigen::VectorXcd with_g = base + Complex(0.3, -0.8) * dg_basis_state(sp, {{1, 0, 0, 2}, {0, 1, 0, 0}});
  const Complex m0 = alg2().inner(base, a * base) / alg2().inner(base, base);
  const Complex m1 = alg2().inner(with_g, a * with_g) / alg2().inner(with_g, with_g);
  EXPECT_LT(std::abs(m0 - m1), 1e-12);
}

TEST(Indistinguishability, TrivialWithoutAdmixture) {
  const FockSpace& sp = alg2().space();
  Sampler rng(204);
  const OperatorMatrix a = random_transverse_observable(alg2(), rng);
  const Eigen::VectorXcd psi = transverse_state(sp, 1, 1, 0, 0);
  const Eigen::VectorXcd phi = dg_basis_state(sp, {{0, 0, 2, 0}, {}});
  const ObservableMeans m = observable_indistinguishability(alg2(), psi, phi, 2.0, 0.0, a);
  EXPECT_LT(std::abs(m.mean1 - m.mean2), 1e-14);
}

TEST(Indistinguishability, PreconditionsAreReported) {
  const FockSpace& sp = alg2().space();
  Sampler rng(205);
  const OperatorMatrix a = random_transverse_observable(alg2(), rng);
  const Eigen::VectorXcd psi = transverse_state(sp, 1, 0, 0, 0);
  const Eigen::VectorXcd phi = dg_basis_state(sp, {{1, 0, 2, 0}, {}});
  auto failed_condition = [&](const Eigen::VectorXcd& p, const Eigen::VectorXcd& f, const OperatorMatrix& op) {
    try {
      observable_indistinguishability(alg2(), p, f, 1.0, 1.0, op);
    } catch (const PreconditionViolation& e) {
      return e.condition();
    }
    return std::string("none");
  };
  EXPECT_EQ(failed_condition(psi, phi, a), "none");
  const OperatorMatrix scalar_number = alg2().a(Direction::plus, 0).adjoint() * alg2().a(Direction::plus, 0);
  EXPECT_EQ(failed_condition(psi, phi, scalar_number), "transverse_observable");
  EXPECT_EQ(failed_condition(psi, psi, a), "zero_norm_admixture");
  // psi carrying the g partner of phi picks up a cross term
  const Eigen::VectorXcd partner = psi + dg_basis_state(sp, {{1, 0, 0, 2}, {}});
  EXPECT_EQ(failed_condition(partner, phi, a), "orthogonal_admixture");
  EXPECT_EQ(failed_condition(dg_basis_state(sp, {{0, 0, 0, 1}, {}}), phi, a), "nonzero_norm_reference");
}

TEST(Counting, OracleExamples) {
  for (int n1 = 0; n1 <= 3; ++n1)
    for (int n2 = 0; n2 <= 3; ++n2) {
      if (n1 + n2 > 0) {
        EXPECT_FALSE(counting_oracle({}, n1, n2));
      }
    }
  for (int x = 1; x <= 2; ++x) {
    EXPECT_TRUE(counting_oracle({0, x, x, 0}, 0, 2 * x));
    EXPECT_FALSE(counting_oracle({0, x, x - 1, 0}, 0, 2 * x));
  }
  EXPECT_TRUE(counting_oracle({2, 2, 1, 1}, 0, 0));
  EXPECT_FALSE(counting_oracle({2, 1, 1, 1}, 0, 0));
  EXPECT_THROW(counting_oracle({-1, 0, 0, 0}, 1, 0), InvalidInput);
}

TEST(Counting, OracleAgreesWithOperatorProducts) {
  const GhostSpace g;
  ASSERT_EQ(g.space().dim(), 256);
  int compared = 0;
  for (Eigen::Index i = 0; i < g.space().dim(); ++i) {
    const GhostOccupation start = g.occupation(i);
    for (int n1 = 0; n1 <= 3; ++n1)
      for (int n2 = 0; n1 + n2 <= 3; ++n2) {
        if (!g.representable(start, n1, n2)) continue;
        EXPECT_EQ(counting_oracle(start, n1, n2), g.reaches_nonzero_norm(start, n1, n2))
            << "start (" << start.nd << "," << start.ng << "," << start.nd_m << "," << start.ng_m << ") N1=" << n1
            << " N2=" << n2;
        ++compared;
      }
  }
  EXPECT_GT(compared, 500);
}

// C-class states need a d and a g quantum together, so cutoff 1 has none
TEST(Leakage, FreeFieldStaysInGhostVacuum) {
  const HamiltonianTerms t(alg2().space());
  const HamiltonianBundle b = build_grouped(t, KappaSet{}, polarization_frame(Vec3::UnitZ()));
  const LeakageReport rep = invariance_leakage(t, b, 10.0);
  EXPECT_LT(rep.c_leakage, 1e-12);
  EXPECT_LT(rep.b_admixture, 1e-12);
  EXPECT_GT(rep.initial_states, 0u);
  EXPECT_GT(rep.forbidden_states, 0u);
}

TEST(Leakage, PerturbedEvolutionOnlyAddsZeroNorm) {
  const HamiltonianTerms t(alg2().space());
  Sampler rng(206);
  const HamiltonianBundle b = build_grouped(t, rng.kappas(1e-2), polarization_frame(rng.unit_vector()));
  const LeakageReport rep = invariance_leakage(t, b, 10.0);
  EXPECT_LT(rep.c_leakage, 1e-10);
  EXPECT_GT(rep.b_admixture, 1e-4);
  EXPECT_THROW(invariance_leakage(t, b, 11.0), InvalidInput);
}

TEST(Leakage, DetectsDirectCClassSource) {
  const HamiltonianTerms t(alg2().space());
  const LadderAlgebra& alg = t.algebra();
  const OperatorMatrix x = alg.a_d(Direction::plus).adjoint() * alg.a_g(Direction::plus).adjoint();
  const OperatorMatrix h =
      build_grouped(t, KappaSet{}, polarization_frame(Vec3::UnitZ())).total() + 1e-3 * (x + alg.bar(x));
  const LeakageReport rep = invariance_leakage(alg, h, 5.0, 2);
  EXPECT_GT(rep.c_leakage, 1e-6);
  EXPECT_EQ(rep.checkpoints, 2);
  EXPECT_GT(rep.worst_time, 0.0);
}
