#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace lvem;

namespace {

const HamiltonianTerms& terms() {
  static const HamiltonianTerms t(build_space(2));
  return t;
}

KappaSet electric(double xx, double yy, double xy, double tr = 0.0) {
  KappaSet k;
  k.e_minus << xx, xy, 0.0, xy, yy, 0.0, 0.0, 0.0, -xx - yy;
  k.tr = tr;
  return k;
}

}  // namespace

TEST(Coupling, FreeFieldIsIdentity) {
  const CouplingTable t = vint_coefficients(KappaSet{});
  EXPECT_EQ(t.c[0][0], 1.0);
  EXPECT_EQ(t.c[1][1], 1.0);
  EXPECT_EQ(t.c[0][1], 0.0);
  EXPECT_EQ(t.c[1][0], 0.0);
  const auto j = t.apply({Complex(0.2, 1.0), Complex(-0.5, 0.3)});
  EXPECT_EQ(j[0], Complex(0.2, 1.0));
  EXPECT_EQ(j[1], Complex(-0.5, 0.3));
}

TEST(Coupling, ClosedFormsAlongZ) {
  const PolarizationFrame f = polarization_frame(Vec3::UnitZ());
  ASSERT_EQ(f.eps1, Vec3::UnitX());
  ASSERT_EQ(f.eps2, Vec3::UnitY());

  const double a = 3e-3, b = -1e-3, c = 2e-3;
  const CouplingTable diag = vint_coefficients(electric(a, b, 0.0));
  EXPECT_DOUBLE_EQ(diag.c[0][0], (4.0 - a + b) / 4.0);
  EXPECT_DOUBLE_EQ(diag.c[1][1], (4.0 + a - b) / 4.0);
  EXPECT_EQ(diag.c[0][1], 0.0);
  EXPECT_EQ(diag.c[1][0], 0.0);
  // the two polarizations couple with different strengths
  EXPECT_NEAR(diag.c[0][0] - diag.c[1][1], (b - a) / 2.0, 1e-15);

  const CouplingTable off = vint_coefficients(electric(0.0, 0.0, c));
  EXPECT_EQ(off.c[0][0], 1.0);
  EXPECT_EQ(off.c[1][1], 1.0);
  EXPECT_EQ(off.c[0][1], -c / 2.0);
  EXPECT_EQ(off.c[1][0], -c / 2.0);

  // the trace shifts both diagonal entries of Q equally and drops out
  const CouplingTable both = vint_coefficients(electric(a, b, c, 4e-3));
  EXPECT_DOUBLE_EQ(both.c[0][0], (4.0 - a + b) / 4.0);
  EXPECT_DOUBLE_EQ(both.c[1][1], (4.0 + a - b) / 4.0);
  EXPECT_DOUBLE_EQ(both.c[0][1], -c / 2.0);
  EXPECT_DOUBLE_EQ(both.c[1][0], -c / 2.0);
}

TEST(Coupling, GeneralDirectionUsesFrameBilinears) {
  Sampler rng(301);
  for (int n = 0; n < 20; ++n) {
    const KappaSet k = rng.kappas(0.01);
    const Vec3 kh = rng.unit_vector();
    const PolarizationFrame f = polarization_frame(kh);
    const Mat3 q = k.q_matrix();
    const CouplingTable t = vint_coefficients(k, kh);
    const double d1 = 0.25 * (f.eps1.dot(q * f.eps1) - f.eps2.dot(q * f.eps2));
    const double d2 = 0.5 * f.eps1.dot(q * f.eps2);
    EXPECT_NEAR(t.c[0][0], 1.0 - d1, 1e-16);
    EXPECT_NEAR(t.c[1][1], 1.0 + d1, 1e-16);
    EXPECT_NEAR(t.c[0][1], -d2, 1e-16);
    EXPECT_NEAR(t.c[1][0], -d2, 1e-16);
  }
}

TEST(Potentials, FreeFieldUnchanged) {
  const TransformedPotentials p = transformed_potentials(terms(), KappaSet{}, polarization_frame(Vec3::UnitZ()));
  for (int r = 0; r < 2; ++r) {
    EXPECT_EQ((p.exact[r] - p.original[r]).max_abs(), 0.0);
    EXPECT_EQ((p.first_order[r] - p.original[r]).max_abs(), 0.0);
  }
}

TEST(Potentials, DiagonalCaseIsPureRescaling) {
  const PolarizationFrame f = polarization_frame(Vec3::UnitZ());
  const TransformedPotentials p = transformed_potentials(terms(), electric(4e-3, -2e-3, 0.0), f);
  EXPECT_EQ(p.deltas.delta2, 0.0);
  const CouplingTable t = coupling_from_potentials(p.original, p.exact);
  EXPECT_LT(std::abs(t.c[0][1]), 1e-15);
  EXPECT_LT(std::abs(t.c[1][0]), 1e-15);
  EXPECT_NEAR(t.c[0][0], 1.0 - p.deltas.delta1, 1e-5);
  EXPECT_NEAR(t.c[1][1], 1.0 + p.deltas.delta1, 1e-5);
}

TEST(Potentials, ExtractionReproducesTable) {
  Sampler rng(302);
  for (int n = 0; n < 5; ++n) {
    const KappaSet k = rng.kappas(0.01);
    const Vec3 kh = rng.unit_vector();
    const TransformedPotentials p = transformed_potentials(terms(), k, polarization_frame(kh));
    const CouplingTable want = vint_coefficients(k, kh);
    const CouplingTable got = coupling_from_potentials(p.original, p.first_order);
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) EXPECT_NEAR(got.c[r][s], want.c[r][s], 1e-12);
  }
}

TEST(Potentials, FirstOrderFormIsAccurateToSecondOrder) {
  Sampler rng(303);
  const KappaSet shape = rng.kappas(1.0);
  const PolarizationFrame f = polarization_frame(Vec3(-0.3, 0.1, 0.95).normalized());
  const std::vector<double> scales{1e-2, 1e-3};
  std::vector<double> gap, table_gap;
  for (double s : scales) {
    const KappaSet k = shape.scaled(s);
    const TransformedPotentials p = transformed_potentials(terms(), k, f);
    double worst = 0.0;
    for (int r = 0; r < 2; ++r) worst = std::max(worst, interior_max_abs(p.exact[r] - p.first_order[r]));
    gap.push_back(worst);
    const CouplingTable exact = coupling_from_potentials(p.original, p.exact);
    const CouplingTable first = vint_coefficients(k, f.khat());
    double tw = 0.0;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) tw = std::max(tw, std::abs(exact.c[r][c] - first.c[r][c]));
    table_gap.push_back(tw);
  }
  EXPECT_NEAR(oracle::loglog_slope(scales, gap), 2.0, 0.2);
  EXPECT_NEAR(oracle::loglog_slope(scales, table_gap), 2.0, 0.2);
}
