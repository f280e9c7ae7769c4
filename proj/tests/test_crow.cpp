#include <gtest/gtest.h>

#include "msts/crow.hpp"
#include "msts/takagi.hpp"
#include "support.hpp"

using namespace msts;
using namespace msts::crow;

TEST(Crow, AllowedBlochValues) {
  const CrowParams p = nominal_params(4, 480e-9);
  const auto kds = allowed_kd(p);
  ASSERT_EQ(kds.size(), 4u);
  EXPECT_NEAR(kds[0], -M_PI / 2.0, 1e-12);
  EXPECT_NEAR(kds[1], 0.0, 1e-12);
  EXPECT_NEAR(kds[2], M_PI / 2.0, 1e-12);
  EXPECT_NEAR(kds[3], M_PI, 1e-12);
}

TEST(Crow, TableOneFrequencies) {
  const CrowParams p = nominal_params(4, 480e-9);
  const QuasimodeSet qs = build_crow(p);
  const double unit = 2.0 * M_PI * kC / p.d;
  // band center at kD = +/- pi/2
  EXPECT_NEAR(qs.omega(0) / unit, 0.305000, 5e-7);
  EXPECT_NEAR(qs.gamma(0) / unit, 7.71e-6, 5e-9);
  EXPECT_NEAR(qs.omega(2) / unit, 0.305000, 5e-7);
  // band edges, to all tabulated digits
  EXPECT_NEAR(qs.omega(1) / unit, 0.301990, 5e-7);
  EXPECT_NEAR(qs.gamma(1) / unit, 1.63e-6, 5e-9);
  EXPECT_NEAR(qs.omega(3) / unit, 0.308010, 5e-7);
  EXPECT_NEAR(qs.gamma(3) / unit, 1.38e-5, 5e-8);
  // loss dispersion positive everywhere
  EXPECT_GT(qs.gamma.minCoeff(), 0.0);
  EXPECT_EQ(qs.labels.size(), 4u);
}

TEST(Crow, DirichletRatioLimits) {
  EXPECT_NEAR(dirichlet_ratio(4, 0.0), 1.0, 1e-15);          // delta k = 0
  EXPECT_NEAR(dirichlet_ratio(4, M_PI / 4.0), 0.0, 1e-15);   // delta kD = pi/2
  EXPECT_NEAR(dirichlet_ratio(4, M_PI), -1.0, 1e-12);        // umklapp, x = pi
  EXPECT_NEAR(dirichlet_ratio(4, -M_PI), -1.0, 1e-12);
  // series continuity near the removable singularity
  EXPECT_NEAR(dirichlet_ratio(4, M_PI + 1e-7), -1.0, 1e-5);
}

TEST(Crow, CouplingSupport) {
  CrowParams p = nominal_params(4, 480e-9);
  p.g0 = 0.0;  // keep entries in G0 units
  const CouplingSpec cs = crow_coupling(p);
  const Eigen::MatrixXcd& g = *cs.matrix;
  // modes ordered [-pi/2, 0, +pi/2, pi]; pump at +pi/2
  EXPECT_NEAR(std::abs(g(0, 0) - complexd(1.0, 0.0)), 0.0, 1e-12);  // umklapp pair
  EXPECT_NEAR(std::abs(g(2, 2) - complexd(1.0, 0.0)), 0.0, 1e-12);  // degenerate pair
  EXPECT_NEAR(std::abs(g(1, 3) - complexd(1.0, 0.0)), 0.0, 1e-12);  // (0, pi) pair
  double offsupport = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool supported = (i == 0 && j == 0) || (i == 2 && j == 2) ||
                             (i == 1 && j == 3) || (i == 3 && j == 1);
      if (!supported) offsupport = std::max(offsupport, std::abs(g(i, j)));
    }
  EXPECT_NEAR(offsupport, 0.0, 1e-12);
  EXPECT_NEAR((g - g.transpose()).norm(), 0.0, 1e-14);
}

TEST(Crow, PumpOffGridThrows) {
  CrowParams p = nominal_params(4, 480e-9);
  p.k_p = 0.3 * M_PI / p.period();
  EXPECT_THROW(crow_coupling(p), error);
}

TEST(Crow, TakagiSpectrumPermutationInvariant) {
  CrowParams p = nominal_params(4, 480e-9);
  const Eigen::MatrixXcd g = *crow_coupling(p).matrix;
  const SchmidtBasis b1 = takagi_factorize(g);
  Eigen::PermutationMatrix<4> perm;
  perm.indices() << 2, 0, 3, 1;
  const Eigen::MatrixXcd gp = perm.transpose() * g * perm;
  const SchmidtBasis b2 = takagi_factorize(0.5 * (gp + gp.transpose()));
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(b1.lambda_abs(i), 1.0, 1e-12);
    EXPECT_NEAR(b2.lambda_abs(i), b1.lambda_abs(i), 1e-12);
  }
}

TEST(Crow, DriveParameters) {
  CrowParams p = nominal_params(4, 480e-9);
  const double v = kC / 26.6;
  p.g0 = 1.91e-31;
  const DriveParameters drv = drive_parameters(p, 4.6e7, v);
  // crossing time of the 2.9 um chain, 0.25 ps within rounding
  EXPECT_NEAR(drv.t_c, (3.0 * 2.0 * 480e-9) / v, 1e-20);
  EXPECT_NEAR(drv.t_c, 0.25e-12, 0.03 * 0.25e-12);
  // linearity in the pump photon number
  const DriveParameters twice = drive_parameters(p, 2.0 * 4.6e7, v);
  EXPECT_NEAR(twice.g, 2.0 * drv.g, 1e-15 * twice.g);
}

TEST(Crow, PumpingStrengthFromCavityParameters) {
  // Kerr index and mode volume of the reference cavity give g near 1/12
  const CrowParams p = nominal_params(4, 480e-9);
  const double chi3 = chi3_from_kerr_index(3.4, 4.5e-18);
  const double g0 = g0_from_cavity(p.omega0.real(), chi3, 3e-18, 18);
  CrowParams pp = p;
  pp.g0 = g0;
  const DriveParameters drv = drive_parameters(pp, 4.6e7, kC / 26.6);
  EXPECT_NEAR(drv.g, 1.0 / 12.0, 0.05 / 12.0);
}
