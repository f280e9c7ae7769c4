#pragma once

#include <Eigen/Dense>
#include <random>

#include "msts/config.hpp"
#include "msts/crow.hpp"
#include "msts/dynamics.hpp"
#include "msts/limits.hpp"
#include "msts/model.hpp"
#include "msts/takagi.hpp"

namespace msts_test {

inline Eigen::MatrixXcd random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = msts::complexd(g(rng), g(rng));
  return 0.5 * (a + a.transpose());
}

inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = msts::complexd(g(rng), g(rng));
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ();
}

// Schmidt basis of the reference four-cavity example: reproduces its
// tabulated |lambda| and Schmidt-mode frequencies on the Bloch grid of
// crow::build_crow (modes ordered kD = -pi/2, 0, +pi/2, pi).
inline Eigen::MatrixXcd reference_crow_unitary() {
  Eigen::MatrixXd u(4, 4);
  u << 1.6702857421224315e-01, 1.2000027004469869e-02, -1.6876512050703818e-01,
      9.7132681876326366e-01,                                             //
      -7.1164195202341818e-01, 5.1392652539435334e-02, -7.0066006549859772e-01,
      8.7199223583494036e-07,                                             //
      1.1102259741887696e-03, 9.9740179691702902e-01, 7.2030708040385472e-02,
      2.0417060163070677e-06,                                             //
      -6.8239721197789949e-01, -4.9035192704163462e-02, 6.8949647121283086e-01,
      2.3774820955437079e-01;
  return u.cast<msts::complexd>();
}

inline Eigen::Vector4d reference_crow_lambda() { return Eigen::Vector4d(1.21, 1.16, 0.742, 0.665); }

struct CrowSetup {
  msts::QuasimodeSet structure;
  msts::SchmidtBasis basis;
  msts::PumpModel pump;
  Eigen::MatrixXcd g_rad;
  double t_c = 0.25e-12;
  double g = 1.0 / 12.0;
};

// Analytic CROW: Table-I quasimodes + the phase-matched coupling formula,
// g = 1/12 via the coupling scale. Exact for the squeezed-thermal ansatz.
inline CrowSetup crow_analytic() {
  CrowSetup s;
  msts::crow::CrowParams params = msts::crow::nominal_params(4, 480e-9);
  s.structure = msts::crow::build_crow(params);
  msts::CouplingSpec cs = msts::crow::crow_coupling(params);
  const double alpha_sq = 4.6e7;
  cs.scale = s.g / (4.0 * alpha_sq * s.t_c);  // G0/hbar for the target g
  const msts::Model model = msts::validate(s.structure, cs);
  s.basis = msts::schmidt_basis(model);
  s.g_rad = *model.coupling.matrix;
  s.pump.kind = msts::PumpModel::Kind::cw;
  s.pump.omega_p = params.omega0.real();
  s.pump.alpha_sq = alpha_sq;
  return s;
}

// Figure-regression CROW: the reference Schmidt input (tabulated |lambda|
// and Schmidt-mode frequencies; the unitary reproduces both plus the
// backward-mode suppression) with the same drive scale.
inline CrowSetup crow_reference() {
  CrowSetup s;
  msts::crow::CrowParams params = msts::crow::nominal_params(4, 480e-9);
  s.structure = msts::crow::build_crow(params);
  msts::CouplingSpec cs;
  msts::CouplingSpec::Schmidt sch;
  sch.u = reference_crow_unitary();
  sch.lambda = reference_crow_lambda().cast<msts::complexd>();
  cs.schmidt = std::move(sch);
  const double alpha_sq = 4.6e7;
  cs.scale = s.g / (4.0 * alpha_sq * s.t_c);
  const msts::Model model = msts::validate(s.structure, cs);
  s.basis = msts::schmidt_basis(model);
  s.g_rad = msts::coupling_matrix(s.basis);
  s.pump.kind = msts::PumpModel::Kind::cw;
  s.pump.omega_p = params.omega0.real();
  s.pump.alpha_sq = alpha_sq;
  return s;
}

// Single lossy mode tuned for max r near 1 with gamma t_c ~ 0.05 (unit time).
inline void single_mode_setup(msts::QuasimodeSet& qs, msts::SchmidtBasis& basis,
                              msts::PumpModel& pump) {
  qs.omega = Eigen::VectorXd::Constant(1, 2.0);
  qs.gamma = Eigen::VectorXd::Constant(1, 0.05);
  basis.u = Eigen::MatrixXcd::Identity(1, 1);
  basis.lambda_abs = Eigen::VectorXd::Constant(1, 0.12);
  basis.theta = Eigen::VectorXd::Zero(1);
  pump.kind = msts::PumpModel::Kind::cw;
  pump.omega_p = 2.0;
  pump.alpha_sq = 1.0;
}

}  // namespace msts_test
