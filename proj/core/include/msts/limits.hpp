#pragma once

#include <Eigen/Dense>

#include "msts/dynamics.hpp"
#include "msts/model.hpp"
#include "msts/takagi.hpp"

namespace msts {
namespace limits {

/// Closed-form lossless solution from the vacuum:
///   r_mu(t)   = 2 |lambda_mu| * integral of the drive envelope over [0, t]
///   phi_mu(t) = phi_mu(0) - 2 Omega_mumu t
/// Valid when every gamma_m = 0 and the phase condition is maintained
/// (resonant Schmidt modes); the caller guarantees these.
struct LosslessSolution {
  Eigen::VectorXd r;
  Eigen::VectorXd phi;
};
LosslessSolution lossless_solution(const SchmidtBasis& basis, const DerivedRates& rates,
                                   const PumpModel& pump, double t);

/// Single lossy mode under the maintained phase condition:
///   dr   = 2 |drive| |lambda| - 2 gamma cosh(r) sinh(r)/(2n+1)
///   dphi = -2 omega_1
///   dn   = 2 gamma (sinh^2 r - n)
struct SingleModeDerivs {
  double dr, dphi, dn;
};
SingleModeDerivs single_mode_rhs(double r, double n, double omega1, double gamma1,
                                 double lambda_abs, const PumpModel& pump, double t);

/// Two lossy modes sharing one (r, phi) in the fixed cross-coupled basis:
///   dr   = 2 |drive| |lambda|
///          - cosh(r) sinh(r) [g1 + g2 + (g1 - g2)(n2 - n1)]/(1 + n1 + n2)
///   dphi = -(omega1 + omega2)
///   dn1  = 2 n1 (g2 sinh^2 r - g1 cosh^2 r) + 2 g2 sinh^2 r
///   dn2  = 2 n2 (g1 sinh^2 r - g2 cosh^2 r) + 2 g1 sinh^2 r
struct TwoModeDerivs {
  double dr, dphi, dn1, dn2;
};
TwoModeDerivs two_mode_rhs(double r, double n1, double n2, double omega1, double omega2,
                           double gamma1, double gamma2, double lambda_abs,
                           const PumpModel& pump, double t);

/// The 2x2 Schmidt basis of a purely cross-coupled pair,
/// U = (1/2) [[1-i, 1+i], [1+i, 1-i]].
Eigen::Matrix2cd two_mode_unitary();

}  // namespace limits
}  // namespace msts
