#include "msts/limits.hpp"

#include <cmath>

namespace msts {
namespace limits {

LosslessSolution lossless_solution(const SchmidtBasis& basis, const DerivedRates& rates,
                                   const PumpModel& pump, double t) {
  const int m = basis.size();
  const double integral = pump_drive_integral(pump, t);
  LosslessSolution out;
  out.r = 2.0 * basis.lambda_abs * integral;
  out.phi.resize(m);
  for (int mu = 0; mu < m; ++mu)
    out.phi(mu) = (basis.theta(mu) - M_PI / 2.0) - 2.0 * rates.omega(mu, mu).real() * t;
  return out;
}

SingleModeDerivs single_mode_rhs(double r, double n, double omega1, double gamma1,
                                 double lambda_abs, const PumpModel& pump, double t) {
  SingleModeDerivs d;
  const double drive = pump_drive_envelope(pump, t);
  d.dr = 2.0 * drive * lambda_abs -
         2.0 * gamma1 * std::cosh(r) * std::sinh(r) / (2.0 * n + 1.0);
  d.dphi = -2.0 * omega1;
  d.dn = 2.0 * gamma1 * (std::sinh(r) * std::sinh(r) - n);
  return d;
}

TwoModeDerivs two_mode_rhs(double r, double n1, double n2, double omega1, double omega2,
                           double gamma1, double gamma2, double lambda_abs,
                           const PumpModel& pump, double t) {
  TwoModeDerivs d;
  const double drive = pump_drive_envelope(pump, t);
  const double ch = std::cosh(r), sh = std::sinh(r);
  d.dr = 2.0 * drive * lambda_abs -
         ch * sh * (gamma1 + gamma2 + (gamma1 - gamma2) * (n2 - n1)) / (1.0 + n1 + n2);
  d.dphi = -(omega1 + omega2);
  d.dn1 = 2.0 * n1 * (gamma2 * sh * sh - gamma1 * ch * ch) + 2.0 * gamma2 * sh * sh;
  d.dn2 = 2.0 * n2 * (gamma1 * sh * sh - gamma2 * ch * ch) + 2.0 * gamma1 * sh * sh;
  return d;
}

Eigen::Matrix2cd two_mode_unitary() {
  Eigen::Matrix2cd u;
  u << complexd(0.5, -0.5), complexd(0.5, 0.5), complexd(0.5, 0.5), complexd(0.5, -0.5);
  return u;
}

}  // namespace limits
}  // namespace msts
