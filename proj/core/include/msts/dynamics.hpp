#pragma once

#include <Eigen/Dense>
#include <vector>

#include "msts/model.hpp"
#include "msts/ode.hpp"
#include "msts/takagi.hpp"

namespace msts {

/// Squeezing amplitudes r_mu, squeezing phases phi_mu (unwrapped) and thermal
/// photon numbers n_m at one instant.
struct MstsState {
  Eigen::VectorXd r;
  Eigen::VectorXd phi;
  Eigen::VectorXd n;
  double t = 0.0;

  int size() const { return static_cast<int>(r.size()); }
};

/// Schmidt-basis decay and frequency matrices,
/// Gamma_{mu nu} = 2 sum_m gamma_m U*_{m mu} U_{m nu},
/// Omega_{mu nu} = sum_m omega_m U*_{m mu} U_{m nu}.
struct DerivedRates {
  Eigen::MatrixXcd gamma;
  Eigen::MatrixXcd omega;
};

DerivedRates derived_rates(const QuasimodeSet& structure, const SchmidtBasis& basis);

struct Derivatives {
  Eigen::VectorXd dr, dphi, dn;
};

inline constexpr double kRFloor = 1e-10;

/// Equations of motion for (r_mu, phi_mu, n_m).
///
/// With P_mu = D(t) lambda_mu e^{-i phi_mu} (D the injected pump drive) and
///   Z_mu = e^{-i phi_mu} sum_{nu sig} Gamma_{nu sig} cosh r_nu sinh r_sig
///             e^{i phi_sig} sum_{ml} w_ml U_{m nu} U_{l sig} U*_{m mu} U*_{l mu},
///   w_ml = (1 - n_m + n_l)/(1 + n_m + n_l),
/// the system is
///   dr_mu   = 2 Im P_mu - Re Z_mu
///   dphi_mu = -2 Omega_mumu - 4 Re P_mu / tanh(2 r_mu) - Im Z_mu/(cosh r_mu sinh r_mu)
///   dn_m    = 2 sum_j gamma_j [ (1+n_m) |Q_mj|^2 - n_m |C_mj|^2 ],
/// with Q = U sinh(r) e^{i phi} U^T and C = U cosh(r) U^dag. The double Schmidt
/// sums are evaluated through these M x M kernels (O(M^3) per call).
///
/// When r_mu < r_floor the indeterminate terms in dphi_mu are replaced by the
/// resolved vacuum-start value dphi_mu = carrier_rate/2 - Omega_mumu.
Derivatives rhs(double t, const MstsState& state, const DerivedRates& rates,
                const SchmidtBasis& basis, const PumpModel& pump);

/// Vacuum start: r = 0, n = 0, phi_mu = theta_mu - pi/2 exactly.
MstsState initial_conditions(const SchmidtBasis& basis, const PumpModel& pump);

/// Residual of the identity-operator consistency condition; analytically zero,
/// returned unscaled. Divide by trace_residual_scale for the relative measure.
double trace_residual(const MstsState& state, const DerivedRates& rates,
                      const SchmidtBasis& basis);
double trace_residual_scale(const MstsState& state, const DerivedRates& rates,
                            const SchmidtBasis& basis);

struct IntegrateOptions {
  double t_end = 0.0;
  double rtol = 1e-9;
  double atol = 1e-12;
  double output_stride = 0.0;  // 0: only t = 0 and t = t_end
};

struct Trajectory {
  std::vector<MstsState> samples;
  std::vector<double> residual;        // trace residual per sample
  std::vector<double> residual_scale;  // its scale per sample
  OdeStats stats;
  int gauge_flips = 0;

  double max_scaled_residual() const;
};

/// Integrate the equations of motion from the vacuum with an embedded
/// Dormand-Prince 5(4) pair. Internally the fast carrier is removed
/// (psi_mu = phi_mu - carrier_rate * t) so step sizes track the physical
/// envelope; the stored phi is reconstructed exactly and stays unwrapped.
Trajectory integrate(const QuasimodeSet& structure, const SchmidtBasis& basis,
                     const PumpModel& pump, const IntegrateOptions& opts);

}  // namespace msts
