#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <vector>

#include "msts/dynamics.hpp"
#include "msts/model.hpp"
#include "msts/ode.hpp"
#include "msts/takagi.hpp"

namespace msts {
namespace oracle {

/// Truncated Fock verification backend. Hard caps keep the Hilbert space at
/// desk scale; the whole point of the main solver is that these caps exist.
struct FockConfig {
  int modes = 1;
  int cutoff = 10;  // max photons per mode

  int dim() const;
  void check() const;  // modes <= 2 and dim <= 4096
};

/// Annihilation operators lifted to the product space, mode-major with the
/// first mode's occupation varying fastest.
std::vector<Eigen::SparseMatrix<double>> build_operators(const FockConfig& cfg);

/// Hermitian H(t) = sum_m omega_m b+_m b_m + (drive(t) sum_ml G_ml b+_m b+_l + h.c.)
/// with everything in rad/s (hbar = 1).
Eigen::MatrixXcd hamiltonian(double t, const QuasimodeSet& structure,
                             const Eigen::MatrixXcd& g_rad, const PumpModel& pump,
                             const FockConfig& cfg);

struct FockTrajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> number;  // N_ml per sample
  std::vector<Eigen::MatrixXcd> pair;    // A_ml per sample
  std::vector<Eigen::MatrixXcd> rho;     // density matrix per sample
  double max_top_population = 0.0;
  bool cutoff_saturated = false;  // top layer exceeded 1e-6: results untrusted
  OdeStats stats;
};

/// Integrate d rho/dt = -i[H, rho] + sum_m gamma_m (2 b rho b+ - {b+ b, rho})
/// from the vacuum and extract moments at the requested times.
FockTrajectory evolve_fock(const QuasimodeSet& structure, const Eigen::MatrixXcd& g_rad,
                           const PumpModel& pump, const FockConfig& cfg,
                           const std::vector<double>& sample_times, double rtol = 1e-9,
                           double atol = 1e-12);

/// rho = S rho_th S+ for the squeezed thermal state with parameters `state`,
/// S = exp(1/2 sum z_ml b+_m b+_l - h.c.), z = U diag(r e^{i phi}) U^T.
/// Renormalized to unit trace on the truncated space.
Eigen::MatrixXcd msts_density_matrix(const MstsState& state, const SchmidtBasis& basis,
                                     const FockConfig& cfg);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

struct MomentTrajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXcd> number;
  std::vector<Eigen::MatrixXcd> pair;
  OdeStats stats;
};

/// Independent Gaussian oracle: the Lindblad generator is quadratic, so the
/// second moments close on themselves,
///   dN/dt = [i(w_m - w_l) - (g_m + g_l)] N_ml
///           + 2i (conj(D) (G* A)_ml - D (A* G)_ml)
///   dA/dt = [-i(w_m + w_l) - (g_m + g_l)] A_ml - 2i D (G N + (G N)^T + G)_ml.
/// Integrated from the vacuum in a frame co-rotating with the pump carrier
/// (see docs/moment_oracle.md for the derivation).
MomentTrajectory moment_ode_oracle(const QuasimodeSet& structure, const Eigen::MatrixXcd& g_rad,
                                   const PumpModel& pump,
                                   const std::vector<double>& sample_times, double rtol = 1e-10,
                                   double atol = 1e-13);

}  // namespace oracle
}  // namespace msts
