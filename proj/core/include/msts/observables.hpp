#pragma once

#include <Eigen/Dense>

#include "msts/dynamics.hpp"
#include "msts/takagi.hpp"

namespace msts {

/// Same-time second moments N_ml = <b+_m b_l> (Hermitian PSD) and
/// A_ml = <b_m b_l> (symmetric).
struct SecondMoments {
  Eigen::MatrixXcd number;
  Eigen::MatrixXcd pair;
  double t = 0.0;

  int size() const { return static_cast<int>(number.rows()); }
};

/// eta_{mu nu} = sum_m U_{m mu} U*_{m nu} n_m (Hermitian).
Eigen::MatrixXcd eta(const SchmidtBasis& basis, const Eigen::VectorXd& n);

/// Second moments of the squeezed thermal state with parameters `state`:
///   <b+_m b_l> = sum_{mu nu} (U*_mmu U_lnu ch_mu ch_nu
///                + U*_mnu U_lmu sh_mu sh_nu e^{i(phi_mu - phi_nu)}) eta_{mu nu}
///                + sum_mu U*_mmu U_lmu sh_mu^2
///   <b_m b_l>  = sum_{mu nu} (U_mmu U_lnu + U_mnu U_lmu) sh_mu ch_nu e^{i phi_mu} eta_{mu nu}
///                + sum_mu U_mmu U_lmu ch_mu sh_mu e^{i phi_mu}
SecondMoments second_moments(const MstsState& state, const SchmidtBasis& basis);

/// Diagonal of N (real) and its trace.
struct PhotonNumbers {
  Eigen::VectorXd per_mode;
  double total = 0.0;
};
PhotonNumbers photon_numbers(const SecondMoments& moments);

/// Joint quadrature selection for the correlation variance
/// Delta^2 = <(X_m +/- X_l)^2> + <(Y_m -/+ Y_l)^2>, vacuum value 1.
struct QuadratureSpec {
  int m = 0;
  int l = 1;
  double phi_m = 0.0;
  double phi_l = 0.0;
  int sign = +1;  // +1 selects (X_m + X_l, Y_m - Y_l)
};

double correlation_variance(const SecondMoments& moments, const QuadratureSpec& spec);

struct OptimalAngles {
  double phi_m = 0.0;
  double phi_l = 0.0;
  double delta2 = 1.0;
};

/// Minimum of Delta^2 over the quadrature angles. The matched-angle
/// combination cancels every A_mm/A_ll term exactly, leaving
/// Delta^2 = 1 + N_mm + N_ll +/- 2 Re(e^{-i(phi_m+phi_l)} A_ml), so the
/// optimum 1 + N_mm + N_ll - 2|A_ml| is attained analytically for either sign.
OptimalAngles optimize_angles(const SecondMoments& moments, int m, int l, int sign);

/// 2M x 2M symmetric covariance matrix in (x_1..x_M, p_1..p_M) ordering with
/// vacuum value I/2 ([x_m, p_l] = i delta_ml).
Eigen::MatrixXd covariance_matrix(const SecondMoments& moments);

/// Smallest eigenvalue of sigma + (i/2) Omega_symp; >= 0 up to roundoff for
/// any physical Gaussian state.
double uncertainty_min_eig(const SecondMoments& moments);

/// Smallest eigenvalue of N (>= 0 up to roundoff).
double number_min_eig(const SecondMoments& moments);

}  // namespace msts
