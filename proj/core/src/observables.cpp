#include "msts/observables.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace msts {

Eigen::MatrixXcd eta(const SchmidtBasis& basis, const Eigen::VectorXd& n) {
  const int m = basis.size();
  if (n.size() != m) raise(errc::dimension_mismatch, "n must have length M");
  if (n.minCoeff() < -1e-9) raise(errc::config_error, "thermal photon numbers must be >= 0");
  Eigen::MatrixXcd out = basis.u.transpose() * n.asDiagonal() * basis.u.conjugate();
  return 0.5 * (out + out.adjoint());
}

SecondMoments second_moments(const MstsState& state, const SchmidtBasis& basis) {
  const int m = basis.size();
  if (state.size() != m) raise(errc::dimension_mismatch, "state and basis dimensions disagree");
  Eigen::VectorXd ch(m), sh(m);
  Eigen::VectorXcd se(m);
  for (int k = 0; k < m; ++k) {
    ch(k) = std::cosh(state.r(k));
    sh(k) = std::sinh(state.r(k));
    se(k) = std::polar(sh(k), state.phi(k));
  }
  const Eigen::MatrixXcd et = eta(basis, state.n);

  // Schmidt-basis blocks, then rotate to the quasimode basis.
  Eigen::MatrixXcd nsch(m, m), asch(m, m);
  for (int mu = 0; mu < m; ++mu) {
    for (int nu = 0; nu < m; ++nu) {
      const double del = (mu == nu) ? 1.0 : 0.0;
      nsch(mu, nu) = ch(mu) * ch(nu) * et(mu, nu) +
                     std::conj(se(mu)) * se(nu) * (del + std::conj(et(mu, nu)));
      asch(mu, nu) = ch(mu) * (del + std::conj(et(mu, nu))) * se(nu) +
                     se(mu) * et(mu, nu) * ch(nu);
    }
  }

  SecondMoments out;
  out.t = state.t;
  out.number = basis.u.conjugate() * nsch * basis.u.transpose();
  out.pair = basis.u * asch * basis.u.transpose();
  out.number = 0.5 * (out.number + out.number.adjoint()).eval();
  out.pair = 0.5 * (out.pair + out.pair.transpose()).eval();
  return out;
}

PhotonNumbers photon_numbers(const SecondMoments& moments) {
  PhotonNumbers out;
  out.per_mode = moments.number.diagonal().real();
  out.total = out.per_mode.sum();
  return out;
}

double correlation_variance(const SecondMoments& moments, const QuadratureSpec& spec) {
  if (spec.m == spec.l) raise(errc::same_mode, "correlation variance needs two distinct modes");
  const int n = moments.size();
  if (spec.m < 0 || spec.l < 0 || spec.m >= n || spec.l >= n)
    raise(errc::dimension_mismatch, "mode index out of range");
  const double nmm = moments.number(spec.m, spec.m).real();
  const double nll = moments.number(spec.l, spec.l).real();
  const complexd aml = moments.pair(spec.m, spec.l);
  const double cross =
      2.0 * (std::polar(1.0, -(spec.phi_m + spec.phi_l)) * aml).real();
  return 1.0 + nmm + nll + (spec.sign >= 0 ? cross : -cross);
}

OptimalAngles optimize_angles(const SecondMoments& moments, int m, int l, int sign) {
  if (m == l) raise(errc::same_mode, "optimize_angles needs two distinct modes");
  const double nmm = moments.number(m, m).real();
  const double nll = moments.number(l, l).real();
  const complexd aml = moments.pair(m, l);
  OptimalAngles out;
  if (std::abs(aml) < 1e-300) {
    out.phi_m = out.phi_l = 0.0;
    out.delta2 = 1.0 + nmm + nll;
    return out;
  }
  const double target = (sign >= 0) ? std::arg(aml) + M_PI : std::arg(aml);
  out.phi_m = out.phi_l = 0.5 * target;
  out.delta2 = 1.0 + nmm + nll - 2.0 * std::abs(aml);
  return out;
}

Eigen::MatrixXd covariance_matrix(const SecondMoments& moments) {
  const int m = moments.size();
  Eigen::MatrixXd sig(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const complexd a = moments.pair(i, j);
      const complexd nn = moments.number(i, j);
      const double del = (i == j) ? 0.5 : 0.0;
      sig(i, j) = a.real() + nn.real() + del;          // <x x>
      sig(m + i, m + j) = -a.real() + nn.real() + del; // <p p>
      sig(i, m + j) = a.imag() + nn.imag();            // <x p>
      sig(m + i, j) = a.imag() - nn.imag();            // <p x>
    }
  }
  return 0.5 * (sig + sig.transpose());
}

double uncertainty_min_eig(const SecondMoments& moments) {
  const int m = moments.size();
  const Eigen::MatrixXd sig = covariance_matrix(moments);
  Eigen::MatrixXcd h = sig.cast<complexd>();
  // + (i/2) * [[0, I], [-I, 0]]
  for (int i = 0; i < m; ++i) {
    h(i, m + i) += complexd(0.0, 0.5);
    h(m + i, i) += complexd(0.0, -0.5);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double number_min_eig(const SecondMoments& moments) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(moments.number, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace msts
