#include "msts/takagi.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace msts {

namespace {

constexpr double kDegeneracyRelTol = 1e-8;

// Jointly diagonalize commuting real symmetric X, Y with one real orthogonal O.
// Diagonalizes X first, then Y restricted to each degenerate X eigenspace.
Eigen::MatrixXd joint_diagonalize(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  const int n = static_cast<int>(x.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  Eigen::MatrixXd o = es.eigenvectors();
  const Eigen::VectorXd ev = es.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  int i = 0;
  while (i < n) {
    int j = i + 1;
    while (j < n && std::abs(ev(j) - ev(i)) <= 1e-10 * scale) ++j;
    if (j - i > 1) {
      Eigen::MatrixXd yb = o.middleCols(i, j - i).transpose() * y * o.middleCols(i, j - i);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(0.5 * (yb + yb.transpose()));
      o.middleCols(i, j - i) = o.middleCols(i, j - i) * es2.eigenvectors();
    }
    i = j;
  }
  return o;
}

}  // namespace

SchmidtBasis takagi_factorize(const Eigen::MatrixXcd& g) {
  const int m = static_cast<int>(g.rows());
  if (g.cols() != m) raise(errc::dimension_mismatch, "takagi input must be square");
  const double gnorm = g.norm();
  if ((g - g.transpose()).norm() > 1e-10 * std::max(gnorm, 1e-300))
    raise(errc::not_symmetric, "takagi input must be complex symmetric");
  const Eigen::MatrixXcd gs = 0.5 * (g + g.transpose());

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gs, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::MatrixXcd u = svd.matrixU();
  const Eigen::MatrixXcd w = svd.matrixV();
  const Eigen::VectorXd sigma = svd.singularValues();  // descending

  // D = W^dag U^*; block-diagonal on degenerate groups of sigma, diagonal otherwise.
  Eigen::MatrixXcd d = w.adjoint() * u.conjugate();
  Eigen::VectorXcd lambda(m);

  const double sref = std::max(sigma(0), 1e-300);
  int i = 0;
  while (i < m) {
    int j = i + 1;
    while (j < m && sigma(i) - sigma(j) <= kDegeneracyRelTol * sref) ++j;
    const int b = j - i;
    if (b == 1) {
      complexd dii = d(i, i);
      const double mag = std::abs(dii);
      dii = (mag > 0.0) ? dii / mag : complexd(1.0, 0.0);
      lambda(i) = sigma(i) * dii;
    } else {
      // The block is unitary symmetric, so its real and imaginary parts
      // commute and are diagonalized by one real orthogonal matrix.
      Eigen::MatrixXcd db = d.block(i, i, b, b);
      db = 0.5 * (db + db.transpose());
      const Eigen::MatrixXd o = joint_diagonalize(db.real(), db.imag());
      Eigen::MatrixXcd phases = o.transpose() * db * o;
      u.middleCols(i, b) = u.middleCols(i, b) * o;
      for (int k = 0; k < b; ++k) {
        complexd p = phases(k, k);
        const double mag = std::abs(p);
        p = (mag > 0.0) ? p / mag : complexd(1.0, 0.0);
        lambda(i + k) = sigma(i + k) * p;
      }
    }
    i = j;
  }

  SchmidtBasis basis;
  basis.u = u;
  basis.lambda_abs = sigma;
  basis.theta.resize(m);
  for (int k = 0; k < m; ++k) {
    double th = (sigma(k) > 0.0) ? std::arg(lambda(k)) : 0.0;
    if (th <= -M_PI) th += 2.0 * M_PI;
    basis.theta(k) = th;
  }

  const double rec = (coupling_matrix(basis) - gs).norm();
  const double uni = (u.adjoint() * u - Eigen::MatrixXcd::Identity(m, m)).norm();
  if (rec > 1e-10 * std::max(1.0, gnorm) || uni > 1e-10)
    raise(errc::no_convergence, "takagi reconstruction failed, residual = " + std::to_string(rec));
  return basis;
}

SchmidtBasis schmidt_basis(const Model& model) {
  if (model.coupling.matrix) return takagi_factorize(*model.coupling.matrix);
  const auto& s = *model.coupling.schmidt;
  const int m = static_cast<int>(s.lambda.size());
  SchmidtBasis basis;
  basis.u = s.u;
  basis.lambda_abs.resize(m);
  basis.theta.resize(m);
  for (int k = 0; k < m; ++k) {
    basis.lambda_abs(k) = std::abs(s.lambda(k));
    double th = (basis.lambda_abs(k) > 0.0) ? std::arg(s.lambda(k)) : 0.0;
    if (th <= -M_PI) th += 2.0 * M_PI;
    basis.theta(k) = th;
  }
  // gauge convention: |lambda| descending, stable
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return basis.lambda_abs(a) > basis.lambda_abs(b); });
  SchmidtBasis sorted;
  sorted.u.resize(m, m);
  sorted.lambda_abs.resize(m);
  sorted.theta.resize(m);
  for (int k = 0; k < m; ++k) {
    sorted.u.col(k) = basis.u.col(idx[k]);
    sorted.lambda_abs(k) = basis.lambda_abs(idx[k]);
    sorted.theta(k) = basis.theta(idx[k]);
  }
  return sorted;
}

Eigen::MatrixXcd coupling_matrix(const SchmidtBasis& basis) {
  return basis.u * basis.lambda().asDiagonal() * basis.u.transpose();
}

Eigen::MatrixXcd squeezing_matrix_z(const SchmidtBasis& basis, const Eigen::VectorXd& r,
                                    const Eigen::VectorXd& phi) {
  const int m = basis.size();
  if (r.size() != m || phi.size() != m)
    raise(errc::dimension_mismatch, "squeezing parameter arrays must have length M");
  Eigen::VectorXcd zdiag(m);
  for (int k = 0; k < m; ++k) zdiag(k) = std::polar(r(k), phi(k));
  Eigen::MatrixXcd z = basis.u * zdiag.asDiagonal() * basis.u.transpose();
  return 0.5 * (z + z.transpose());
}

}  // namespace msts
