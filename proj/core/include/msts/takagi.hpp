#pragma once

#include <Eigen/Dense>

#include "msts/model.hpp"

namespace msts {

/// Schmidt basis from the Takagi factorization G = U diag(lambda) U^T with
/// unitary U and lambda_mu = |lambda_mu| e^{i theta_mu}, |lambda| sorted
/// descending.
struct SchmidtBasis {
  Eigen::MatrixXcd u;
  Eigen::VectorXd lambda_abs;
  Eigen::VectorXd theta;  // in (-pi, pi]

  int size() const { return static_cast<int>(lambda_abs.size()); }
  Eigen::VectorXcd lambda() const {
    Eigen::VectorXcd out(lambda_abs.size());
    for (Eigen::Index i = 0; i < out.size(); ++i)
      out(i) = std::polar(lambda_abs(i), theta(i));
    return out;
  }
};

/// Takagi factorization of a complex symmetric matrix via its SVD
/// G = U Sigma W^dag, Lambda = Sigma (W^dag U^*). When singular values are
/// degenerate W^dag U^* is only block-diagonal; each block is reduced by a
/// joint real-orthogonal diagonalization of its (commuting) real and
/// imaginary parts, absorbed into U.
SchmidtBasis takagi_factorize(const Eigen::MatrixXcd& g);

/// Schmidt basis of a validated model, either takagi_factorize(G) or the
/// schmidt input passed through (normalized to the same gauge conventions).
SchmidtBasis schmidt_basis(const Model& model);

/// Coupling matrix implied by a Schmidt basis (U Lambda U^T).
Eigen::MatrixXcd coupling_matrix(const SchmidtBasis& basis);

/// Squeezing matrix z = U diag(r e^{i phi}) U^T (complex symmetric).
Eigen::MatrixXcd squeezing_matrix_z(const SchmidtBasis& basis, const Eigen::VectorXd& r,
                                    const Eigen::VectorXd& phi);

}  // namespace msts
