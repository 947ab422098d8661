#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace mtc {

using SparseMatrix = Eigen::SparseMatrix<double>;

// exp(t*A) for real antisymmetric A, via the Hermitian matrix iA.
Eigen::MatrixXd expm_antisymmetric(const Eigen::MatrixXd& a, double t);

double antisymmetry_defect(const Eigen::MatrixXd& a);

// Columns of x are replaced by exp(t*A) x. Scaled Taylor series; A sparse.
void apply_expm(const SparseMatrix& a, double t, Eigen::MatrixXd& x);

}  // namespace mtc
