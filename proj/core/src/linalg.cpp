#include "mtc/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace mtc {

Eigen::MatrixXd expm_antisymmetric(const Eigen::MatrixXd& a, double t)
{
    const Eigen::Index n = a.rows();
    if (n == 0) return a;
    Eigen::MatrixXcd h = std::complex<double>(0.0, 1.0) * a.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::MatrixXcd& v = es.eigenvectors();
    Eigen::VectorXcd phase(n);
    for (Eigen::Index k = 0; k < n; ++k)
        phase(k) = std::polar(1.0, -es.eigenvalues()(k) * t);
    return (v * phase.asDiagonal() * v.adjoint()).real();
}

double antisymmetry_defect(const Eigen::MatrixXd& a)
{
    if (a.size() == 0) return 0.0;
    return (a + a.transpose()).cwiseAbs().maxCoeff();
}

void apply_expm(const SparseMatrix& a, double t, Eigen::MatrixXd& x)
{
    double norm1 = 0.0;
    for (int k = 0; k < a.outerSize(); ++k) {
        double col = 0.0;
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) col += std::abs(it.value());
        norm1 = std::max(norm1, col);
    }
    norm1 *= std::abs(t);
    const int steps = std::max(1, static_cast<int>(std::ceil(norm1)));
    const double h = t / steps;

    Eigen::MatrixXd term, sum;
    for (int s = 0; s < steps; ++s) {
        sum = x;
        term = x;
        for (int k = 1; k < 40; ++k) {
            term = (h / k) * (a * term);
            sum += term;
            if (term.cwiseAbs().maxCoeff() < 1e-18) break;
        }
        x.swap(sum);
    }
}

}  // namespace mtc
