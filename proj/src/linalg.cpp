#include "qdnm/linalg.hpp"

namespace qdnm {

namespace {

double inf_norm(const Eigen::MatrixXcd& A) {
    return A.cwiseAbs().rowwise().sum().maxCoeff();
}

Eigen::PartialPivLU<Eigen::MatrixXcd> factor_checked(const Eigen::MatrixXcd& A) {
    if (A.rows() != A.cols()) throw InvalidInputError("solve_dense_linear: matrix not square");
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    const double scale = inf_norm(A);
    const double tol = 1e-14 * (scale > 0.0 ? scale : 1.0);
    const auto& u_diag = lu.matrixLU().diagonal();
    for (Eigen::Index i = 0; i < u_diag.size(); ++i) {
        if (std::abs(u_diag(i)) < tol)
            throw SingularSystemError("solve_dense_linear: numerically singular pivot at index " +
                                      std::to_string(i));
    }
    return lu;
}

}  // namespace

Eigen::VectorXcd solve_dense_linear(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b) {
    if (A.rows() != b.size()) throw InvalidInputError("solve_dense_linear: rhs size mismatch");
    return factor_checked(A).solve(b);
}

Eigen::MatrixXcd solve_dense_linear(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    if (A.rows() != B.rows()) throw InvalidInputError("solve_dense_linear: rhs size mismatch");
    return factor_checked(A).solve(B);
}

}  // namespace qdnm
