#include "qdnm/model.hpp"

namespace qdnm {

FermionOps build_fermion_ops(const SingleDotModel&) {
    FermionOps ops;
    ops.dim = 2;
    ops.c1 = Eigen::MatrixXcd::Zero(2, 2);
    ops.c1(0, 1) = 1.0;  // c = |0><1|
    ops.c2 = Eigen::MatrixXcd();
    return ops;
}

FermionOps build_fermion_ops(const DoubleDotModel&) {
    FermionOps ops;
    ops.dim = 4;
    ops.c1 = Eigen::MatrixXcd::Zero(4, 4);
    ops.c2 = Eigen::MatrixXcd::Zero(4, 4);
    // c1 = |0><1| + |2><3|
    ops.c1(0, 1) = 1.0;
    ops.c1(2, 3) = 1.0;
    // c2 = |0><2| - |1><3|, the sign from anticommuting past c1^dag
    ops.c2(0, 2) = 1.0;
    ops.c2(1, 3) = -1.0;
    return ops;
}

Eigen::MatrixXcd hamiltonian_matrix(const SingleDotModel& model) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
    h(1, 1) = model.omega0;
    return h;
}

Eigen::MatrixXcd hamiltonian_matrix(const DoubleDotModel& model) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(4, 4);
    h(1, 1) = model.omega1;
    h(2, 2) = model.omega2;
    h(3, 3) = model.omega1 + model.omega2;
    h(1, 2) = model.Omega0;
    h(2, 1) = model.Omega0;
    return h;
}

DensityDiagnostics validate_density(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != rho.cols()) throw InvalidInputError("validate_density: matrix not square");
    DensityDiagnostics d;
    d.trace_dev = std::abs(rho.trace() - cplx(1.0, 0.0));
    d.herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    Eigen::MatrixXcd sym = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = es.eigenvalues().minCoeff();
    return d;
}

Eigen::MatrixXcd basis_state_density(int label, int dim) {
    if (label < 0 || label >= dim)
        throw InvalidInputError("basis_state_density: label outside basis");
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    rho(label, label) = 1.0;
    return rho;
}

}  // namespace qdnm
