#pragma once

#include <Eigen/Dense>

#include "qdnm/errors.hpp"
#include "qdnm/linalg.hpp"

namespace qdnm {

// Single level in the strong Coulomb blockade regime: H = omega0 c^dag c,
// basis {|0> empty, |1> occupied}.
struct SingleDotModel {
    double omega0 = 0.0;  // µeV
};

// Two coupled levels, one per dot, each blockaded to at most one electron.
// Basis {|0> both empty, |1> left occupied, |2> right occupied, |3> both}.
struct DoubleDotModel {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double Omega0 = 0.0;        // interdot coupling, µeV
    bool single_electron = false;  // restrict to <=1 electron total (rate oracle only)
};

// Annihilation operators with the ordering convention |3> = c1^dag c2^dag |0>,
// which forces c2|3> = -|1>. The sign convention lives here once and is
// pinned by tests.
struct FermionOps {
    Eigen::MatrixXcd c1;
    Eigen::MatrixXcd c2;  // unused (zero-size) for the single dot
    int dim = 2;
};

FermionOps build_fermion_ops(const SingleDotModel& model);
FermionOps build_fermion_ops(const DoubleDotModel& model);

Eigen::MatrixXcd hamiltonian_matrix(const SingleDotModel& model);
Eigen::MatrixXcd hamiltonian_matrix(const DoubleDotModel& model);

struct DensityDiagnostics {
    double trace_dev = 0.0;  // |Tr rho - 1|
    double herm_dev = 0.0;   // max |rho - rho^dag|
    double min_eigenvalue = 0.0;
};

// Positivity is monitored, never enforced: the exact equation preserves it,
// so a violation beyond tolerance signals numerical error and must surface.
DensityDiagnostics validate_density(const Eigen::MatrixXcd& rho);

Eigen::MatrixXcd basis_state_density(int label, int dim);

}  // namespace qdnm
