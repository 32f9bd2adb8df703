#pragma once

#include <array>

#include <Eigen/Dense>

#include "qdnm/bath.hpp"
#include "qdnm/grid.hpp"
#include "qdnm/model.hpp"
#include "qdnm/singledot.hpp"
#include "qdnm/volterra.hpp"

namespace qdnm {

// Index order of the eight DQD coefficient channels.
enum DqdChannel : int { kL1 = 0, kL2, kL3, kL4, kR1, kR2, kR3, kR4 };

struct DqdKernels {
    CorrelationKernel aL1, aL2, aR1, aR2;
    CorrelationKernel betaL, betaR;
    static DqdKernels from_leads(const LeadSpec& left, const LeadSpec& right);
};

struct DqdCoefficients {
    UniformGrid grid;
    std::array<Eigen::VectorXcd, 8> gammas;  // order per DqdChannel
};

// Auxiliary functions of one outer time on the s-grid. Columns: samples; the
// pair (L-component, R-component) is carried as a 2-vector per node.
struct DqdAux {
    Eigen::VectorXcd hL1, hR1, hL2, hR2;
    std::array<Eigen::VectorXcd, 8> A;  // A_{lambda j} per DqdChannel
    std::array<Eigen::VectorXcd, 8> B;  // B_{lambda j} per DqdChannel
};

// Coupled backward pair (h_{Ln}, h_{Rn}); n = 1 carries final value (1,1),
// n = 2 carries (0,0) and is identically zero.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> compute_h_pair(double t, const DqdKernels& k,
                                                             const DoubleDotModel& model, int n,
                                                             int n_steps);

// All sixteen A/B functions for one outer time (four coupled dim-2 mixed
// solves; the j-pairs {1,2} and {3,4} share sources and system matrices and
// differ only in their final conditions).
DqdAux compute_AB_dqd(double t, const DqdKernels& k, const DoubleDotModel& model, int n_steps);

// Gamma_{lambda j}(t) from the aux functions by trapezoid quadrature.
std::array<cplx, 8> gamma_dqd_at(double t, const DqdAux& aux, const DqdKernels& k);

// Full coefficient table over the outer grid.
DqdCoefficients compute_dqd_coefficients(const DoubleDotModel& model, const LeadSpec& left,
                                         const LeadSpec& right, const UniformGrid& grid,
                                         int threads = 1);

// Sixteen-term generator (eight commutator terms plus Hermitian conjugates).
Eigen::MatrixXcd liouvillian_dqd_apply(const Eigen::MatrixXcd& rho,
                                       const std::array<cplx, 8>& gammas,
                                       const DoubleDotModel& model, const FermionOps& ops);

Trajectory propagate_dqd(const Eigen::MatrixXcd& rho0, const DqdCoefficients& coeffs,
                         const DoubleDotModel& model);

}  // namespace qdnm
