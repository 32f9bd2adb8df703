#pragma once

#include <Eigen/Dense>

#include "qdnm/bath.hpp"
#include "qdnm/grid.hpp"
#include "qdnm/model.hpp"
#include "qdnm/volterra.hpp"

namespace qdnm {

// Lead-summed kernels of the single dot: alpha_j = alpha_Lj + alpha_Rj and
// beta(tau) = alpha_1(-tau) + alpha_2(tau).
struct SingleDotKernels {
    CorrelationKernel alpha1;
    CorrelationKernel alpha2;
    CorrelationKernel beta;
    static SingleDotKernels from_leads(const LeadSpec& left, const LeadSpec& right);
};

// Sampled master-equation coefficients on the outer-time grid. Both vanish
// exactly at t = 0 (empty integration range).
struct SingleDotCoefficients {
    UniformGrid grid;
    Eigen::VectorXcd gamma1;
    Eigen::VectorXcd gamma2;
};

// Auxiliary functions for one outer time t, sampled on the s-grid [0, t].
// Final conditions: h(t)=1, A1(t)=B1(t)=1, A2(t)=B2(t)=0.
struct SingleDotAux {
    Eigen::VectorXcd h, A1, A2, B1, B2;
};

// h(t,s): backward-marchable final-value problem with the [s,t] beta memory.
Eigen::VectorXcd compute_h(double t, const CorrelationKernel& beta, double omega0, int n_steps);

// The four mixed final-value solves sharing the U (alpha2 * h) and
// V (alpha1 * h) convolution sources; the j index enters only through the
// final condition.
SingleDotAux compute_AB(double t, const Eigen::VectorXcd& h_samples, const SingleDotKernels& k,
                        double omega0);

// Coefficients at one outer time. The [c,rho c+] coefficient pairs the
// final-value-1 A with the final-value-0 B and vice versa; this is the
// pairing consistent with the Markovian limits and with the DQD labeling
// (the equal-index pairing makes Gamma_1 vanish identically in the symmetric
// configuration, contradicting the known limit values).
std::pair<cplx, cplx> gamma_at(double t, const SingleDotAux& aux, const SingleDotKernels& k);

// Full table over the outer grid; per-outer-time solves are independent and
// run on `threads` workers (0 = all cores), results ordered by grid index.
SingleDotCoefficients compute_coefficients(const SingleDotModel& model, const LeadSpec& left,
                                           const LeadSpec& right, const UniformGrid& grid,
                                           int threads = 1);

// max_k |Gamma2 + Gamma1| <= 1e-8 * max|Gamma1| (symmetric-tunneling identity).
bool symmetric_gamma2_check(const SingleDotCoefficients& coeffs);

// d rho/dt = -i[H,rho] + G1 [c, rho c+] + G2 [c, c+ rho] + h.c. terms.
Eigen::MatrixXcd liouvillian_apply(const Eigen::MatrixXcd& rho, cplx gamma1, cplx gamma2,
                                   double omega0);

struct Trajectory {
    UniformGrid grid;
    std::vector<Eigen::MatrixXcd> rho;
    Eigen::VectorXd trace_dev;
    Eigen::VectorXd herm_dev;
};

// RK4 propagation with linear interpolation of the coefficients at substage
// times; every state must stay Hermitian within 1e-10 and unit-trace within
// 1e-9 or the propagation aborts.
Trajectory propagate(const Eigen::MatrixXcd& rho0, const SingleDotCoefficients& coeffs,
                     double omega0);

}  // namespace qdnm
