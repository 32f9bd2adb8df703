#include "qdnm/doubledot.hpp"

#include "qdnm/interp.hpp"
#include "qdnm/parallel.hpp"
#include "qdnm/rk4.hpp"

namespace qdnm {

namespace {

constexpr cplx kI(0.0, 1.0);

struct DqdTables {
    ScalarKernelTable aL1, aL2, aR1, aR2;
    DiagKernelTable<2> beta_back;   // diag(betaL(-mh), betaR(-mh)) for the h pairs
    DiagKernelTable<2> beta_fwd_A;  // diag(-betaL(+mh), -betaR(+mh)) for the A systems
    DiagKernelTable<2> beta_fwd_B;  // diag(-betaL(-mh), -betaR(-mh)): reflected, B systems
};

DqdTables build_tables(const DqdKernels& k, double h, int n) {
    DqdTables t;
    t.aL1 = ScalarKernelTable::build(k.aL1, h, n);
    t.aL2 = ScalarKernelTable::build(k.aL2, h, n);
    t.aR1 = ScalarKernelTable::build(k.aR1, h, n);
    t.aR2 = ScalarKernelTable::build(k.aR2, h, n);
    auto bL = ScalarKernelTable::build(k.betaL, h, n);
    auto bR = ScalarKernelTable::build(k.betaR, h, n);
    const bool zero = bL.zero && bR.zero;
    t.beta_back.zero = t.beta_fwd_A.zero = t.beta_fwd_B.zero = zero;
    t.beta_back.vals.resize(static_cast<size_t>(n) + 1, VecD<2>::Zero());
    t.beta_fwd_A.vals.resize(static_cast<size_t>(n) + 1, VecD<2>::Zero());
    t.beta_fwd_B.vals.resize(static_cast<size_t>(n) + 1, VecD<2>::Zero());
    for (int m = 0; m <= n; ++m) {
        const size_t s = static_cast<size_t>(m);
        t.beta_back.vals[s](0) = bL.neg[s];
        t.beta_back.vals[s](1) = bR.neg[s];
        t.beta_fwd_A.vals[s](0) = -bL.pos[s];
        t.beta_fwd_A.vals[s](1) = -bR.pos[s];
        t.beta_fwd_B.vals[s](0) = -bL.neg[s];
        t.beta_fwd_B.vals[s](1) = -bR.neg[s];
    }
    return t;
}

MatD<2> coupling_matrix(const DoubleDotModel& model) {
    MatD<2> M;
    M(0, 0) = kI * model.omega1;
    M(0, 1) = kI * model.Omega0;
    M(1, 0) = kI * model.Omega0;
    M(1, 1) = kI * model.omega2;
    return M;
}

Eigen::VectorXcd component(const std::vector<VecD<2>>& f, int which) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(f.size()));
    for (size_t k = 0; k < f.size(); ++k) out(static_cast<Eigen::Index>(k)) = f[k](which);
    return out;
}

std::vector<VecD<2>> pair_source(const Eigen::VectorXcd& left, const Eigen::VectorXcd& right) {
    std::vector<VecD<2>> out(static_cast<size_t>(left.size()));
    for (Eigen::Index k = 0; k < left.size(); ++k) {
        out[static_cast<size_t>(k)](0) = left(k);
        out[static_cast<size_t>(k)](1) = right(k);
    }
    return out;
}

struct DqdAuxCore {
    // Pair samples per channel group; [0]=L component, [1]=R component.
    std::vector<VecD<2>> h1;               // (h_L1, h_R1)
    std::array<std::vector<VecD<2>>, 4> A;  // j = 1..4
    std::array<std::vector<VecD<2>>, 4> B;
};

DqdAuxCore solve_aux(const DqdTables& t, const DoubleDotModel& model, double h, int m) {
    DqdAuxCore aux;
    const MatD<2> M = coupling_matrix(model);
    VecD<2> ones;
    ones << 1.0, 1.0;
    aux.h1 = solve_backward_core<2>(M, t.beta_back, nullptr, ones, h, m);
    // The n = 2 pair has zero final value and no source, hence vanishes.

    const Eigen::VectorXcd hL1 = component(aux.h1, 0);
    const Eigen::VectorXcd hR1 = component(aux.h1, 1);
    const Eigen::VectorXcd zeros = Eigen::VectorXcd::Zero(m + 1);

    // Sources, Appendix-B table with h_{L2} = h_{R2} = 0:
    //   j in {1,2}: U_L = aL2 * h_L1, U_R = aR2 * h_R2 = 0,
    //               V_L = aL1 * h_L1, V_R = aR1 * h_R2 = 0.
    //   j in {3,4}: U_L = aL2 * h_L2 = 0, U_R = aR2 * h_R1,
    //               V_L = aL1 * h_L2 = 0, V_R = aR1 * h_R1.
    auto U12 = pair_source(convolve_core(t.aL2, LagOrientation::forward, hL1, h, m), zeros);
    auto V12 = pair_source(convolve_core(t.aL1, LagOrientation::reflected, hL1, h, m), zeros);
    auto U34 = pair_source(zeros, convolve_core(t.aR2, LagOrientation::forward, hR1, h, m));
    auto V34 = pair_source(zeros, convolve_core(t.aR1, LagOrientation::reflected, hR1, h, m));

    VecD<2> e_l, e_r, zero2;
    e_l << 1.0, 0.0;
    e_r << 0.0, 1.0;
    zero2.setZero();

    // Finals: A_L1 = 1 and A_R3 = 1; B_L2 = 1 and B_R4 = 1; everything else 0.
    {
        const std::vector<VecD<2>> finals = {e_l, zero2};
        auto sol = solve_mixed_core<2>(M, t.beta_fwd_A, &U12, finals, h, m);
        aux.A[0] = std::move(sol[0]);
        aux.A[1] = std::move(sol[1]);
    }
    {
        const std::vector<VecD<2>> finals = {zero2, e_l};
        auto sol = solve_mixed_core<2>(M, t.beta_fwd_B, &V12, finals, h, m);
        aux.B[0] = std::move(sol[0]);
        aux.B[1] = std::move(sol[1]);
    }
    {
        const std::vector<VecD<2>> finals = {e_r, zero2};
        auto sol = solve_mixed_core<2>(M, t.beta_fwd_A, &U34, finals, h, m);
        aux.A[2] = std::move(sol[0]);
        aux.A[3] = std::move(sol[1]);
    }
    {
        const std::vector<VecD<2>> finals = {zero2, e_r};
        auto sol = solve_mixed_core<2>(M, t.beta_fwd_B, &V34, finals, h, m);
        aux.B[2] = std::move(sol[0]);
        aux.B[3] = std::move(sol[1]);
    }
    return aux;
}

std::array<cplx, 8> gamma_from_aux(const DqdTables& t, const DqdAuxCore& aux, double h, int m) {
    std::array<cplx, 8> g;
    g.fill(cplx(0.0, 0.0));
    if (m == 0) return g;
    for (int j = 0; j < 4; ++j) {
        cplx gl(0.0, 0.0), gr(0.0, 0.0);
        for (int k = 0; k <= m; ++k) {
            const double w = (k == 0 || k == m) ? 0.5 * h : h;
            const size_t ks = static_cast<size_t>(k);
            gl += w * (t.aL1.at(k - m) * aux.A[static_cast<size_t>(j)][ks](0) -
                       t.aL2.at(m - k) * aux.B[static_cast<size_t>(j)][ks](0));
            gr += w * (t.aR1.at(k - m) * aux.A[static_cast<size_t>(j)][ks](1) -
                       t.aR2.at(m - k) * aux.B[static_cast<size_t>(j)][ks](1));
        }
        g[static_cast<size_t>(kL1 + j)] = gl;
        g[static_cast<size_t>(kR1 + j)] = gr;
    }
    return g;
}

}  // namespace

DqdKernels DqdKernels::from_leads(const LeadSpec& left, const LeadSpec& right) {
    DqdKernels k;
    k.aL1 = kernel_from_spectral(left, 1);
    k.aL2 = kernel_from_spectral(left, 2);
    k.aR1 = kernel_from_spectral(right, 1);
    k.aR2 = kernel_from_spectral(right, 2);
    k.betaL = beta_kernel(k.aL1, k.aL2);
    k.betaR = beta_kernel(k.aR1, k.aR2);
    return k;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> compute_h_pair(double t, const DqdKernels& k,
                                                             const DoubleDotModel& model, int n,
                                                             int n_steps) {
    if (n != 1 && n != 2) throw InvalidInputError("compute_h_pair: n must be 1 or 2");
    UniformGrid grid(0.0, t, n_steps);
    if (n == 2) {
        Eigen::VectorXcd z = Eigen::VectorXcd::Zero(grid.size());
        return {z, z};
    }
    auto tables = build_tables(k, grid.step(), n_steps);
    VecD<2> ones;
    ones << 1.0, 1.0;
    auto f = solve_backward_core<2>(coupling_matrix(model), tables.beta_back, nullptr, ones,
                                    grid.step(), n_steps);
    return {component(f, 0), component(f, 1)};
}

DqdAux compute_AB_dqd(double t, const DqdKernels& k, const DoubleDotModel& model, int n_steps) {
    UniformGrid grid(0.0, t, n_steps);
    auto tables = build_tables(k, grid.step(), n_steps);
    auto core = solve_aux(tables, model, grid.step(), n_steps);

    DqdAux aux;
    aux.hL1 = component(core.h1, 0);
    aux.hR1 = component(core.h1, 1);
    aux.hL2 = Eigen::VectorXcd::Zero(grid.size());
    aux.hR2 = Eigen::VectorXcd::Zero(grid.size());
    for (int j = 0; j < 4; ++j) {
        aux.A[static_cast<size_t>(kL1 + j)] = component(core.A[static_cast<size_t>(j)], 0);
        aux.A[static_cast<size_t>(kR1 + j)] = component(core.A[static_cast<size_t>(j)], 1);
        aux.B[static_cast<size_t>(kL1 + j)] = component(core.B[static_cast<size_t>(j)], 0);
        aux.B[static_cast<size_t>(kR1 + j)] = component(core.B[static_cast<size_t>(j)], 1);
    }
    return aux;
}

std::array<cplx, 8> gamma_dqd_at(double t, const DqdAux& aux, const DqdKernels& k) {
    const int m = static_cast<int>(aux.hL1.size()) - 1;
    std::array<cplx, 8> g;
    g.fill(cplx(0.0, 0.0));
    if (m < 1) return g;
    UniformGrid grid(0.0, t, m);
    auto tables = build_tables(k, grid.step(), m);
    DqdAuxCore core;
    for (int j = 0; j < 4; ++j) {
        core.A[static_cast<size_t>(j)] =
            pair_source(aux.A[static_cast<size_t>(kL1 + j)], aux.A[static_cast<size_t>(kR1 + j)]);
        core.B[static_cast<size_t>(j)] =
            pair_source(aux.B[static_cast<size_t>(kL1 + j)], aux.B[static_cast<size_t>(kR1 + j)]);
    }
    return gamma_from_aux(tables, core, grid.step(), m);
}

DqdCoefficients compute_dqd_coefficients(const DoubleDotModel& model, const LeadSpec& left,
                                         const LeadSpec& right, const UniformGrid& grid,
                                         int threads) {
    if (grid.t_start != 0.0)
        throw InvalidInputError("compute_dqd_coefficients: outer grid must start at t = 0");
    auto kernels = DqdKernels::from_leads(left, right);
    const double h = grid.step();
    auto tables = build_tables(kernels, h, grid.n_steps);

    DqdCoefficients out;
    out.grid = grid;
    for (auto& g : out.gammas) g = Eigen::VectorXcd::Zero(grid.size());

    parallel_for(1, grid.size(), threads, [&](int m) {
        auto aux = solve_aux(tables, model, h, m);
        auto g = gamma_from_aux(tables, aux, h, m);
        for (int q = 0; q < 8; ++q) out.gammas[static_cast<size_t>(q)](m) = g[static_cast<size_t>(q)];
    });
    return out;
}

Eigen::MatrixXcd liouvillian_dqd_apply(const Eigen::MatrixXcd& rho,
                                       const std::array<cplx, 8>& gammas,
                                       const DoubleDotModel& model, const FermionOps& ops) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw InvalidInputError("liouvillian_dqd_apply: expected a 4x4 density matrix");
    const Eigen::MatrixXcd H = hamiltonian_matrix(model);
    Eigen::MatrixXcd out = -kI * (H * rho - rho * H);

    // Adds g [A, rho B+] + g* [B rho, A+] when sandwich==true,
    // else g [A, B+ rho] + g* [rho B, A+]; each pair is mutually adjoint, so
    // the generator maps Hermitian to Hermitian and annihilates the trace for
    // arbitrary complex g.
    auto add_pair = [&](cplx g, const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                        bool sandwich) {
        const Eigen::MatrixXcd Bd = B.adjoint();
        const Eigen::MatrixXcd Ad = A.adjoint();
        if (sandwich) {
            const Eigen::MatrixXcd rBd = rho * Bd;
            out += g * (A * rBd - rBd * A);
            const Eigen::MatrixXcd Br = B * rho;
            out += std::conj(g) * (Br * Ad - Ad * Br);
        } else {
            const Eigen::MatrixXcd Bdr = Bd * rho;
            out += g * (A * Bdr - Bdr * A);
            const Eigen::MatrixXcd rB = rho * B;
            out += std::conj(g) * (rB * Ad - Ad * rB);
        }
    };

    add_pair(gammas[kL1], ops.c1, ops.c1, true);
    add_pair(gammas[kL2], ops.c1, ops.c1, false);
    add_pair(gammas[kL3], ops.c1, ops.c2, true);
    add_pair(gammas[kL4], ops.c1, ops.c2, false);
    add_pair(gammas[kR1], ops.c2, ops.c1, true);
    add_pair(gammas[kR2], ops.c2, ops.c1, false);
    add_pair(gammas[kR3], ops.c2, ops.c2, true);
    add_pair(gammas[kR4], ops.c2, ops.c2, false);
    return out;
}

Trajectory propagate_dqd(const Eigen::MatrixXcd& rho0, const DqdCoefficients& coeffs,
                         const DoubleDotModel& model) {
    auto d0 = validate_density(rho0);
    if (d0.trace_dev > 1e-9 || d0.herm_dev > 1e-10)
        throw InvalidInputError("propagate_dqd: initial state is not a valid density matrix");
    const FermionOps ops = build_fermion_ops(model);

    std::array<SampledFunction, 8> g;
    for (size_t q = 0; q < 8; ++q) g[q] = SampledFunction{coeffs.grid, coeffs.gammas[q]};
    auto rhs = [&](double t, const Eigen::MatrixXcd& r) {
        std::array<cplx, 8> gt;
        for (size_t q = 0; q < 8; ++q) gt[q] = g[q].at(t);
        return liouvillian_dqd_apply(r, gt, model, ops);
    };

    Trajectory traj;
    traj.grid = coeffs.grid;
    traj.rho.resize(static_cast<size_t>(coeffs.grid.size()));
    traj.trace_dev = Eigen::VectorXd::Zero(coeffs.grid.size());
    traj.herm_dev = Eigen::VectorXd::Zero(coeffs.grid.size());

    Eigen::MatrixXcd r = rho0;
    const double h = coeffs.grid.step();
    for (int k = 0; k < coeffs.grid.size(); ++k) {
        const double trace_dev = std::abs(r.trace() - cplx(1.0, 0.0));
        const double herm_dev = (r - r.adjoint()).cwiseAbs().maxCoeff();
        if (trace_dev > 1e-9)
            throw PropagationDivergedError(
                "propagate_dqd: trace drifted beyond tolerance at step " + std::to_string(k));
        if (herm_dev > 1e-10)
            throw PropagationDivergedError(
                "propagate_dqd: Hermiticity lost beyond tolerance at step " + std::to_string(k));
        traj.rho[static_cast<size_t>(k)] = r;
        traj.trace_dev(k) = trace_dev;
        traj.herm_dev(k) = herm_dev;
        if (k + 1 < coeffs.grid.size()) r = rk4_step(rhs, coeffs.grid.node(k), r, h);
    }
    return traj;
}

}  // namespace qdnm
