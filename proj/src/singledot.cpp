#include "qdnm/singledot.hpp"

#include "qdnm/interp.hpp"
#include "qdnm/parallel.hpp"
#include "qdnm/rk4.hpp"

namespace qdnm {

namespace {

constexpr cplx kI(0.0, 1.0);

Eigen::VectorXcd to_vec(const std::vector<VecD<1>>& f) {
    Eigen::VectorXcd out(static_cast<Eigen::Index>(f.size()));
    for (size_t k = 0; k < f.size(); ++k) out(static_cast<Eigen::Index>(k)) = f[k](0);
    return out;
}

std::vector<VecD<1>> to_core(const Eigen::VectorXcd& v) {
    std::vector<VecD<1>> out(static_cast<size_t>(v.size()));
    for (Eigen::Index k = 0; k < v.size(); ++k) out[static_cast<size_t>(k)](0) = v(k);
    return out;
}

struct SingleDotTables {
    ScalarKernelTable a1, a2;
    DiagKernelTable<1> beta_back;  // beta(-m h), for the h equation
    DiagKernelTable<1> beta_fwd;   // -beta(+m h), for the A and B equations
};

SingleDotTables build_tables(const SingleDotKernels& k, double h, int n) {
    SingleDotTables t;
    t.a1 = ScalarKernelTable::build(k.alpha1, h, n);
    t.a2 = ScalarKernelTable::build(k.alpha2, h, n);
    auto beta = ScalarKernelTable::build(k.beta, h, n);
    t.beta_back.zero = beta.zero;
    t.beta_fwd.zero = beta.zero;
    t.beta_back.vals.resize(static_cast<size_t>(n) + 1, VecD<1>::Zero());
    t.beta_fwd.vals.resize(static_cast<size_t>(n) + 1, VecD<1>::Zero());
    for (int m = 0; m <= n; ++m) {
        t.beta_back.vals[static_cast<size_t>(m)](0) = beta.neg[static_cast<size_t>(m)];
        t.beta_fwd.vals[static_cast<size_t>(m)](0) = -beta.pos[static_cast<size_t>(m)];
    }
    return t;
}

struct AuxCore {
    std::vector<VecD<1>> h, A1, A2, B1, B2;
};

AuxCore solve_aux(const SingleDotTables& t, double omega0, double h_step, int m) {
    AuxCore aux;
    MatD<1> M;
    M(0, 0) = kI * omega0;
    aux.h = solve_backward_core<1>(M, t.beta_back, nullptr, VecD<1>::Ones(), h_step, m);

    Eigen::VectorXcd hvec = to_vec(aux.h);
    auto U = to_core(convolve_core(t.a2, LagOrientation::forward, hvec, h_step, m));
    auto V = to_core(convolve_core(t.a1, LagOrientation::reflected, hvec, h_step, m));

    const std::vector<VecD<1>> finals = {VecD<1>::Ones(), VecD<1>::Zero()};
    auto A = solve_mixed_core<1>(M, t.beta_fwd, &U, finals, h_step, m);
    auto B = solve_mixed_core<1>(M, t.beta_fwd, &V, finals, h_step, m);
    aux.A1 = std::move(A[0]);
    aux.A2 = std::move(A[1]);
    aux.B1 = std::move(B[0]);
    aux.B2 = std::move(B[1]);
    return aux;
}

// Gamma_1 pairs A (final 1) with B (final 0); Gamma_2 the opposite pair.
std::pair<cplx, cplx> gamma_from_aux(const SingleDotTables& t, const AuxCore& aux, double h_step,
                                     int m) {
    if (m == 0) return {cplx(0.0, 0.0), cplx(0.0, 0.0)};
    cplx g1(0.0, 0.0), g2(0.0, 0.0);
    for (int k = 0; k <= m; ++k) {
        const double w = (k == 0 || k == m) ? 0.5 * h_step : h_step;
        const cplx a1neg = t.a1.at(k - m);  // alpha_1(s - t), s <= t
        const cplx a2pos = t.a2.at(m - k);  // alpha_2(t - s)
        g1 += w * (a1neg * aux.A1[static_cast<size_t>(k)](0) -
                   a2pos * aux.B2[static_cast<size_t>(k)](0));
        g2 += w * (a1neg * aux.A2[static_cast<size_t>(k)](0) -
                   a2pos * aux.B1[static_cast<size_t>(k)](0));
    }
    return {g1, g2};
}

}  // namespace

SingleDotKernels SingleDotKernels::from_leads(const LeadSpec& left, const LeadSpec& right) {
    SingleDotKernels k;
    k.alpha1 = summed_kernel(kernel_from_spectral(left, 1), kernel_from_spectral(right, 1));
    k.alpha2 = summed_kernel(kernel_from_spectral(left, 2), kernel_from_spectral(right, 2));
    k.beta = beta_kernel(k.alpha1, k.alpha2);
    return k;
}

Eigen::VectorXcd compute_h(double t, const CorrelationKernel& beta, double omega0, int n_steps) {
    UniformGrid grid(0.0, t, n_steps);
    auto table = ScalarKernelTable::build(beta, grid.step(), n_steps);
    DiagKernelTable<1> back;
    back.zero = table.zero;
    back.vals.resize(static_cast<size_t>(n_steps) + 1, VecD<1>::Zero());
    for (int m = 0; m <= n_steps; ++m)
        back.vals[static_cast<size_t>(m)](0) = table.neg[static_cast<size_t>(m)];
    MatD<1> M;
    M(0, 0) = kI * omega0;
    return to_vec(solve_backward_core<1>(M, back, nullptr, VecD<1>::Ones(), grid.step(), n_steps));
}

SingleDotAux compute_AB(double t, const Eigen::VectorXcd& h_samples, const SingleDotKernels& k,
                        double omega0) {
    const int m = static_cast<int>(h_samples.size()) - 1;
    if (m < 1) throw InvalidInputError("compute_AB: need at least two s-grid nodes");
    UniformGrid grid(0.0, t, m);
    auto tables = build_tables(k, grid.step(), m);

    MatD<1> M;
    M(0, 0) = kI * omega0;
    auto U = to_core(convolve_core(tables.a2, LagOrientation::forward, h_samples, grid.step(), m));
    auto V = to_core(convolve_core(tables.a1, LagOrientation::reflected, h_samples, grid.step(), m));
    const std::vector<VecD<1>> finals = {VecD<1>::Ones(), VecD<1>::Zero()};
    auto A = solve_mixed_core<1>(M, tables.beta_fwd, &U, finals, grid.step(), m);
    auto B = solve_mixed_core<1>(M, tables.beta_fwd, &V, finals, grid.step(), m);

    SingleDotAux aux;
    aux.h = h_samples;
    aux.A1 = to_vec(A[0]);
    aux.A2 = to_vec(A[1]);
    aux.B1 = to_vec(B[0]);
    aux.B2 = to_vec(B[1]);
    return aux;
}

std::pair<cplx, cplx> gamma_at(double t, const SingleDotAux& aux, const SingleDotKernels& k) {
    const int m = static_cast<int>(aux.h.size()) - 1;
    if (m < 1) return {cplx(0.0, 0.0), cplx(0.0, 0.0)};
    UniformGrid grid(0.0, t, m);
    auto tables = build_tables(k, grid.step(), m);
    AuxCore core;
    core.A1 = to_core(aux.A1);
    core.A2 = to_core(aux.A2);
    core.B1 = to_core(aux.B1);
    core.B2 = to_core(aux.B2);
    return gamma_from_aux(tables, core, grid.step(), m);
}

SingleDotCoefficients compute_coefficients(const SingleDotModel& model, const LeadSpec& left,
                                           const LeadSpec& right, const UniformGrid& grid,
                                           int threads) {
    if (grid.t_start != 0.0)
        throw InvalidInputError("compute_coefficients: outer grid must start at t = 0");
    auto kernels = SingleDotKernels::from_leads(left, right);
    const double h = grid.step();
    auto tables = build_tables(kernels, h, grid.n_steps);

    SingleDotCoefficients out;
    out.grid = grid;
    out.gamma1 = Eigen::VectorXcd::Zero(grid.size());
    out.gamma2 = Eigen::VectorXcd::Zero(grid.size());

    parallel_for(1, grid.size(), threads, [&](int m) {
        AuxCore aux = solve_aux(tables, model.omega0, h, m);
        auto [g1, g2] = gamma_from_aux(tables, aux, h, m);
        out.gamma1(m) = g1;
        out.gamma2(m) = g2;
    });
    return out;
}

bool symmetric_gamma2_check(const SingleDotCoefficients& coeffs) {
    const double scale = coeffs.gamma1.cwiseAbs().maxCoeff();
    if (scale == 0.0) return coeffs.gamma2.cwiseAbs().maxCoeff() == 0.0;
    return (coeffs.gamma2 + coeffs.gamma1).cwiseAbs().maxCoeff() <= 1e-8 * scale;
}

Eigen::MatrixXcd liouvillian_apply(const Eigen::MatrixXcd& rho, cplx gamma1, cplx gamma2,
                                   double omega0) {
    if (rho.rows() != 2 || rho.cols() != 2)
        throw InvalidInputError("liouvillian_apply: expected a 2x2 density matrix");
    static const Eigen::Matrix2cd c = [] {
        Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
        m(0, 1) = 1.0;
        return m;
    }();
    static const Eigen::Matrix2cd cd = c.adjoint();
    const Eigen::Matrix2cd r = rho;
    Eigen::Matrix2cd H = Eigen::Matrix2cd::Zero();
    H(1, 1) = omega0;

    Eigen::Matrix2cd out = -kI * (H * r - r * H);
    const Eigen::Matrix2cd rc_dag = r * cd;
    const Eigen::Matrix2cd cdr = cd * r;
    out += gamma1 * (c * rc_dag - rc_dag * c);           // [c, rho c+]
    out += gamma2 * (c * cdr - cdr * c);                 // [c, c+ rho]
    out += std::conj(gamma1) * ((c * r) * cd - cd * (c * r));  // [c rho, c+]
    out += std::conj(gamma2) * ((r * c) * cd - cd * (r * c));  // [rho c, c+]
    return out;
}

Trajectory propagate(const Eigen::MatrixXcd& rho0, const SingleDotCoefficients& coeffs,
                     double omega0) {
    auto d0 = validate_density(rho0);
    if (d0.trace_dev > 1e-9 || d0.herm_dev > 1e-10)
        throw InvalidInputError("propagate: initial state is not a valid density matrix");

    SampledFunction g1{coeffs.grid, coeffs.gamma1};
    SampledFunction g2{coeffs.grid, coeffs.gamma2};
    auto rhs = [&](double t, const Eigen::MatrixXcd& r) {
        return liouvillian_apply(r, g1.at(t), g2.at(t), omega0);
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
            throw PropagationDivergedError("propagate: trace drifted beyond tolerance at step " +
                                           std::to_string(k));
        if (herm_dev > 1e-10)
            throw PropagationDivergedError(
                "propagate: Hermiticity lost beyond tolerance at step " + std::to_string(k));
        traj.rho[static_cast<size_t>(k)] = r;
        traj.trace_dev(k) = trace_dev;
        traj.herm_dev(k) = herm_dev;
        if (k + 1 < coeffs.grid.size()) r = rk4_step(rhs, coeffs.grid.node(k), r, h);
    }
    return traj;
}

}  // namespace qdnm
