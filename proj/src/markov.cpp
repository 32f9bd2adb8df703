#include "qdnm/markov.hpp"

namespace qdnm {

namespace {
constexpr cplx kI(0.0, 1.0);
}

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H,
                              const std::vector<LindbladChannel>& channels) {
    Eigen::MatrixXcd out = -kI * (H * rho - rho * H);
    for (const auto& ch : channels) {
        const Eigen::MatrixXcd& c = ch.c;
        const Eigen::MatrixXcd cd = c.adjoint();
        const Eigen::MatrixXcd ccd = c * cd;
        const Eigen::MatrixXcd cdc = cd * c;
        out += (0.5 * ch.gamma * ch.nbar) *
               (2.0 * cd * rho * c - ccd * rho - rho * ccd);
        out += (0.5 * ch.gamma * (1.0 - ch.nbar)) *
               (2.0 * c * rho * cd - cdc * rho - rho * cdc);
    }
    return out;
}

Eigen::Vector3cd single_dot_rates(const Eigen::Vector3cd& state, double gamma_l, double gamma_r,
                                  double omega0) {
    Eigen::Vector3cd d;
    d(0) = -gamma_l * state(0) + gamma_r * state(1);
    d(1) = gamma_l * state(0) - gamma_r * state(1);
    d(2) = -(kI * omega0 + cplx(gamma_l + gamma_r, 0.0)) * state(2);
    return d;
}

Eigen::Matrix<cplx, 5, 1> dqd_rates(const Eigen::Matrix<cplx, 5, 1>& state, double gamma_l,
                                    double gamma_r, double omega1, double omega2, double Omega0) {
    const cplx r00 = state(0), r11 = state(1), r22 = state(2), r33 = state(3), r12 = state(4);
    const cplx r21 = std::conj(r12);
    Eigen::Matrix<cplx, 5, 1> d;
    d(0) = -gamma_l * r00 + gamma_r * r22;
    d(1) = gamma_l * r00 + gamma_r * r33 + kI * Omega0 * (r12 - r21);
    d(2) = -(gamma_l + gamma_r) * r22 - kI * Omega0 * (r12 - r21);
    d(3) = gamma_l * r22 - gamma_r * r33;
    d(4) = -kI * (omega1 - omega2) * r12 + kI * Omega0 * (r11 - r22) -
           0.5 * (gamma_l + gamma_r) * r12;
    return d;
}

Eigen::Vector4cd dqd_single_electron_rates(const Eigen::Vector4cd& state, double gamma_l,
                                           double gamma_r, double omega1, double omega2,
                                           double Omega0) {
    const cplx r00 = state(0), r11 = state(1), r22 = state(2), r12 = state(3);
    const cplx r21 = std::conj(r12);
    Eigen::Vector4cd d;
    d(0) = -gamma_l * r00 + gamma_r * r22;
    d(1) = gamma_l * r00 + kI * Omega0 * (r12 - r21);
    d(2) = -gamma_r * r22 - kI * Omega0 * (r12 - r21);
    d(3) = -kI * (omega1 - omega2) * r12 + kI * Omega0 * (r11 - r22) - 0.5 * gamma_r * r12;
    return d;
}

DeviationReport markov_limit_check(const TrajectoryTable& nonmarkov,
                                   const TrajectoryTable& oracle) {
    if (nonmarkov.grid.n_steps != oracle.grid.n_steps ||
        nonmarkov.grid.t_end != oracle.grid.t_end ||
        nonmarkov.grid.t_start != oracle.grid.t_start)
        throw InvalidInputError("markov_limit_check: grids do not match");
    if (nonmarkov.populations.rows() != oracle.populations.rows() ||
        nonmarkov.coherences.rows() != oracle.coherences.rows())
        throw InvalidInputError("markov_limit_check: component counts do not match");
    DeviationReport rep;
    if (nonmarkov.populations.size() > 0)
        rep.max_population_dev =
            (nonmarkov.populations - oracle.populations).cwiseAbs().maxCoeff();
    if (nonmarkov.coherences.size() > 0)
        rep.max_coherence_dev = (nonmarkov.coherences - oracle.coherences).cwiseAbs().maxCoeff();
    rep.max_total = std::max(rep.max_population_dev, rep.max_coherence_dev);
    return rep;
}

Eigen::Vector4cd dqd_single_electron_steady(double gamma_l, double gamma_r, double omega1,
                                            double omega2, double Omega0) {
    // Real 5-dim system on (r00, r11, r22, Re r12, Im r12); the generator rows
    // follow from dqd_single_electron_rates, the r00 row is replaced by the
    // population-sum normalization.
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(5, 5);
    const double dw = omega1 - omega2;
    // d r00 = -gL r00 + gR r22
    G(0, 0) = -gamma_l;
    G(0, 2) = gamma_r;
    // d r11 = gL r00 - 2 Omega0 Im r12
    G(1, 0) = gamma_l;
    G(1, 4) = -2.0 * Omega0;
    // d r22 = -gR r22 + 2 Omega0 Im r12
    G(2, 2) = -gamma_r;
    G(2, 4) = 2.0 * Omega0;
    // d Re r12 = dw Im r12 - gR/2 Re r12
    G(3, 3) = -0.5 * gamma_r;
    G(3, 4) = dw;
    // d Im r12 = -dw Re r12 + Omega0 (r11 - r22) - gR/2 Im r12
    G(4, 1) = Omega0;
    G(4, 2) = -Omega0;
    G(4, 3) = -dw;
    G(4, 4) = -0.5 * gamma_r;

    Eigen::MatrixXd A = G;
    A.row(0) << 1.0, 1.0, 1.0, 0.0, 0.0;  // normalization replaces the r00 row
    Eigen::VectorXd b = Eigen::VectorXd::Zero(5);
    b(0) = 1.0;
    const Eigen::MatrixXcd Ac = A.cast<cplx>();
    const Eigen::VectorXcd bc = b.cast<cplx>();
    Eigen::VectorXd x = solve_dense_linear(Ac, bc).real();
    Eigen::Vector4cd s;
    s << cplx(x(0), 0.0), cplx(x(1), 0.0), cplx(x(2), 0.0), cplx(x(3), x(4));
    return s;
}

}  // namespace qdnm
