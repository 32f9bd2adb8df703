#include "qdnm/bath.hpp"

#include <cmath>

namespace qdnm {

double fermi_occupation(double omega, double mu, double kT) {
    if (kT < 0.0) throw InvalidInputError("fermi_occupation: kT must be >= 0");
    if (kT == 0.0) {
        if (omega < mu) return 1.0;
        if (omega > mu) return 0.0;
        return 0.5;
    }
    const double x = (omega - mu) / kT;
    if (x > 40.0) return std::exp(-x) / (1.0 + std::exp(-x));
    return 1.0 / (std::exp(x) + 1.0);
}

double ou_kernel(double gamma, double d, double tau) {
    if (gamma < 0.0) throw InvalidInputError("ou_kernel: gamma must be >= 0");
    if (!(d > 0.0)) throw InvalidInputError("ou_kernel: bandwidth must be > 0");
    return 0.5 * gamma * d * std::exp(-d * std::abs(tau));
}

CorrelationKernel kernel_from_spectral(const LeadSpec& lead, int branch) {
    if (branch != 1 && branch != 2)
        throw InvalidInputError("kernel_from_spectral: branch must be 1 or 2");
    if (lead.gamma < 0.0) throw InvalidInputError("kernel_from_spectral: gamma must be >= 0");

    if (const auto* ou = std::get_if<OrnsteinUhlenbeck>(&lead.spectral)) {
        const bool active = (branch == 2) == ou->occupied;
        if (!active || lead.gamma == 0.0) return CorrelationKernel::zero(branch);
        const double gamma = lead.gamma;
        const double d = ou->bandwidth;
        if (!(d > 0.0)) throw InvalidSpectrumError("kernel_from_spectral: OU bandwidth must be > 0");
        return CorrelationKernel(
            [gamma, d](double tau) { return cplx(ou_kernel(gamma, d, tau), 0.0); }, branch);
    }

    if (const auto* tab = std::get_if<TabulatedSpectrum>(&lead.spectral)) {
        if (tab->density.size() != tab->omega.size())
            throw InvalidSpectrumError("kernel_from_spectral: density/grid size mismatch");
        if (tab->density.size() < 2)
            throw InvalidSpectrumError("kernel_from_spectral: empty tabulated window");
        if ((tab->density.array() < 0.0).any())
            throw InvalidSpectrumError("kernel_from_spectral: spectral density must be >= 0");
        // alpha1 = int (1-nbar) J e^{-i w tau} dw, alpha2 = int nbar J e^{+i w tau} dw,
        // both truncated to the window and integrated with the trapezoid rule.
        const Eigen::VectorXd w = trapezoid_weights(tab->omega);
        Eigen::VectorXd weighted(tab->density.size());
        for (Eigen::Index k = 0; k < weighted.size(); ++k) {
            const double nbar = fermi_occupation(tab->omega.node(static_cast<int>(k)), lead.mu, lead.kT);
            const double occ = (branch == 1) ? 1.0 - nbar : nbar;
            weighted(k) = w(k) * occ * tab->density(k);
        }
        const double phase_sign = (branch == 1) ? -1.0 : 1.0;
        UniformGrid wg = tab->omega;
        return CorrelationKernel(
            [weighted, wg, phase_sign](double tau) {
                cplx acc(0.0, 0.0);
                for (Eigen::Index k = 0; k < weighted.size(); ++k) {
                    const double om = wg.node(static_cast<int>(k));
                    acc += weighted(k) * std::polar(1.0, phase_sign * om * tau);
                }
                return acc;
            },
            branch);
    }

    throw InvalidSpectrumError(
        "kernel_from_spectral: flat-band lead has no finite correlation kernel");
}

CorrelationKernel beta_kernel(const CorrelationKernel& alpha1, const CorrelationKernel& alpha2) {
    if (alpha1.is_zero() && alpha2.is_zero()) return CorrelationKernel::zero(1);
    return CorrelationKernel(
        [alpha1, alpha2](double tau) { return alpha1(-tau) + alpha2(tau); }, 1,
        alpha1.is_zero() && alpha2.is_zero());
}

std::pair<double, double> markovian_coefficients(const LeadSpec& lead, double omega_sys) {
    const double nbar = fermi_occupation(omega_sys, lead.mu, lead.kT);
    return {0.5 * lead.gamma * (1.0 - nbar), 0.5 * lead.gamma * nbar};
}

CorrelationKernel summed_kernel(const CorrelationKernel& a, const CorrelationKernel& b) {
    if (a.is_zero() && b.is_zero()) return CorrelationKernel::zero(a.branch());
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return CorrelationKernel([a, b](double tau) { return a(tau) + b(tau); }, a.branch());
}

}  // namespace qdnm
