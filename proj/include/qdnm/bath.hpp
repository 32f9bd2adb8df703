#pragma once

#include <functional>
#include <utility>
#include <variant>

#include <Eigen/Dense>

#include "qdnm/grid.hpp"

namespace qdnm {

// Fermi-Dirac occupation. kT = 0 degenerates to the step function
// theta(mu - omega), with the conventional 1/2 at omega = mu.
double fermi_occupation(double omega, double mu, double kT);

// Ornstein-Uhlenbeck correlation (Gamma*d/2) * exp(-d*|tau|).
double ou_kernel(double gamma, double d, double tau);

// Exponential correlation with bandwidth d; `occupied` selects which branch
// carries the weight: an occupied lead feeds electrons (hole branch 2 active),
// an empty lead drains them (particle branch 1 active).
struct OrnsteinUhlenbeck {
    double bandwidth = 0.0;
    bool occupied = false;
};

// Nonnegative spectral density sampled on a finite frequency window; the
// kernel integrals truncate to this window, so choosing it wide enough is the
// caller's responsibility.
struct TabulatedSpectrum {
    UniformGrid omega;        // frequency window, µeV
    Eigen::VectorXd density;  // J(omega) >= 0 at the window nodes
};

// Flat wide-band lead: only meaningful for the Markovian oracles; it has no
// finite correlation kernel.
struct MarkovFlat {};

using SpectralModel = std::variant<OrnsteinUhlenbeck, TabulatedSpectrum, MarkovFlat>;

struct LeadSpec {
    char label = 'L';    // 'L' or 'R'
    double gamma = 0.0;  // tunneling rate, µeV
    double mu = 0.0;     // chemical potential, µeV
    double kT = 0.0;     // temperature as k_B*T, µeV
    SpectralModel spectral = MarkovFlat{};
};

// Two-time lead correlation function alpha(tau). Stationary, so a single real
// lag suffices; negative lags evaluate through conj(alpha(-tau)), which makes
// the conjugate-symmetry invariant hold by construction.
class CorrelationKernel {
  public:
    CorrelationKernel() = default;
    CorrelationKernel(std::function<cplx(double)> nonneg_lag_eval, int branch, bool is_zero = false)
        : eval_(std::move(nonneg_lag_eval)), branch_(branch), zero_(is_zero) {}

    static CorrelationKernel zero(int branch) {
        return CorrelationKernel([](double) { return cplx(0.0, 0.0); }, branch, true);
    }

    cplx operator()(double tau) const {
        if (zero_) return cplx(0.0, 0.0);
        return tau >= 0.0 ? eval_(tau) : std::conj(eval_(-tau));
    }

    int branch() const { return branch_; }
    bool is_zero() const { return zero_; }

  private:
    std::function<cplx(double)> eval_ = [](double) { return cplx(0.0, 0.0); };
    int branch_ = 1;
    bool zero_ = true;
};

// alpha_{lambda 1} (branch 1) or alpha_{lambda 2} (branch 2) of one lead.
CorrelationKernel kernel_from_spectral(const LeadSpec& lead, int branch);

// beta(tau) = alpha1(-tau) + alpha2(tau); drives the memory integrals of the
// auxiliary equations. Itself conjugate-symmetric.
CorrelationKernel beta_kernel(const CorrelationKernel& alpha1, const CorrelationKernel& alpha2);

// Markovian half-rates (1/2 Gamma (1 - nbar(omega)), 1/2 Gamma nbar(omega))
// entering the Lindblad oracle. Note the master-equation coefficient
// Gamma_2 tends to minus the second entry.
std::pair<double, double> markovian_coefficients(const LeadSpec& lead, double omega_sys);

// Sum of the two leads' kernels of one branch (the single dot couples to both
// leads through the same operator).
CorrelationKernel summed_kernel(const CorrelationKernel& a, const CorrelationKernel& b);

}  // namespace qdnm
