// Acceptance suite: runs every acceptance criterion end to end and prints one
// PASS/FAIL line per criterion with the measured values, thresholds and
// runtimes. Exits with the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "qdnm/config.hpp"
#include "qdnm/doubledot.hpp"
#include "qdnm/markov.hpp"
#include "qdnm/output.hpp"
#include "qdnm/runner.hpp"
#include "qdnm/singledot.hpp"

using namespace qdnm;

namespace {

constexpr cplx kI(0.0, 1.0);
constexpr int kThreads = 0;  // all cores

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int num, const char* name, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("CRITERION %d %s: %s (%s)\n", num, name, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) { return format_double(v); }

LeadSpec ou_lead(char label, double gamma, double d, bool occupied, double mu) {
    LeadSpec l;
    l.label = label;
    l.gamma = gamma;
    l.mu = mu;
    l.kT = 0.0;
    l.spectral = OrnsteinUhlenbeck{d, occupied};
    return l;
}

std::pair<LeadSpec, LeadSpec> fig1_leads(double gamma, double d) {
    return {ou_lead('L', gamma, d, true, 1e9), ou_lead('R', gamma, d, false, -1e9)};
}

// ---- criterion 1: exponential-kernel final-value problems vs ODE oracles ---

Eigen::VectorXcd backward_oracle(double t, double w0, double gamma, double d, int n_nodes,
                                 int refine) {
    const int n_f = (n_nodes - 1) * refine;
    const double h = t / n_f;
    Eigen::Vector2cd s;
    s << 1.0, 0.0;
    Eigen::VectorXcd out(n_nodes);
    out(n_nodes - 1) = s(0);
    auto du = [&](const Eigen::Vector2cd& v) {
        Eigen::Vector2cd r;
        r(0) = -(kI * w0 * v(0) + gamma * d * v(1));
        r(1) = -(d * v(1) - v(0));
        return r;
    };
    for (int k = 1; k <= n_f; ++k) {
        Eigen::Vector2cd k1 = du(s), k2 = du(s + 0.5 * h * k1), k3 = du(s + 0.5 * h * k2),
                         k4 = du(s + h * k3);
        s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (k % refine == 0) out(n_nodes - 1 - k / refine) = s(0);
    }
    return out;
}

Eigen::VectorXcd mixed_oracle(double t, double w0, double weight, double d,
                              const std::function<cplx(double)>& source, int n_nodes, int refine) {
    const int n_f = (n_nodes - 1) * refine;
    const double h = t / n_f;
    auto march = [&](cplx f0, bool with_source) {
        Eigen::Vector2cd v;
        v << f0, 0.0;
        Eigen::VectorXcd samples(n_nodes);
        samples(0) = v(0);
        auto rhs = [&](double s, const Eigen::Vector2cd& w) {
            Eigen::Vector2cd r;
            r(0) = kI * w0 * w(0) - weight * w(1) + (with_source ? source(s) : cplx(0.0, 0.0));
            r(1) = w(0) - d * w(1);
            return r;
        };
        for (int k = 1; k <= n_f; ++k) {
            const double s0 = (k - 1) * h;
            Eigen::Vector2cd k1 = rhs(s0, v), k2 = rhs(s0 + 0.5 * h, v + 0.5 * h * k1),
                             k3 = rhs(s0 + 0.5 * h, v + 0.5 * h * k2), k4 = rhs(s0 + h, v + h * k3);
            v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (k % refine == 0) samples(k / refine) = v(0);
        }
        return samples;
    };
    Eigen::VectorXcd particular = march(0.0, true);
    Eigen::VectorXcd homogeneous = march(1.0, false);
    const cplx c = (cplx(1.0, 0.0) - particular(n_nodes - 1)) / homogeneous(n_nodes - 1);
    return particular + c * homogeneous;
}

void criterion_1() {
    Timer timer;
    const double t = 0.2, w0 = 5.0, gamma = 10.0, d = 20.0;

    auto backward_err = [&](int n) {
        VolterraProblem p;
        p.dim = 1;
        p.coeff = Eigen::MatrixXcd::Constant(1, 1, kI * w0);
        p.mem_back = [gamma, d](double tau) {
            return Eigen::MatrixXcd::Constant(
                1, 1, cplx(gamma * d * std::exp(-d * std::abs(tau)), 0.0));
        };
        p.final_value = Eigen::VectorXcd::Ones(1);
        p.grid = UniformGrid(0.0, t, n);
        auto f = solve_backward(p);
        auto want = backward_oracle(t, w0, gamma, d, n + 1, 8);
        double worst = 0.0;
        for (int k = 0; k <= n; ++k) worst = std::max(worst, std::abs(f(0, k) - want(k)));
        return worst / want.cwiseAbs().maxCoeff();
    };
    auto mixed_err = [&](int n) {
        auto source = [](double s) { return cplx(0.4 * std::cos(3.0 * s), 0.2 * std::sin(2.0 * s)); };
        VolterraProblem p;
        p.dim = 1;
        p.coeff = Eigen::MatrixXcd::Constant(1, 1, kI * w0);
        p.mem_fwd = [gamma, d](double tau) {
            return Eigen::MatrixXcd::Constant(
                1, 1, cplx(-gamma * d * std::exp(-d * std::abs(tau)), 0.0));
        };
        p.final_value = Eigen::VectorXcd::Ones(1);
        p.grid = UniformGrid(0.0, t, n);
        p.source = Eigen::MatrixXcd(1, n + 1);
        for (int k = 0; k <= n; ++k) p.source(0, k) = source(p.grid.node(k));
        auto f = solve_mixed_final_value(p);
        auto want = mixed_oracle(t, w0, gamma * d, d, source, n + 1, 8);
        double worst = 0.0;
        for (int k = 0; k <= n; ++k) worst = std::max(worst, std::abs(f(0, k) - want(k)));
        return worst / want.cwiseAbs().maxCoeff();
    };

    const double back_2000 = backward_err(2000);
    const double mix_2000 = mixed_err(2000);
    const double order_back = std::log2(backward_err(500) / backward_err(1000));
    const double order_mix = std::log2(mixed_err(500) / mixed_err(1000));
    const double secs = timer.seconds();

    const bool pass = back_2000 <= 1e-6 && mix_2000 <= 1e-6 && std::abs(order_back - 2.0) <= 0.3 &&
                      std::abs(order_mix - 2.0) <= 0.3 && secs < 10.0;
    report(1, "volterra-vs-ode-oracle", pass,
           "backward_rel_err=" + fmt(back_2000) + " mixed_rel_err=" + fmt(mix_2000) +
               " (<=1e-6), orders=" + fmt(order_back) + "," + fmt(order_mix) +
               " (2.0+-0.3), runtime=" + fmt(secs) + "s (<10s)");
}

// ---- criterion 2: single-dot Markovian limit d-sweep ----------------------

double single_dot_deviation(double gamma, double d, double t_end, int n,
                            Trajectory* traj_out = nullptr,
                            SingleDotCoefficients* coeffs_out = nullptr) {
    auto [L, R] = fig1_leads(gamma, d);
    UniformGrid grid(0.0, t_end, n);
    auto coeffs = compute_coefficients(SingleDotModel{50.0}, L, R, grid, kThreads);
    auto traj = propagate(basis_state_density(0, 2), coeffs, 50.0);
    auto rhs = [&](double, const Eigen::Vector3cd& s) {
        return single_dot_rates(s, gamma, gamma, 50.0);
    };
    Eigen::Vector3cd s0;
    s0 << 1.0, 0.0, 0.0;
    auto oracle = propagate_rates(rhs, s0, grid);
    double dev = 0.0;
    for (int k = 0; k < grid.size(); ++k)
        dev = std::max(dev, std::abs(traj.rho[static_cast<size_t>(k)](1, 1).real() -
                                     oracle[static_cast<size_t>(k)](1).real()));
    if (traj_out) *traj_out = std::move(traj);
    if (coeffs_out) *coeffs_out = std::move(coeffs);
    return dev;
}

void criterion_2() {
    Timer timer;
    const double gamma = 100.0, t_end = 0.1;  // 10 / Gamma
    std::vector<double> ds = {gamma, 5.0 * gamma, 10.0 * gamma, 50.0 * gamma};
    std::vector<double> devs;
    std::string table;
    for (double d : ds) {
        const int n = std::max(600, static_cast<int>(std::ceil(t_end * d / 0.25)));
        devs.push_back(single_dot_deviation(gamma, d, t_end, n));
        table += " dev@" + fmt(d / gamma) + "G=" + fmt(devs.back());
    }
    bool monotone = true;
    for (size_t i = 1; i < devs.size(); ++i)
        if (devs[i] >= devs[i - 1]) monotone = false;
    const double secs = timer.seconds();
    const bool limit_ok = devs.back() < 1e-2;
    report(2, "single-dot-markov-limit", limit_ok && monotone && secs < 60.0,
           std::string("monotone=") + (monotone ? "yes" : "no") + "," + table +
               " (need <1e-2 at 50G), runtime=" + fmt(secs) + "s (<60s)");
}

// ---- criterion 3: coefficient limit values at d = 10 Gamma ----------------

void criterion_3() {
    Timer timer;
    const double gamma = 100.0, d = 10.0 * gamma, t_end = 0.1;
    const int n = 1200;
    auto [L, R] = fig1_leads(gamma, d);
    UniformGrid grid(0.0, t_end, n);
    auto coeffs = compute_coefficients(SingleDotModel{50.0}, L, R, grid, kThreads);

    double re_dev = 0.0, im_max = 0.0;
    for (int k = static_cast<int>(0.8 * n); k <= n; ++k) {
        re_dev = std::max(re_dev, std::abs(coeffs.gamma1(k).real() - 50.0));
        im_max = std::max(im_max, std::abs(coeffs.gamma1(k).imag()));
    }
    double sym = 0.0;
    const double scale = coeffs.gamma1.cwiseAbs().maxCoeff();
    for (int k = 0; k <= n; ++k)
        sym = std::max(sym, std::abs(coeffs.gamma2(k) + coeffs.gamma1(k)));
    const double secs = timer.seconds();

    const bool re_ok = re_dev <= 0.05 * 50.0;
    const bool im_ok = im_max <= 0.05 * 50.0;
    const bool sym_ok = sym <= 1e-8 * scale;
    report(3, "coefficient-limit-values", re_ok && im_ok && sym_ok && secs < 30.0,
           "settled |Re-50|=" + fmt(re_dev) + " (need <=2.5), settled |Im|=" + fmt(im_max) +
               " (need <=2.5), max|G2+G1|/max|G1|=" + fmt(sym / scale) +
               " (<=1e-8), runtime=" + fmt(secs) + "s (<30s)");
}

// ---- criterion 4: qualitative shape of Re Gamma_1 -------------------------

void criterion_4() {
    Timer timer;
    const double gamma = 100.0, w0 = 50.0;
    const double t0 = 2.0 * std::numbers::pi / w0;

    // small bandwidth: oscillations before settling
    int extrema = 0;
    {
        const double d = 0.5 * w0;
        const int n = 900;
        auto [L, R] = fig1_leads(gamma, d);
        auto c = compute_coefficients(SingleDotModel{w0}, L, R, UniformGrid(0.0, 3.0 * t0, n),
                                      kThreads);
        const double scale = c.gamma1.real().cwiseAbs().maxCoeff();
        int last_sign = 0;
        for (int k = 1; k <= n; ++k) {
            const double diff = c.gamma1(k).real() - c.gamma1(k - 1).real();
            if (std::abs(diff) < 1e-4 * scale) continue;
            const int s = diff > 0 ? 1 : -1;
            if (last_sign != 0 && s != last_sign) ++extrema;
            last_sign = s;
        }
    }

    // large bandwidth: within 5% of the asymptote from 0.5 t0 onward
    double settle_frac = 1e9;
    {
        const double d = 20.0 * w0;
        const int n = 1300;
        UniformGrid grid(0.0, 2.0 * t0, n);
        auto [L, R] = fig1_leads(gamma, d);
        auto c = compute_coefficients(SingleDotModel{w0}, L, R, grid, kThreads);
        const double asym = c.gamma1(n).real();
        double worst = 0.0;
        for (int k = 0; k <= n; ++k)
            if (grid.node(k) >= 0.5 * t0)
                worst = std::max(worst, std::abs(c.gamma1(k).real() - asym));
        settle_frac = worst / std::abs(asym);
    }
    const double secs = timer.seconds();
    const bool pass = extrema >= 2 && settle_frac <= 0.05 && secs < 60.0;
    report(4, "fig1-qualitative-shape", pass,
           "extrema@d=w0/2=" + std::to_string(extrema) + " (need >=2), settle_frac@d=20w0=" +
               fmt(settle_frac) + " (need <=0.05 by 0.5 t0), runtime=" + fmt(secs) + "s");
}

// ---- criteria 5 and 6: DQD Markovian limits --------------------------------

void criteria_5_and_6() {
    const double gamma = 100.0, d = 50.0 * gamma;
    DoubleDotModel model{50.0, 50.0, 0.25 * gamma, false};
    auto L = ou_lead('L', gamma, d, true, 1e9);
    auto R = ou_lead('R', gamma, d, false, -1e9);

    Timer t5;
    const double t_end = 0.06;
    const int n = 1500;
    UniformGrid grid(0.0, t_end, n);
    auto coeffs = compute_dqd_coefficients(model, L, R, grid, kThreads);
    const double coeff_secs = t5.seconds();

    const double half = 0.5 * gamma;      // Gamma/2 = 50
    const double tol = 0.02 * half;       // 2%
    auto settled = [&](int ch) { return coeffs.gammas[static_cast<size_t>(ch)](n); };
    const double dev_l1 = std::abs(settled(kL1));                    // -> 0
    const double dev_l2 = std::abs(settled(kL2) + cplx(half, 0.0));  // -> -Gamma/2
    const double dev_r3 = std::abs(settled(kR3) - cplx(half, 0.0));  // -> +Gamma/2
    const double dev_r4 = std::abs(settled(kR4));                    // -> 0
    double cross = 0.0;
    for (int ch : {kL3, kL4, kR1, kR2}) cross = std::max(cross, std::abs(settled(ch)));
    const bool pass5 = dev_l1 <= tol && dev_l2 <= tol && dev_r3 <= tol && dev_r4 <= tol &&
                       cross <= tol && coeff_secs < 120.0;
    report(5, "dqd-markov-coefficient-limits", pass5,
           "|L1|=" + fmt(dev_l1) + " |L2+50|=" + fmt(dev_l2) + " |R3-50|=" + fmt(dev_r3) +
               " |R4|=" + fmt(dev_r4) + " max|cross|=" + fmt(cross) + " (need <=" + fmt(tol) +
               "), runtime=" + fmt(coeff_secs) + "s (<120s)");

    Timer t6;
    auto traj = propagate_dqd(basis_state_density(0, 4), coeffs, model);
    auto rhs = [&](double, const Eigen::Matrix<cplx, 5, 1>& s) {
        return dqd_rates(s, gamma, gamma, model.omega1, model.omega2, model.Omega0);
    };
    Eigen::Matrix<cplx, 5, 1> s0;
    s0 << 1.0, 0.0, 0.0, 0.0, 0.0;
    auto oracle = propagate_rates(rhs, s0, grid);
    double dev = 0.0;
    for (int k = 0; k < grid.size(); ++k) {
        const auto& r = traj.rho[static_cast<size_t>(k)];
        const auto& o = oracle[static_cast<size_t>(k)];
        dev = std::max({dev, std::abs(r(0, 0).real() - o(0).real()),
                        std::abs(r(1, 1).real() - o(1).real()),
                        std::abs(r(2, 2).real() - o(2).real()),
                        std::abs(r(3, 3).real() - o(3).real()),
                        std::abs(std::abs(r(1, 2)) - std::abs(o(4)))});
    }
    const double secs6 = coeff_secs + t6.seconds();  // shares the coefficient table
    report(6, "dqd-markov-propagation", dev < 1e-2 && secs6 < 120.0,
           "max_dev=" + fmt(dev) + " (need <1e-2), runtime=" + fmt(secs6) + "s (<120s)");
}

// ---- criterion 7: structural invariants on randomized suites ---------------

void criterion_7() {
    Timer timer;
    std::mt19937 rng(7777);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto rand_c = [&]() { return cplx(u(rng), u(rng)); };

    double worst_trace = 0.0, worst_herm = 0.0;
    DoubleDotModel dqd{50.0, 45.0, 20.0, false};
    auto ops4 = build_fermion_ops(dqd);
    for (int trial = 0; trial < 200; ++trial) {
        Eigen::MatrixXcd r2(2, 2), r4(4, 4);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r2(i, j) = rand_c();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r4(i, j) = rand_c();
        r2 = Eigen::MatrixXcd(0.5 * (r2 + r2.adjoint()));
        r4 = Eigen::MatrixXcd(0.5 * (r4 + r4.adjoint()));
        auto d2 = liouvillian_apply(r2, rand_c(), rand_c(), 50.0);
        std::array<cplx, 8> gs;
        for (auto& g : gs) g = rand_c();
        auto d4 = liouvillian_dqd_apply(r4, gs, dqd, ops4);
        worst_trace = std::max({worst_trace, std::abs(d2.trace()), std::abs(d4.trace())});
        worst_herm = std::max({worst_herm, (d2 - d2.adjoint()).cwiseAbs().maxCoeff(),
                               (d4 - d4.adjoint()).cwiseAbs().maxCoeff()});
    }

    double worst_anti = 0.0;
    {
        const auto id = Eigen::MatrixXcd::Identity(4, 4);
        auto anti = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
            return a * b + b * a;
        };
        worst_anti = std::max({anti(ops4.c1, ops4.c1).cwiseAbs().maxCoeff(),
                               anti(ops4.c2, ops4.c2).cwiseAbs().maxCoeff(),
                               anti(ops4.c1, ops4.c2).cwiseAbs().maxCoeff(),
                               anti(ops4.c1, ops4.c2.adjoint()).cwiseAbs().maxCoeff(),
                               (anti(ops4.c1, ops4.c1.adjoint()) - id).cwiseAbs().maxCoeff(),
                               (anti(ops4.c2, ops4.c2.adjoint()) - id).cwiseAbs().maxCoeff()});
    }

    double worst_sym = 0.0;
    {
        TabulatedSpectrum ts;
        ts.omega = UniformGrid(-200.0, 250.0, 400);
        ts.density = Eigen::VectorXd::Zero(ts.omega.size());
        for (int k = 0; k < ts.omega.size(); ++k) {
            const double w = ts.omega.node(k);
            ts.density(k) = std::exp(-std::abs(w) / 70.0) * (1.5 + std::cos(w / 23.0));
        }
        LeadSpec tab;
        tab.label = 'L';
        tab.gamma = 30.0;
        tab.mu = 15.0;
        tab.kT = 6.0;
        tab.spectral = ts;
        LeadSpec ou = ou_lead('R', 80.0, 45.0, true, 1e9);
        for (const LeadSpec& lead : {tab, ou}) {
            for (int branch : {1, 2}) {
                auto kern = kernel_from_spectral(lead, branch);
                for (int i = 0; i < 100; ++i) {
                    const double tau = 1.5 * u(rng);
                    worst_sym = std::max(
                        worst_sym,
                        std::abs(kern(-tau) - std::conj(kern(tau))) / (1.0 + std::abs(kern(tau))));
                }
            }
        }
    }

    // 10^4-step propagation: trace, Hermiticity, positivity monitoring
    double trace_dev = 0.0, herm_dev = 0.0, min_eig = 1.0;
    {
        UniformGrid grid(0.0, 0.5, 10000);
        SingleDotCoefficients coeffs{
            grid, Eigen::VectorXcd::Constant(grid.size(), cplx(50.0, 0.0)),
            Eigen::VectorXcd::Constant(grid.size(), cplx(-50.0, 0.0))};
        auto traj = propagate(basis_state_density(0, 2), coeffs, 50.0);
        trace_dev = traj.trace_dev.maxCoeff();
        herm_dev = traj.herm_dev.maxCoeff();
        for (int k = 0; k < grid.size(); k += 100)
            min_eig = std::min(min_eig,
                               validate_density(traj.rho[static_cast<size_t>(k)]).min_eigenvalue);
    }

    const double secs = timer.seconds();
    const bool pass = worst_trace <= 1e-12 && worst_herm <= 1e-12 && worst_anti <= 1e-14 &&
                      worst_sym <= 1e-12 && trace_dev <= 1e-9 && herm_dev <= 1e-10 &&
                      min_eig >= -1e-9;
    report(7, "structural-invariants", pass,
           "trace=" + fmt(worst_trace) + " herm=" + fmt(worst_herm) + " anti=" + fmt(worst_anti) +
               " kernel_sym=" + fmt(worst_sym) + " prop_trace=" + fmt(trace_dev) +
               " min_eig=" + fmt(min_eig) + ", runtime=" + fmt(secs) + "s");
}

// ---- criterion 8: exact trivia ---------------------------------------------

void criterion_8() {
    Timer timer;
    bool pass = true;
    std::string detail;

    // Gamma(0) = 0 exactly, single and DQD
    {
        auto [L, R] = fig1_leads(100.0, 500.0);
        auto c = compute_coefficients(SingleDotModel{50.0}, L, R, UniformGrid(0.0, 0.01, 60), 1);
        pass = pass && c.gamma1(0) == cplx(0.0, 0.0) && c.gamma2(0) == cplx(0.0, 0.0);
        DoubleDotModel model{50.0, 50.0, 25.0, false};
        auto cd = compute_dqd_coefficients(model, L, R, UniformGrid(0.0, 0.01, 60), 1);
        for (const auto& g : cd.gammas) pass = pass && g(0) == cplx(0.0, 0.0);
    }

    // h(t,t) = 1 and all stated final conditions exact
    {
        auto [L, R] = fig1_leads(80.0, 300.0);
        auto k = SingleDotKernels::from_leads(L, R);
        const int n = 500;
        auto h = compute_h(0.05, k.beta, 50.0, n);
        auto aux = compute_AB(0.05, h, k, 50.0);
        pass = pass && h(n) == cplx(1.0, 0.0) && aux.A1(n) == cplx(1.0, 0.0) &&
               aux.B1(n) == cplx(1.0, 0.0) && aux.A2(n) == cplx(0.0, 0.0) &&
               aux.B2(n) == cplx(0.0, 0.0);

        DqdKernels dk = DqdKernels::from_leads(L, R);
        DoubleDotModel model{50.0, 48.0, 20.0, false};
        auto daux = compute_AB_dqd(0.05, dk, model, n);
        pass = pass && daux.hL1(n) == cplx(1.0, 0.0) && daux.hR1(n) == cplx(1.0, 0.0) &&
               daux.hL2(n) == cplx(0.0, 0.0) && daux.hR2(n) == cplx(0.0, 0.0);
        pass = pass && daux.A[kL1](n) == cplx(1.0, 0.0) && daux.A[kR3](n) == cplx(1.0, 0.0) &&
               daux.B[kL2](n) == cplx(1.0, 0.0) && daux.B[kR4](n) == cplx(1.0, 0.0);
        for (int ch : {kL2, kL3, kL4, kR1, kR2, kR4})
            pass = pass && daux.A[ch](n) == cplx(0.0, 0.0);
        for (int ch : {kL1, kL3, kL4, kR1, kR2, kR3})
            pass = pass && daux.B[ch](n) == cplx(0.0, 0.0);
    }

    // zero coupling: populations constant to 1e-12
    {
        UniformGrid grid(0.0, 0.3, 1500);
        SingleDotCoefficients coeffs{grid, Eigen::VectorXcd::Zero(grid.size()),
                                     Eigen::VectorXcd::Zero(grid.size())};
        Eigen::MatrixXcd rho0(2, 2);
        rho0 << 0.3, cplx(0.1, -0.2), cplx(0.1, 0.2), 0.7;
        auto traj = propagate(rho0, coeffs, 50.0);
        double drift = 0.0;
        for (const auto& r : traj.rho) {
            drift = std::max(drift, std::abs(r(0, 0).real() - 0.3));
            drift = std::max(drift, std::abs(r(1, 1).real() - 0.7));
        }
        pass = pass && drift <= 1e-12;
        detail = "population_drift=" + fmt(drift);
    }

    report(8, "exact-trivia", pass, detail + ", runtime=" + fmt(timer.seconds()) + "s");
}

// ---- criterion 9: DQD -> single-dot reduction ------------------------------

void criterion_9() {
    Timer timer;
    auto L = ou_lead('L', 90.0, 450.0, false, -1e9);  // particle branch active
    LeadSpec off = ou_lead('R', 0.0, 450.0, false, 0.0);
    DoubleDotModel model{45.0, 60.0, 0.0, false};
    UniformGrid grid(0.0, 0.08, 900);
    auto dqd = compute_dqd_coefficients(model, L, off, grid, kThreads);
    auto single = compute_coefficients(SingleDotModel{model.omega1}, L, off, grid, kThreads);
    const double scale = single.gamma1.cwiseAbs().maxCoeff();
    const double dev = (dqd.gammas[kL1] - single.gamma1).cwiseAbs().maxCoeff() / scale;
    const double secs = timer.seconds();
    report(9, "dqd-reduces-to-single-dot", dev <= 1e-8 && secs < 60.0,
           "rel_dev=" + fmt(dev) + " (need <=1e-8), runtime=" + fmt(secs) + "s (<60s)");
}

// ---- criterion 10: determinism ---------------------------------------------

void criterion_10() {
    Timer timer;
    auto config = fig1_config(1000.0, 1.0, 400);
    UniformGrid grid(0.0, absolute_t_end(config), config.n_steps);
    std::vector<std::string> outputs;
    for (int threads : {1, 4, 1}) {
        auto coeffs = compute_coefficients(SingleDotModel{config.omega0}, config.lead_l,
                                           config.lead_r, grid, threads);
        std::ostringstream out;
        write_coefficients_csv(out, config, coeffs);
        outputs.push_back(out.str());
    }
    const bool pass = outputs[0] == outputs[1] && outputs[0] == outputs[2];
    report(10, "deterministic-output", pass,
           std::string("byte_identical=") + (pass ? "yes" : "no") +
               " across runs and threads {1,4}, runtime=" + fmt(timer.seconds()) + "s");
}

}  // namespace

int main() {
    Timer total;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criteria_5_and_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("ACCEPTANCE: %d/10 criteria passed (total %.1fs)\n", 10 - failures,
                total.seconds());
    return failures;
}
