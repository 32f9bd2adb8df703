#include "qdnm/output.hpp"

#include <charconv>
#include <numbers>

namespace qdnm {

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 15);
    return std::string(buf, res.ptr);
}

namespace {

double time_scale(const RunConfig& config) {
    const double w = reference_frequency(config);
    return w != 0.0 ? 2.0 * std::numbers::pi / w : 1.0;
}

}  // namespace

std::string time_column_name(const RunConfig& config) {
    return reference_frequency(config) != 0.0 ? "t_over_t0" : "t_inv_mueV";
}

void write_coefficients_csv(std::ostream& out, const RunConfig& config,
                            const SingleDotCoefficients& coeffs) {
    const double ts = time_scale(config);
    out << time_column_name(config) << ",re_gamma1,im_gamma1,re_gamma2,im_gamma2\n";
    for (int k = 0; k < coeffs.grid.size(); ++k) {
        out << format_double(coeffs.grid.node(k) / ts) << ','
            << format_double(coeffs.gamma1(k).real()) << ','
            << format_double(coeffs.gamma1(k).imag()) << ','
            << format_double(coeffs.gamma2(k).real()) << ','
            << format_double(coeffs.gamma2(k).imag()) << '\n';
    }
}

void write_coefficients_csv(std::ostream& out, const RunConfig& config,
                            const DqdCoefficients& coeffs) {
    const double ts = time_scale(config);
    out << time_column_name(config);
    static const char* names[8] = {"L1", "L2", "L3", "L4", "R1", "R2", "R3", "R4"};
    for (const char* n : names) out << ",re_gamma_" << n << ",im_gamma_" << n;
    out << '\n';
    for (int k = 0; k < coeffs.grid.size(); ++k) {
        out << format_double(coeffs.grid.node(k) / ts);
        for (int q = 0; q < 8; ++q)
            out << ',' << format_double(coeffs.gammas[static_cast<size_t>(q)](k).real()) << ','
                << format_double(coeffs.gammas[static_cast<size_t>(q)](k).imag());
        out << '\n';
    }
}

void write_propagate_csv(std::ostream& out, const RunConfig& config, const Trajectory& traj) {
    const double ts = time_scale(config);
    const bool dqd = config.model == RunConfig::Model::dqd;
    out << time_column_name(config) << ",rho_00,rho_11";
    if (dqd) out << ",rho_22,rho_33";
    out << ",re_rho_01,im_rho_01";
    if (dqd) out << ",re_rho_12,im_rho_12";
    out << ",trace_dev,herm_dev\n";
    for (int k = 0; k < traj.grid.size(); ++k) {
        const auto& r = traj.rho[static_cast<size_t>(k)];
        out << format_double(traj.grid.node(k) / ts) << ',' << format_double(r(0, 0).real())
            << ',' << format_double(r(1, 1).real());
        if (dqd) out << ',' << format_double(r(2, 2).real()) << ',' << format_double(r(3, 3).real());
        out << ',' << format_double(r(0, 1).real()) << ',' << format_double(r(0, 1).imag());
        if (dqd) out << ',' << format_double(r(1, 2).real()) << ',' << format_double(r(1, 2).imag());
        out << ',' << format_double(traj.trace_dev(k)) << ',' << format_double(traj.herm_dev(k))
            << '\n';
    }
}

std::string plot_script(const std::string& csv_path, const RunConfig& config) {
    const bool dqd = config.model == RunConfig::Model::dqd;
    const std::string xlabel =
        reference_frequency(config) != 0.0 ? "t / t_0" : "t (1/mueV)";
    std::string s;
    s += "# gnuplot script; run as: gnuplot <this file>\n";
    s += "set datafile separator ','\n";
    s += "set terminal pngcairo size 900,720\n";
    s += "set output 'coefficients.png'\n";
    s += "set multiplot layout 2,1\n";
    s += "set key outside right\n";
    s += "set xlabel '" + xlabel + "'\n";
    if (!dqd) {
        s += "set ylabel 'Re Gamma_1 (mueV)'\n";
        s += "set title '(a) real part'\n";
        s += "plot '" + csv_path + "' using 1:2 with lines title 'Re Gamma1'\n";
        s += "set ylabel 'Im Gamma_1 (mueV)'\n";
        s += "set title '(b) imaginary part'\n";
        s += "plot '" + csv_path + "' using 1:3 with lines title 'Im Gamma1'\n";
    } else {
        static const char* names[8] = {"L1", "L2", "L3", "L4", "R1", "R2", "R3", "R4"};
        s += "set ylabel 'Re Gamma (mueV)'\n";
        s += "set title '(a) real parts'\n";
        s += "plot ";
        for (int q = 0; q < 8; ++q) {
            s += std::string(q ? ", " : "") + "'" + csv_path + "' using 1:" +
                 std::to_string(2 + 2 * q) + " with lines title 'Re " + names[q] + "'";
        }
        s += "\n";
        s += "set ylabel 'Im Gamma (mueV)'\n";
        s += "set title '(b) imaginary parts'\n";
        s += "plot ";
        for (int q = 0; q < 8; ++q) {
            s += std::string(q ? ", " : "") + "'" + csv_path + "' using 1:" +
                 std::to_string(3 + 2 * q) + " with lines title 'Im " + names[q] + "'";
        }
        s += "\n";
    }
    s += "unset multiplot\n";
    return s;
}

}  // namespace qdnm
