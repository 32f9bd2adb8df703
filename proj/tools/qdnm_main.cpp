#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qdnm/config.hpp"
#include "qdnm/output.hpp"
#include "qdnm/runner.hpp"
#include "qdnm/validate.hpp"

namespace {

qdnm::RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qdnm::ConfigError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return qdnm::parse_config(text.str());
}

std::string pick_out(const std::string& flag_out, const qdnm::RunConfig& config,
                     const std::string& fallback) {
    if (!flag_out.empty()) return flag_out;
    if (!config.output_csv.empty()) return config.output_csv;
    return fallback;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-Markovian master-equation dynamics of quantum dots with fermionic leads"};
    app.require_subcommand(1);

    std::string config_path, out_path, plot_path;
    int threads = 1;

    auto* coeffs = app.add_subcommand("coefficients", "compute Gamma(t) tables as CSV");
    coeffs->add_option("--config", config_path, "config file")->required();
    coeffs->add_option("--out", out_path, "output CSV path");
    coeffs->add_option("--plot", plot_path, "also write a gnuplot script here");
    coeffs->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* prop = app.add_subcommand("propagate", "propagate the density matrix, write CSV");
    prop->add_option("--config", config_path, "config file")->required();
    prop->add_option("--out", out_path, "output CSV path");
    prop->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* val = app.add_subcommand("validate", "run the built-in validation suite");
    val->add_option("--config", config_path, "config file (grid.n_steps sets the resolution)");
    val->add_option("--out", out_path, "write the d-sweep coefficient CSV here");
    val->add_option("--threads", threads, "worker threads (0 = all cores)");

    double fig1_d = 0.0;
    double fig1_t_end = 3.0;
    int fig1_steps = 0;
    auto* fig1 = app.add_subcommand("fig1", "single-dot coefficient preset (requires --d)");
    fig1->add_option("--d", fig1_d, "OU bandwidth in mueV")->required();
    fig1->add_option("--t-end", fig1_t_end, "window in units of t0 (default 3)");
    fig1->add_option("--n-steps", fig1_steps, "grid steps (default: resolution from d)");
    fig1->add_option("--out", out_path, "output CSV path");
    fig1->add_option("--plot", plot_path, "also write a gnuplot script here");
    fig1->add_option("--threads", threads, "worker threads (0 = all cores)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (coeffs->parsed()) {
            auto config = load_config(config_path);
            qdnm::cmd_coefficients(config, pick_out(out_path, config, "coefficients.csv"),
                                   plot_path, threads);
            return 0;
        }
        if (prop->parsed()) {
            auto config = load_config(config_path);
            qdnm::cmd_propagate(config, pick_out(out_path, config, "propagate.csv"), threads);
            return 0;
        }
        if (fig1->parsed()) {
            auto config = qdnm::fig1_config(fig1_d, fig1_t_end, fig1_steps);
            qdnm::cmd_coefficients(config, pick_out(out_path, config, "fig1.csv"), plot_path,
                                   threads);
            return 0;
        }
        if (val->parsed()) {
            qdnm::ValidateOptions opt;
            if (!config_path.empty()) {
                auto config = load_config(config_path);
                opt.n_steps = config.n_steps;
            }
            opt.threads = threads;
            opt.csv_out = out_path;
            return qdnm::run_validate(opt, std::cout);
        }
    } catch (const qdnm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qdnm::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
