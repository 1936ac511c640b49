// skgsim: deterministic sweeps, figure data, and protocol-parameter
// optimization for the RIS key-generation simulator.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "skg/optimize.hpp"
#include "skg/rates.hpp"
#include "skg/sweep.hpp"

namespace {

skg::RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw skg::ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return skg::parse_config(text.str());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw skg::ConfigError("cannot write '" + path + "'");
    }
    out << content;
}

int cmd_sweep(const std::string& config_path, int workers_override) {
    skg::RunConfig cfg = load_config(config_path);
    if (workers_override > 0) {
        cfg.workers = workers_override;
    }
    const auto rows = skg::run_sweep(cfg);
    const std::string csv = skg::to_csv(rows);
    write_file(cfg.output_path, csv);
    std::cout << "wrote " << rows.size() << " rows to " << cfg.output_path << "\n";
    return 0;
}

int cmd_figure(const std::string& name, const std::string& config_path, long seed, long trials,
               int workers, const std::string& out_dir) {
    skg::RunConfig cfg = config_path.empty() ? skg::RunConfig{} : load_config(config_path);
    if (seed >= 0) {
        cfg.master_seed = std::uint64_t(seed);
    }
    if (trials > 0) {
        cfg.trials = trials;
    }
    if (workers > 0) {
        cfg.workers = workers;
    }
    for (const std::string& path : skg::run_figure(name, cfg, out_dir)) {
        std::cout << path << "\n";
    }
    return 0;
}

int cmd_optimize(const std::string& config_path) {
    const skg::RunConfig cfg = load_config(config_path);
    const skg::Scenario scenario = skg::build_scenario(cfg.scenario);
    const skg::OptimizationResult res =
        skg::optimize_all(scenario, cfg.protocol.t_total, cfg.protocol.t_switch);
    std::cout << "t_switch_star = " << res.t_switch_star << "\n";
    std::cout << "t_key_star = " << res.t_key_star << "\n";
    std::cout << "t_key_star_closed = " << res.t_key_star_closed << "\n";
    std::cout << "q_star = " << res.q_star << "\n";
    std::cout << "secrecy_rate = " << res.secrecy_rate << "\n";

    std::ostringstream trace;
    trace << "stage,candidate,objective\n";
    for (const auto& e : res.search_trace) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g", e.candidate, e.objective);
        trace << e.stage << ',' << buf << '\n';
    }
    write_file(cfg.output_path, trace.str());
    std::cout << "search trace written to " << cfg.output_path << "\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    const skg::RunConfig cfg = load_config(config_path);
    const skg::Scenario sc = skg::build_scenario(cfg.scenario);
    const double lambda = cfg.scenario.wavelength();
    const skg::Position eve = cfg.scenario.eve_position();
    const double sigma_bar = skg::estimation_noise_variance(
        cfg.protocol.t_switch, sc.budget.tx_power, sc.budget.noise_power);
    std::cout << skg::serialize_config(cfg);
    std::cout << "\n# derived quantities\n";
    std::cout << "# wavelength_m = " << lambda << "\n";
    std::cout << "# n_elements = " << sc.corr.matrix.rows() << "\n";
    std::cout << "# beta_ab = " << sc.budget.beta_ab << "\n";
    std::cout << "# beta_ae = " << sc.budget.beta_ae << "\n";
    std::cout << "# beta_be = " << sc.budget.beta_be << "\n";
    std::cout << "# beta_ar = " << sc.budget.beta_ar << "\n";
    std::cout << "# beta_rb = " << sc.budget.beta_rb << "\n";
    std::cout << "# beta_re = " << sc.budget.beta_re << "\n";
    std::cout << "# frob_sq = " << sc.corr.frob_sq << "\n";
    std::cout << "# sigma_bar_sq = " << sigma_bar << "\n";
    std::cout << "# rho_declared = " << cfg.scenario.rho << "\n";
    std::cout << "# rho_derived = "
              << skg::pearson_correlation(skg::distance(cfg.scenario.bob, eve), lambda) << "\n";
    std::cout << "# rho_in_use = " << sc.corr.rho << "\n";
    const skg::CovarianceSummary cov =
        skg::covariance_summary(sc.budget, sc.corr.frob_sq, sc.corr.rho, sigma_bar);
    const double skr = skg::skr_lb(cov, cfg.protocol.t_switch);
    std::cout << "# skr_lb_bits_per_symbol = " << skr << "\n";
    std::cout << "# skr_lb_bits_per_estimate = " << skr * (cfg.protocol.t_switch / 2.0)
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted secret key generation simulator"};
    app.require_subcommand(1);

    std::string config_path;
    int workers = 0;
    auto* sweep = app.add_subcommand("sweep", "run the sweep described by a config file");
    sweep->add_option("config", config_path, "config file")->required();
    sweep->add_option("--workers", workers, "worker thread count");

    std::string fig_name;
    std::string fig_config;
    std::string out_dir = ".";
    long seed = -1;
    long trials = 0;
    int fig_workers = 0;
    auto* figure = app.add_subcommand("figure", "emit the data series of one figure");
    figure->add_option("name", fig_name, "figure name")->required();
    figure->add_option("--config", fig_config, "base config file");
    figure->add_option("--seed", seed, "master seed");
    figure->add_option("--out", out_dir, "output directory");
    figure->add_option("--trials", trials, "Monte Carlo trials");
    figure->add_option("--workers", fig_workers, "worker thread count");

    std::string opt_config;
    auto* optimize = app.add_subcommand("optimize", "optimize (T_s, T_k, Q) for a scenario");
    optimize->add_option("config", opt_config, "config file")->required();

    std::string val_config;
    auto* validate = app.add_subcommand("validate", "parse a config and print derived values");
    validate->add_option("config", val_config, "config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) {
            return cmd_sweep(config_path, workers);
        }
        if (figure->parsed()) {
            return cmd_figure(fig_name, fig_config, seed, trials, fig_workers, out_dir);
        }
        if (optimize->parsed()) {
            return cmd_optimize(opt_config);
        }
        if (validate->parsed()) {
            return cmd_validate(val_config);
        }
    } catch (const skg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const skg::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
