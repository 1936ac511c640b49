#include "skg/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "skg/optimize.hpp"
#include "skg/rates.hpp"

namespace skg {
namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int as_int(double v, const char* what) {
    if (v != std::floor(v) || v < 1.0 || v > 1e9) {
        throw ConfigError(std::string(what) + ": expected a positive integer, got " + fmt12(v));
    }
    return int(v);
}

/// One sweep point: the base config with the sweep value applied, plus the
/// derived scenario and protocol.
struct PointContext {
    RunConfig cfg;
    Scenario scenario;
    ProtocolParams params;
    double sigma_bar = 0.0;
    CovarianceSummary cov;
};

PointContext make_point(const RunConfig& base, double value) {
    PointContext ctx;
    ctx.cfg = base;
    int n_override = -1;
    const std::string& var = base.sweep.variable;
    if (var == "N") {
        n_override = as_int(value, "sweep N");
        if (!base.scenario.ris_enabled) {
            throw ConfigError("sweep over N requires ris_enabled");
        }
    } else if (var == "T_s") {
        ctx.cfg.protocol.t_switch = as_int(value, "sweep T_s");
    } else if (var == "T_k") {
        ctx.cfg.protocol.t_key = as_int(value, "sweep T_k");
    } else if (var == "Q") {
        ctx.cfg.protocol.q_levels = as_int(value, "sweep Q");
    } else if (var == "snr_db") {
        ctx.cfg.scenario.tx_power_dbm = base.scenario.noise_dbm + value;
    } else if (var == "eve_x") {
        Position eve = base.scenario.eve_position();
        eve.x = value;
        ctx.cfg.scenario.eve = eve;
    } else if (var == "L") {
        const int l = as_int(value, "sweep L");
        if (base.protocol.t_key % l != 0) {
            throw ConfigError("sweep L: " + std::to_string(l) + " does not divide t_key");
        }
        ctx.cfg.protocol.t_switch = base.protocol.t_key / l;
    } else {
        throw ConfigError("unknown sweep variable '" + var + "'");
    }
    ctx.scenario = build_scenario(ctx.cfg.scenario, n_override);
    ctx.params = to_params(ctx.cfg.protocol);
    ctx.sigma_bar = estimation_noise_variance(ctx.params.t_switch, ctx.scenario.budget.tx_power,
                                              ctx.scenario.budget.noise_power);
    ctx.cov = covariance_summary(ctx.scenario.budget, ctx.scenario.corr.frob_sq,
                                 ctx.scenario.corr.rho, ctx.sigma_bar);
    return ctx;
}

struct MetricValue {
    double mean = 0.0;
    double std_error = 0.0;
    long trials = 1;
};

MetricValue closed(double v) { return {v, 0.0, 1}; }

MetricValue from_mc(const McEstimate& e) { return {e.mean, e.std_error, e.trials}; }

std::vector<std::uint8_t> concat_keys(const std::vector<std::vector<std::uint8_t>>& keys) {
    std::vector<std::uint8_t> all;
    for (const auto& k : keys) {
        all.insert(all.end(), k.begin(), k.end());
    }
    return all;
}

MetricValue kmr_metric(const PointContext& ctx, std::uint64_t seed, int workers,
                       const char* pair) {
    return from_mc(mc_mean(ctx.cfg.trials, seed, workers, [&](Rng& rng) {
        const KeygenResult res = run_keygen(rng, ctx.scenario, ctx.params);
        const auto a = concat_keys(res.keys.bits_alice);
        const auto b = concat_keys(res.keys.bits_bob);
        const auto e = concat_keys(res.keys.bits_eve);
        if (pair[0] == 'a' && pair[1] == 'b') {
            return empirical_kmr(a, b);
        }
        if (pair[0] == 'a' && pair[1] == 'e') {
            return empirical_kmr(a, e);
        }
        return empirical_kmr(b, e);
    }));
}

/// Metrics that ignore the RIS entirely; sweeping the element count under
/// them is a configuration mistake.
bool metric_uses_ris(const std::string& name) {
    return name != "skr_lb_no_ris" && name != "leakage_no_ris" && name != "direct_rate" &&
           name != "wiretap_rate" && name != "secrecy_rate_direct_key";
}

MetricValue eval_metric(const std::string& name, const PointContext& ctx, std::uint64_t seed) {
    const int workers = ctx.cfg.workers;
    const long trials = ctx.cfg.trials;
    const Scenario& sc = ctx.scenario;
    const LinkBudget& b = sc.budget;
    const int ts = ctx.params.t_switch;

    if (name == "skr_lb") {
        return closed(skr_lb(ctx.cov, ts));
    }
    if (name == "skr_lb_uncorrelated") {
        return closed(skr_lb_uncorrelated(ctx.cov, ts));
    }
    if (name == "skr_lb_no_ris") {
        return closed(skr_lb_no_ris(b, sc.corr.rho, ctx.sigma_bar, ts));
    }
    if (name == "leakage") {
        return closed(leakage(ctx.cov));
    }
    if (name == "leakage_limit") {
        return closed(leakage_limit(b, sc.corr.rho, sc.corr.frob_sq));
    }
    if (name == "leakage_no_ris") {
        return closed(leakage_no_ris(sc.corr.rho));
    }
    if (name == "match_prob") {
        return closed(match_prob_approx(ctx.params.q_levels, ctx.cov.rho_ab / ctx.sigma_bar));
    }
    if (name == "eskr") {
        const double p0 = match_prob_approx(ctx.params.q_levels, ctx.cov.rho_ab / ctx.sigma_bar);
        return closed(eskr(p0, ctx.params.q_levels, ts));
    }
    if (name == "secrecy_rate") {
        return closed(surrogate_secrecy_rate(sc, ctx.params));
    }
    if (name == "scaling_law_rate") {
        return closed(scaling_law_rate(ctx.params.intervals(), b, sc.corr.frob_sq));
    }
    if (name == "eve_intercept_bound") {
        return closed(
            eve_intercept_bound(leakage(ctx.cov), ctx.params.q_levels, ctx.params.n_blocks));
    }
    if (name == "ergodic_rate_ob") {
        return from_mc(ergodic_rate_ob(sc, ctx.params, trials, seed, workers));
    }
    if (name == "optimal_ris_rate") {
        return from_mc(optimal_ris_rate(sc, trials, seed, workers));
    }
    if (name == "direct_rate") {
        return from_mc(direct_rate(b, trials, seed, workers));
    }
    if (name == "wiretap_rate") {
        return from_mc(wiretap_rate(sc, trials, seed, workers));
    }
    if (name == "secrecy_rate_direct_key") {
        return closed(
            secrecy_rate_direct_key(ctx.params, b, sc.corr.rho, trials, seed, workers));
    }
    if (name == "kmr_ab") {
        return kmr_metric(ctx, seed, workers, "ab");
    }
    if (name == "kmr_ae") {
        return kmr_metric(ctx, seed, workers, "ae");
    }
    if (name == "kmr_be") {
        return kmr_metric(ctx, seed, workers, "be");
    }
    if (name == "match_emp") {
        return from_mc(mc_mean(trials, seed, workers, [&](Rng& rng) {
            const KeygenResult res = run_keygen(rng, sc, ctx.params);
            return symbol_match_rate(res.record.est_ba, res.record.est_ab,
                                     ctx.params.q_levels);
        }));
    }
    throw ConfigError("unknown metric '" + name + "'");
}

}  // namespace

std::vector<ResultRow> run_sweep(const RunConfig& config) {
    for (const std::string& metric : config.sweep.metrics) {
        if (config.sweep.variable == "N" && !metric_uses_ris(metric)) {
            throw ConfigError("metric '" + metric + "' ignores the RIS; sweeping N under it "
                              "is not meaningful");
        }
    }
    std::vector<ResultRow> rows;
    for (std::size_t i = 0; i < config.sweep.values.size(); ++i) {
        const PointContext ctx = make_point(config, config.sweep.values[i]);
        const std::uint64_t point_seed = mix_seed(config.master_seed, std::uint64_t(i));
        for (const std::string& metric : config.sweep.metrics) {
            const MetricValue v = eval_metric(metric, ctx, point_seed);
            rows.push_back(
                {config.sweep.values[i], metric, v.mean, v.std_error, v.trials, point_seed});
        }
    }
    return rows;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << "x,metric,mean,stderr,trials,seed\n";
    for (const ResultRow& r : rows) {
        out << fmt12(r.sweep_value) << ',' << r.metric << ',' << fmt12(r.mean) << ','
            << fmt12(r.std_error) << ',' << r.trials << ',' << r.seed << '\n';
    }
    return out.str();
}

namespace {

struct SeriesPoint {
    double x;
    double y;
    double yerr;
};

std::string write_series(const std::string& out_dir, const std::string& file,
                         const std::vector<SeriesPoint>& points) {
    std::filesystem::create_directories(out_dir);
    const std::string path = (std::filesystem::path(out_dir) / file).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path);
    }
    out << "x,y,yerr\n";
    for (const SeriesPoint& p : points) {
        out << fmt12(p.x) << ',' << fmt12(p.y) << ',' << fmt12(p.yerr) << '\n';
    }
    return path;
}

RunConfig with(const RunConfig& base, const std::function<void(RunConfig&)>& edit) {
    RunConfig cfg = base;
    edit(cfg);
    return cfg;
}

std::vector<std::string> fig_skr_vs_n(const RunConfig& cfg, const std::string& out_dir) {
    const std::vector<double> ns = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    struct Variant {
        const char* file;
        const char* corr;
        bool zero_rho;
    };
    const Variant variants[] = {
        {"skr_vs_n_corr_rho0.csv", "sinc", true},
        {"skr_vs_n_corr_rho.csv", "sinc", false},
        {"skr_vs_n_iid_rho0.csv", "identity", true},
        {"skr_vs_n_iid_rho.csv", "identity", false},
    };
    std::vector<std::string> written;
    for (const Variant& v : variants) {
        const RunConfig run = with(cfg, [&](RunConfig& c) {
            c.scenario.ris_correlation = v.corr;
            if (v.zero_rho) {
                c.scenario.rho = 0.0;
                c.scenario.rho_mode = "declared";
            }
            c.sweep.variable = "N";
            c.sweep.values = ns;
            c.sweep.metrics = {"skr_lb"};
        });
        std::vector<SeriesPoint> pts;
        for (const ResultRow& r : run_sweep(run)) {
            pts.push_back({r.sweep_value, r.mean, r.std_error});
        }
        written.push_back(write_series(out_dir, v.file, pts));
    }
    // The no-RIS benchmark does not depend on N; the flat series is replicated
    // across the same x grid for plotting.
    const Scenario base = build_scenario(cfg.scenario);
    const double sigma_bar = estimation_noise_variance(
        cfg.protocol.t_switch, base.budget.tx_power, base.budget.noise_power);
    const double flat =
        skr_lb_no_ris(base.budget, base.corr.rho, sigma_bar, cfg.protocol.t_switch);
    std::vector<SeriesPoint> pts;
    for (double n : ns) {
        pts.push_back({n, flat, 0.0});
    }
    written.push_back(write_series(out_dir, "skr_vs_n_no_ris.csv", pts));
    return written;
}

std::vector<std::string> fig_match_vs_snr(const RunConfig& cfg, const std::string& out_dir) {
    const std::vector<double> snrs_db = {10, 15, 20, 25, 30, 35, 40};
    const long symbols = std::max<long>(cfg.trials, 100000);
    std::vector<std::string> written;
    int series = 0;
    for (int q : {2, 4, 8}) {
        std::vector<SeriesPoint> analytic;
        std::vector<SeriesPoint> empirical;
        for (std::size_t i = 0; i < snrs_db.size(); ++i) {
            const double snr = db_to_linear(snrs_db[i]);
            analytic.push_back({snrs_db[i], match_prob_approx(q, snr), 0.0});
            // Direct simulation of the approximation's model: one Gaussian
            // symbol, two independent noisy phase estimates.
            const double noise = 1.0 / snr;
            const McEstimate emp = mc_mean(
                symbols, mix_seed(cfg.master_seed, series, i), cfg.workers, [&](Rng& rng) {
                    const cx g = rng.cnormal(1.0);
                    const cx e1 = ls_estimate(g, rng, noise);
                    const cx e2 = ls_estimate(g, rng, noise);
                    return quantize_phase(e1, q) == quantize_phase(e2, q) ? 1.0 : 0.0;
                });
            empirical.push_back({snrs_db[i], emp.mean, emp.std_error});
        }
        written.push_back(write_series(
            out_dir, "match_vs_snr_q" + std::to_string(q) + "_analytic.csv", analytic));
        written.push_back(write_series(
            out_dir, "match_vs_snr_q" + std::to_string(q) + "_empirical.csv", empirical));
        ++series;
    }
    return written;
}

std::vector<std::string> fig_kmr_vs_l(const RunConfig& cfg, const std::string& out_dir) {
    const RunConfig run = with(cfg, [](RunConfig& c) {
        c.sweep.variable = "L";
        c.sweep.values = {1, 2, 4, 5, 10, 20};
        c.sweep.metrics = {"kmr_ab", "kmr_ae", "kmr_be"};
        c.trials = std::min<long>(c.trials, 40);
    });
    std::vector<std::vector<SeriesPoint>> series(3);
    for (const ResultRow& r : run_sweep(run)) {
        const int idx = r.metric == "kmr_ab" ? 0 : r.metric == "kmr_ae" ? 1 : 2;
        series[idx].push_back({r.sweep_value, r.mean, r.std_error});
    }
    return {write_series(out_dir, "kmr_vs_l_ab.csv", series[0]),
            write_series(out_dir, "kmr_vs_l_ae.csv", series[1]),
            write_series(out_dir, "kmr_vs_l_be.csv", series[2])};
}

std::vector<std::string> fig_rate_vs_snr(const RunConfig& cfg, const std::string& out_dir) {
    const std::vector<double> snrs_db = {90, 100, 110, 120, 130};
    std::vector<std::string> written;
    for (int l : {4, 16, 64}) {
        const RunConfig run = with(cfg, [&](RunConfig& c) {
            c.protocol.t_key = l * c.protocol.t_switch;
            c.sweep.variable = "snr_db";
            c.sweep.values = snrs_db;
            c.sweep.metrics = {"ergodic_rate_ob"};
        });
        std::vector<SeriesPoint> pts;
        for (const ResultRow& r : run_sweep(run)) {
            pts.push_back({r.sweep_value, r.mean, r.std_error});
        }
        written.push_back(
            write_series(out_dir, "rate_vs_snr_ob_l" + std::to_string(l) + ".csv", pts));
    }
    for (const char* metric : {"optimal_ris_rate", "direct_rate"}) {
        const RunConfig run = with(cfg, [&](RunConfig& c) {
            c.sweep.variable = "snr_db";
            c.sweep.values = snrs_db;
            c.sweep.metrics = {metric};
        });
        std::vector<SeriesPoint> pts;
        for (const ResultRow& r : run_sweep(run)) {
            pts.push_back({r.sweep_value, r.mean, r.std_error});
        }
        written.push_back(
            write_series(out_dir, "rate_vs_snr_" + std::string(metric) + ".csv", pts));
    }
    return written;
}

std::vector<std::string> fig_rs_vs_ts(const RunConfig& cfg, const std::string& out_dir) {
    const RunConfig run = with(cfg, [](RunConfig& c) {
        c.protocol.t_key = 400;
        c.sweep.variable = "T_s";
        c.sweep.values = {2, 4, 10, 20, 40};
        c.sweep.metrics = {"secrecy_rate"};
    });
    std::vector<SeriesPoint> pts;
    for (const ResultRow& r : run_sweep(run)) {
        pts.push_back({r.sweep_value, r.mean, r.std_error});
    }
    return {write_series(out_dir, "rs_vs_ts.csv", pts)};
}

std::vector<std::string> fig_rs_vs_q(const RunConfig& cfg, const std::string& out_dir) {
    std::vector<std::string> written;
    for (double p_dbm : {10.0, 15.0, 20.0, 25.0}) {
        std::vector<SeriesPoint> pts;
        for (int q : {2, 4, 8, 16, 32}) {
            const RunConfig point = with(cfg, [&](RunConfig& c) {
                c.scenario.tx_power_dbm = p_dbm;
                c.protocol.t_switch = 2;
                c.protocol.q_levels = q;
            });
            const Scenario sc = build_scenario(point.scenario);
            // Pair each Q with its own closed-form optimal key-time split.
            const OptimizationResult opt = optimize_all(sc, point.protocol.t_total);
            ProtocolParams params = to_params(point.protocol);
            params.t_key = opt.t_key_star_closed;
            pts.push_back({double(q), surrogate_secrecy_rate(sc, params), 0.0});
        }
        written.push_back(write_series(
            out_dir, "rs_vs_q_p" + std::to_string(int(p_dbm)) + "dbm.csv", pts));
    }
    return written;
}

std::vector<std::string> fig_positions(const RunConfig& cfg, const std::string& out_dir) {
    const std::vector<double> eve_xs = {2, 6, 10, 14, 18, 22, 26, 29};
    const RunConfig run = with(cfg, [&](RunConfig& c) {
        c.sweep.variable = "eve_x";
        c.sweep.values = eve_xs;
        c.sweep.metrics = {"secrecy_rate", "secrecy_rate_direct_key", "wiretap_rate"};
    });
    std::vector<std::vector<SeriesPoint>> series(3);
    for (const ResultRow& r : run_sweep(run)) {
        const int idx = r.metric == "secrecy_rate" ? 0
                        : r.metric == "secrecy_rate_direct_key" ? 1 : 2;
        series[idx].push_back({r.sweep_value, r.mean, r.std_error});
    }
    return {write_series(out_dir, "positions_ris_key.csv", series[0]),
            write_series(out_dir, "positions_direct_key.csv", series[1]),
            write_series(out_dir, "positions_wiretap.csv", series[2])};
}

}  // namespace

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names = {
        "skr_vs_n", "match_vs_snr", "kmr_vs_l", "rate_vs_snr",
        "rs_vs_ts", "rs_vs_q",      "positions"};
    return names;
}

std::vector<std::string> run_figure(const std::string& name, const RunConfig& config,
                                    const std::string& out_dir) {
    if (name == "skr_vs_n") {
        return fig_skr_vs_n(config, out_dir);
    }
    if (name == "match_vs_snr") {
        return fig_match_vs_snr(config, out_dir);
    }
    if (name == "kmr_vs_l") {
        return fig_kmr_vs_l(config, out_dir);
    }
    if (name == "rate_vs_snr") {
        return fig_rate_vs_snr(config, out_dir);
    }
    if (name == "rs_vs_ts") {
        return fig_rs_vs_ts(config, out_dir);
    }
    if (name == "rs_vs_q") {
        return fig_rs_vs_q(config, out_dir);
    }
    if (name == "positions") {
        return fig_positions(config, out_dir);
    }
    throw ConfigError("unknown figure '" + name + "'");
}

}  // namespace skg
