#include "skg/rates.hpp"

#include <algorithm>
#include <cmath>

namespace skg {
namespace {

constexpr double kPiE = 8.539734222673567;  // pi * e

double snr_linear(const LinkBudget& b) { return b.tx_power / b.noise_power; }

}  // namespace

void CovarianceSummary::validate() const {
    if (rho_ab < 0.0 || rho_ae < 0.0 || sigma_bar_sq < 0.0) {
        throw DomainError("CovarianceSummary: negative variance");
    }
    if (std::fabs(rho_cross) > std::sqrt(rho_ab_t() * rho_ae_t()) * (1.0 + 1e-12)) {
        throw DomainError("CovarianceSummary: cross-covariance exceeds valid range");
    }
}

CovarianceSummary covariance_summary(const LinkBudget& budget, double frob_sq, double rho,
                                     double sigma_bar_sq) {
    if (rho < 0.0 || rho > 1.0) {
        throw DomainError("covariance_summary: rho must lie in [0,1]");
    }
    CovarianceSummary cov;
    cov.sigma_bar_sq = sigma_bar_sq;
    cov.rho_ab = budget.beta_ab + budget.beta_ar * budget.beta_rb * frob_sq;
    cov.rho_ae = budget.beta_ae + budget.beta_ar * budget.beta_re * frob_sq;
    cov.rho_cross = rho * (std::sqrt(budget.beta_ab * budget.beta_ae) +
                           budget.beta_ar * std::sqrt(budget.beta_rb * budget.beta_re) * frob_sq);
    cov.validate();
    return cov;
}

double skr_lb(const CovarianceSummary& cov, int t_switch) {
    cov.validate();
    const double num =
        (cov.rho_ab_t() * cov.rho_ae_t() - cov.rho_cross * cov.rho_cross) * cov.rho_ab_t();
    const double den =
        cov.sigma_bar_sq * (2.0 * cov.rho_ab + cov.sigma_bar_sq) * cov.rho_ae_t();
    if (!(den > 0.0)) {
        throw DomainError("skr_lb: degenerate noise or covariance");
    }
    return 2.0 / double(t_switch) * log2_safe(num / den, "skr_lb");
}

double skr_lb_uncorrelated(const CovarianceSummary& cov, int t_switch) {
    const double den = cov.sigma_bar_sq * (2.0 * cov.rho_ab + cov.sigma_bar_sq);
    if (!(den > 0.0)) {
        throw DomainError("skr_lb_uncorrelated: degenerate noise");
    }
    return 2.0 / double(t_switch) * std::log2(1.0 + cov.rho_ab * cov.rho_ab / den);
}

double skr_lb_no_ris(const LinkBudget& budget, double rho, double sigma_bar_sq, int t_switch) {
    const double b_ab = budget.beta_ab;
    const double b_ae = budget.beta_ae;
    const double bt_ab = b_ab + sigma_bar_sq;
    const double bt_ae = b_ae + sigma_bar_sq;
    const double num = (bt_ab * bt_ae - rho * rho * b_ab * b_ae) * bt_ab;
    const double den = (2.0 * b_ab + sigma_bar_sq) * sigma_bar_sq * bt_ae;
    if (!(den > 0.0)) {
        throw DomainError("skr_lb_no_ris: degenerate noise");
    }
    return 2.0 / double(t_switch) * log2_safe(num / den, "skr_lb_no_ris");
}

double leakage(const CovarianceSummary& cov) {
    cov.validate();
    const double den = cov.rho_ab_t() * cov.rho_ae_t();
    if (!(den > 0.0)) {
        throw DomainError("leakage: degenerate covariance");
    }
    return -log2_safe(1.0 - cov.rho_cross * cov.rho_cross / den, "leakage");
}

double leakage_limit(const LinkBudget& budget, double rho, double frob_sq) {
    return leakage(covariance_summary(budget, frob_sq, rho, 0.0));
}

double leakage_no_ris(double rho) {
    if (rho < 0.0 || rho >= 1.0) {
        throw DomainError("leakage_no_ris: rho must lie in [0,1)");
    }
    return -std::log2(1.0 - rho * rho);
}

CeLeakageGap ce_leakage_gap(const LinkBudget& budget, double frob_sq, double rho,
                            double sigma_bar_sq) {
    const CovarianceSummary cov = covariance_summary(budget, frob_sq, rho, sigma_bar_sq);
    const double b_ae = budget.beta_ae;
    const double cross_d = rho * std::sqrt(budget.beta_ab * b_ae);  // E[G_ab conj(h_ae)]
    // E1 = Cov(G_ae, h_ae), E2 = Cov(G_ab, G_ae, h_ae).
    const double det_e1 = cov.rho_ae_t() * b_ae - b_ae * b_ae;
    const double det_e2 = cov.rho_ab_t() * det_e1 -
                          cov.rho_cross * (cov.rho_cross * b_ae - b_ae * cross_d) +
                          cross_d * (cov.rho_cross * b_ae - cov.rho_ae_t() * cross_d);
    if (!(det_e1 > 0.0) || !(det_e2 > 0.0)) {
        throw DomainError("ce_leakage_gap: singular conditioning covariance");
    }
    const double det_ab_ae = cov.rho_ab_t() * cov.rho_ae_t() - cov.rho_cross * cov.rho_cross;
    CeLeakageGap gap;
    gap.lhs = std::log2(kPiE * det_ab_ae / cov.rho_ae_t());
    gap.rhs = std::log2(kPiE * det_e2 / det_e1);
    gap.holds = gap.lhs > gap.rhs + 1e-12;
    return gap;
}

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) {
        throw DomainError("binary_entropy: p outside [0,1]");
    }
    double h = 0.0;
    if (p > 0.0) {
        h -= p * std::log2(p);
    }
    if (p < 1.0) {
        h -= (1.0 - p) * std::log2(1.0 - p);
    }
    return h;
}

double eskr(double p0, int q_levels, int t_switch) {
    return (1.0 - binary_entropy(p0)) * std::log2(double(q_levels)) / (double(t_switch) / 2.0);
}

double eve_intercept_bound(double leak, int q_levels, int n_blocks) {
    if (leak < 0.0) {
        throw DomainError("eve_intercept_bound: negative leakage");
    }
    const double base = std::sqrt(2.0 * leak) + 1.0 / double(q_levels);
    return std::min(1.0, std::pow(base, double(n_blocks)));
}

McEstimate ergodic_rate_ob(const Scenario& scenario, const ProtocolParams& params, long trials,
                           std::uint64_t seed, int workers) {
    params.validate();
    const ChannelSampler sampler(scenario.budget, scenario.corr);
    const int l_intervals = params.intervals();
    const int n = int(scenario.corr.matrix.rows());
    const double gamma = snr_linear(scenario.budget);
    const double sigma_bar = estimation_noise_variance(
        params.t_switch, scenario.budget.tx_power, scenario.budget.noise_power);
    return mc_mean(trials, seed, workers, [&](Rng& rng) {
        const ChannelBlock blk = sampler.draw(rng);
        double best_est = -1.0;
        double best_true = 0.0;
        for (int l = 0; l < l_intervals; ++l) {
            // Fused phase draw + aggregate: same rng stream and arithmetic as
            // random_phase_matrix/aggregate, minus the per-interval allocation
            // (this loop dominates the large-L scaling-law runs).
            cx g = blk.h_ab;
            for (int i = 0; i < n; ++i) {
                g += std::conj(blk.h_ar[std::size_t(i)]) *
                     std::polar(1.0, rng.uniform_phase()) * blk.h_rb[std::size_t(i)];
            }
            const cx est = ls_estimate(g, rng, sigma_bar);
            if (std::norm(est) > best_est) {
                best_est = std::norm(est);
                best_true = std::norm(g);
            }
        }
        return std::log2(1.0 + gamma * best_true);
    });
}

double scaling_law_rate(long l, const LinkBudget& budget, double frob_sq) {
    if (l < 2) {
        throw DomainError("scaling_law_rate: needs L >= 2");
    }
    const double beta = budget.beta_ab + budget.beta_ar * budget.beta_rb * frob_sq;
    return log2_safe(std::log(double(l)) * beta * snr_linear(budget), "scaling_law_rate");
}

McEstimate optimal_ris_rate(const Scenario& scenario, long trials, std::uint64_t seed,
                            int workers) {
    const ChannelSampler sampler(scenario.budget, scenario.corr);
    const double gamma = snr_linear(scenario.budget);
    return mc_mean(trials, seed, workers, [&](Rng& rng) {
        const ChannelBlock blk = sampler.draw(rng);
        double amp = std::abs(blk.h_ab);
        for (std::size_t i = 0; i < blk.h_ar.size(); ++i) {
            amp += std::abs(blk.h_ar[i]) * std::abs(blk.h_rb[i]);
        }
        return std::log2(1.0 + gamma * amp * amp);
    });
}

McEstimate direct_rate(const LinkBudget& budget, long trials, std::uint64_t seed, int workers) {
    const double gamma = snr_linear(budget);
    const double beta = budget.beta_ab;
    return mc_mean(trials, seed, workers, [gamma, beta](Rng& rng) {
        return std::log2(1.0 + gamma * std::norm(rng.cnormal(beta)));
    });
}

double secrecy_rate(double eskr_val, double r_info, int t_total, int t_key) {
    if (t_total < 1 || t_key < 0 || t_key > t_total) {
        throw DomainError("secrecy_rate: invalid time split");
    }
    const double t = double(t_total);
    return std::min(double(t_key) / (2.0 * t) * eskr_val,
                    (t - double(t_key)) / t * r_info);
}

McEstimate wiretap_rate(const Scenario& scenario, long trials, std::uint64_t seed, int workers) {
    const ChannelSampler sampler(scenario.budget, scenario.corr);
    const double gamma = snr_linear(scenario.budget);
    McEstimate est = mc_mean(trials, seed, workers, [&](Rng& rng) {
        const ChannelBlock blk = sampler.draw(rng);
        return std::log2(1.0 + gamma * std::norm(blk.h_ab)) -
               std::log2(1.0 + gamma * std::norm(blk.h_ae));
    });
    est.mean = std::max(0.0, est.mean);
    return est;
}

double secrecy_rate_direct_key(const ProtocolParams& params, const LinkBudget& budget,
                               double rho, long trials, std::uint64_t seed, int workers) {
    params.validate();
    (void)rho;  // the match probability of the reciprocal pair does not depend on Eve
    // One estimate per block: the whole key slot T_k is the pilot budget.
    const double sigma_bar =
        estimation_noise_variance(params.t_key, budget.tx_power, budget.noise_power);
    const double p0 = match_prob_approx(params.q_levels, budget.beta_ab / sigma_bar);
    const double key_term = double(params.t_key) / (2.0 * params.t_total) *
                            eskr(p0, params.q_levels, params.t_key);
    const double info_term = (double(params.t_total) - params.t_key) / params.t_total *
                             direct_rate(budget, trials, seed, workers).mean;
    return std::min(key_term, info_term);
}

}  // namespace skg
