#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "skg/keygen.hpp"
#include "skg/mc.hpp"
#include "skg/scene.hpp"

namespace skg {

/// The covariance bundle feeding every closed-form rate: second moments of
/// the aggregate channels seen by Alice/Bob and Eve, their cross term, and
/// the estimation noise floor.
struct CovarianceSummary {
    double rho_ab = 0.0;
    double rho_ae = 0.0;
    double rho_cross = 0.0;
    double sigma_bar_sq = 0.0;

    double rho_ab_t() const { return rho_ab + sigma_bar_sq; }
    double rho_ae_t() const { return rho_ae + sigma_bar_sq; }
    void validate() const;
};

CovarianceSummary covariance_summary(const LinkBudget& budget, double frob_sq, double rho,
                                     double sigma_bar_sq);

/// Key-rate lower bound under correlated Eve observations, bits per symbol.
double skr_lb(const CovarianceSummary& cov, int t_switch);

/// Same bound when Eve is uncorrelated (rho = 0).
double skr_lb_uncorrelated(const CovarianceSummary& cov, int t_switch);

/// Direct-channel-only bound (RIS absent).
double skr_lb_no_ris(const LinkBudget& budget, double rho, double sigma_bar_sq, int t_switch);

/// Key leakage toward Eve, bits per estimate pair.
double leakage(const CovarianceSummary& cov);

/// Leakage in the noiseless-estimation limit (sigma_bar -> 0).
double leakage_limit(const LinkBudget& budget, double rho, double frob_sq);

/// Leakage without the RIS: -log2(1 - rho^2).
double leakage_no_ris(double rho);

struct CeLeakageGap {
    double lhs = 0.0;  // h(G_ab | G_ae)
    double rhs = 0.0;  // h(G_ab | G_ae, h_ae)
    bool holds = false;
};

/// Conditional-entropy comparison showing that Eve gains from also knowing
/// her direct channel.
CeLeakageGap ce_leakage_gap(const LinkBudget& budget, double frob_sq, double rho,
                            double sigma_bar_sq);

double binary_entropy(double p);

/// Effective secret key rate after reconciliation, bits per symbol.
double eskr(double p0, int q_levels, int t_switch);

/// Union bound on Eve guessing a whole key: min(1, (sqrt(2*leak) + 1/Q)^F).
double eve_intercept_bound(double leak, int q_levels, int n_blocks);

/// Opportunistic-beamforming ergodic rate: the transmitter reuses the best of
/// the L random RIS configurations observed during key generation, selected
/// by estimated magnitude and scored with the true channel.
McEstimate ergodic_rate_ob(const Scenario& scenario, const ProtocolParams& params, long trials,
                           std::uint64_t seed, int workers = 0);

/// Large-L growth law of the opportunistic rate.
double scaling_law_rate(long l, const LinkBudget& budget, double frob_sq);

/// Ergodic rate under per-block phase alignment (perfect CSI at the RIS).
McEstimate optimal_ris_rate(const Scenario& scenario, long trials, std::uint64_t seed,
                            int workers = 0);

/// Ergodic rate of the direct channel alone.
McEstimate direct_rate(const LinkBudget& budget, long trials, std::uint64_t seed,
                       int workers = 0);

/// min((T_k/2T) * ESKR, ((T - T_k)/T) * R_I).
double secrecy_rate(double eskr_val, double r_info, int t_total, int t_key);

/// Key-less benchmark: difference of legitimate and eavesdropper ergodic
/// rates, clamped at zero.
McEstimate wiretap_rate(const Scenario& scenario, long trials, std::uint64_t seed,
                        int workers = 0);

/// Secrecy rate when keys are drawn from the direct channel only: one
/// estimate per block with the whole T_k as pilot budget.
double secrecy_rate_direct_key(const ProtocolParams& params, const LinkBudget& budget,
                               double rho, long trials, std::uint64_t seed, int workers = 0);

struct RateReport {
    std::map<std::string, double> metrics;
};

}  // namespace skg
