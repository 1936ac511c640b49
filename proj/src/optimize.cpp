#include "skg/optimize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace skg {
namespace {

double info_rate_tilde(const LinkBudget& b, double frob_sq) {
    const double beta = b.beta_ab + b.beta_ar * b.beta_rb * frob_sq;
    return log2_safe(beta * b.tx_power / b.noise_power, "info_rate_tilde");
}

/// R_I^(L): scaling-law surrogate; the log2(ln L) boost is undefined below
/// L = 2 and omitted there.
double info_rate_surrogate(double r_info_tilde, long l, bool include_loglog) {
    if (include_loglog && l >= 2) {
        return r_info_tilde + std::log2(std::log(double(l)));
    }
    return r_info_tilde;
}

double key_rate_bar(const Scenario& scenario, int t_switch, int q_levels) {
    const double sigma_bar = estimation_noise_variance(t_switch, scenario.budget.tx_power,
                                                       scenario.budget.noise_power);
    const CovarianceSummary cov =
        covariance_summary(scenario.budget, scenario.corr.frob_sq, scenario.corr.rho, sigma_bar);
    const double p0 = match_prob_approx(q_levels, cov.rho_ab / sigma_bar);
    // Worse-than-chance agreement reconciles to nothing; without the clamp the
    // entropy term would reward near-certain mismatches at large Q.
    return eskr(std::max(p0, 0.5), q_levels, t_switch);
}

}  // namespace

int tk_closed_form(int t_total, double r_key, double r_info_tilde, int t_switch) {
    if (!(r_key + r_info_tilde > 0.0)) {
        throw DomainError("tk_closed_form: rate sum must be positive");
    }
    if (t_switch < 2 || t_switch > t_total) {
        throw ConfigError("tk_closed_form: infeasible t_switch");
    }
    const double t_star = double(t_total) * r_info_tilde / (r_key + r_info_tilde);
    long k = std::lround(t_star / t_switch);
    const long k_max = t_total / t_switch;
    k = std::clamp(k, 1L, k_max);
    return int(k * t_switch);
}

int tk_numeric(int t_total, int t_switch, double r_key, const TkInfoParams& info,
               std::vector<TraceEntry>* trace) {
    if (t_switch < 2 || t_switch > t_total) {
        throw ConfigError("tk_numeric: empty feasible set");
    }
    const double t = double(t_total);
    int best_tk = -1;
    double best_obj = 0.0;
    for (int tk = t_switch; tk <= t_total; tk += t_switch) {
        const long l = tk / t_switch;
        const double r_info = info_rate_surrogate(info.r_info_tilde, l, info.include_loglog);
        // |(r_key + r_info_tilde) Tk + loglog (Tk - T) - T r_info_tilde| / T,
        // written as the gap between the two intersecting lines
        const double obj =
            std::fabs(double(tk) / t * r_key - (t - double(tk)) / t * r_info);
        if (trace) {
            trace->push_back({"t_key", double(tk), obj});
        }
        if (best_tk < 0 || obj < best_obj) {
            best_tk = tk;
            best_obj = obj;
        }
    }
    return best_tk;
}

int ts_optimal() { return 2; }

int q_search(const Scenario& scenario, const ProtocolParams& params,
             const std::vector<int>& q_candidates, std::vector<TraceEntry>* trace) {
    if (q_candidates.empty()) {
        throw ConfigError("q_search: no candidates");
    }
    const double r_info_tilde = info_rate_tilde(scenario.budget, scenario.corr.frob_sq);
    const long l = params.intervals();
    int best_q = 0;
    double best_obj = 0.0;
    for (int q : q_candidates) {
        if (q < 2 || !std::has_single_bit(unsigned(q))) {
            throw ConfigError("q_search: candidates must be powers of two");
        }
        const double r_key = key_rate_bar(scenario, params.t_switch, q);
        const double r_info = info_rate_surrogate(r_info_tilde, l, true);
        const double denom = r_key + r_info;
        const double obj = denom > 0.0 ? r_key * r_info / (2.0 * denom) : 0.0;
        if (trace) {
            trace->push_back({"q", double(q), obj});
        }
        if (best_q == 0 || obj > best_obj) {
            best_q = q;
            best_obj = obj;
        }
    }
    return best_q;
}

double surrogate_secrecy_rate(const Scenario& scenario, const ProtocolParams& params) {
    params.validate();
    const double r_key = key_rate_bar(scenario, params.t_switch, params.q_levels);
    const double r_info = info_rate_surrogate(
        info_rate_tilde(scenario.budget, scenario.corr.frob_sq), params.intervals(), true);
    return std::max(0.0, secrecy_rate(r_key, r_info, params.t_total, params.t_key));
}

OptimizationResult optimize_all(const Scenario& scenario, int t_total, int ts_lower_bound) {
    if (t_total < 2) {
        throw ConfigError("optimize_all: t_total too small");
    }
    OptimizationResult res;
    int ts = std::max(ts_optimal(), ts_lower_bound);
    if (ts % 2 != 0) {
        ++ts;  // protocol needs an even switching interval
    }
    res.t_switch_star = ts;

    const double r_info_tilde = info_rate_tilde(scenario.budget, scenario.corr.frob_sq);
    // Provisional mid-range Q for the time split; q_search refines Q after.
    const int provisional_q = 4;
    const double r_key = key_rate_bar(scenario, ts, provisional_q);
    res.t_key_star_closed = tk_closed_form(t_total, r_key, r_info_tilde, ts);
    res.t_key_star =
        tk_numeric(t_total, ts, r_key, {r_info_tilde, true}, &res.search_trace);

    ProtocolParams params;
    params.t_total = t_total;
    params.t_key = res.t_key_star;
    params.t_switch = ts;
    params.q_levels = provisional_q;
    res.q_star = q_search(scenario, params, {2, 4, 8, 16, 32, 64}, &res.search_trace);

    params.q_levels = res.q_star;
    res.secrecy_rate = surrogate_secrecy_rate(scenario, params);
    return res;
}

}  // namespace skg
