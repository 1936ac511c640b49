#pragma once

#include <string>
#include <vector>

#include "skg/rates.hpp"
#include "skg/scene.hpp"

namespace skg {

struct TraceEntry {
    std::string stage;  // "t_key" or "q"
    double candidate = 0.0;
    double objective = 0.0;
};

struct OptimizationResult {
    int t_key_star = 0;
    int t_key_star_closed = 0;
    int t_switch_star = 0;
    int q_star = 0;
    double secrecy_rate = 0.0;
    std::vector<TraceEntry> search_trace;
};

/// Intersection of the key-rate and information-rate lines,
/// T * R~_I / (R_k + R~_I), rounded to the nearest feasible multiple of
/// t_switch in [t_switch, t_total].
int tk_closed_form(int t_total, double r_key, double r_info_tilde, int t_switch);

struct TkInfoParams {
    double r_info_tilde = 0.0;   // log2(beta_bar * P / sigma^2)
    bool include_loglog = true;  // add log2(ln L) with L = t_key / t_switch
};

/// Grid argmin of |key-term - info-term| over feasible t_key.
int tk_numeric(int t_total, int t_switch, double r_key, const TkInfoParams& info,
               std::vector<TraceEntry>* trace = nullptr);

/// The switching interval that maximizes the secrecy rate: always 2.
int ts_optimal();

/// Exhaustive search over quantization resolutions; ties break toward the
/// smaller Q.
int q_search(const Scenario& scenario, const ProtocolParams& params,
             const std::vector<int>& q_candidates, std::vector<TraceEntry>* trace = nullptr);

/// Decoupled one-shot optimization of (T_s, T_k, Q).
OptimizationResult optimize_all(const Scenario& scenario, int t_total, int ts_lower_bound = 2);

/// Closed-form surrogate secrecy rate used by the optimizer: key rate from
/// the match-probability approximation, information rate from the large-L
/// scaling law.
double surrogate_secrecy_rate(const Scenario& scenario, const ProtocolParams& params);

}  // namespace skg
