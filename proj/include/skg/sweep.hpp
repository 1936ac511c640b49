#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skg/config.hpp"

namespace skg {

struct ResultRow {
    double sweep_value = 0.0;
    std::string metric;
    double mean = 0.0;
    double std_error = 0.0;
    long trials = 0;
    std::uint64_t seed = 0;
};

/// Evaluate every configured metric at every sweep value.  Closed forms are
/// exact (stderr 0, trials 1); stochastic metrics run `trials` Monte Carlo
/// streams seeded from (master_seed, sweep_index, trial_index).
std::vector<ResultRow> run_sweep(const RunConfig& config);

/// Render rows as CSV with the stable header "x,metric,mean,stderr,trials,seed".
std::string to_csv(const std::vector<ResultRow>& rows);

/// Names understood by run_figure.
const std::vector<std::string>& figure_names();

/// Emit the data series of one figure as CSV files (columns x,y,yerr) under
/// out_dir.  Returns the paths written.
std::vector<std::string> run_figure(const std::string& name, const RunConfig& config,
                                    const std::string& out_dir);

}  // namespace skg
