#pragma once

#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "skg/rng.hpp"

namespace skg {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long trials = 0;
};

inline int resolve_workers(int workers) {
    if (workers > 0) {
        return workers;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

/// Mean and standard error of per_trial(rng) over `trials` independent
/// streams seeded mix_seed(seed, trial).  Per-trial values are stored and
/// reduced in trial order, so the result is bit-identical for any worker
/// count.
template <typename F>
McEstimate mc_mean(long trials, std::uint64_t seed, int workers, F&& per_trial) {
    std::vector<double> values(static_cast<std::size_t>(trials));
    const int nw = std::min<long>(resolve_workers(workers), trials);
    auto run_range = [&](long lo, long hi) {
        for (long t = lo; t < hi; ++t) {
            Rng rng(mix_seed(seed, std::uint64_t(t)));
            values[std::size_t(t)] = per_trial(rng);
        }
    };
    if (nw <= 1) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nw);
        for (int w = 0; w < nw; ++w) {
            const long lo = trials * w / nw;
            const long hi = trials * (w + 1) / nw;
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    // Kahan-compensated sums in fixed order.
    double sum = 0.0, c = 0.0;
    for (double v : values) {
        const double y = v - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    const double mean = sum / double(trials);
    double sq = 0.0, csq = 0.0;
    for (double v : values) {
        const double d = (v - mean) * (v - mean) - csq;
        const double t = sq + d;
        csq = (t - sq) - d;
        sq = t;
    }
    McEstimate est;
    est.mean = mean;
    est.trials = trials;
    est.std_error =
        trials > 1 ? std::sqrt(sq / double(trials - 1) / double(trials)) : 0.0;
    return est;
}

}  // namespace skg
