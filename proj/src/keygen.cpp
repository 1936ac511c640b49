#include "skg/keygen.hpp"

#include <bit>
#include <cmath>

#include "skg/mathx.hpp"

namespace skg {
namespace {

int log2_exact(int q) { return std::countr_zero(unsigned(q)); }

void append_label(std::vector<std::uint8_t>& bits, int level, int q_levels,
                  BitLabeling labeling) {
    unsigned v = unsigned(level - 1);
    if (labeling == BitLabeling::gray) {
        v = v ^ (v >> 1);
    }
    for (int b = log2_exact(q_levels) - 1; b >= 0; --b) {
        bits.push_back(std::uint8_t((v >> b) & 1u));
    }
}

}  // namespace

void ProtocolParams::validate() const {
    if (t_switch < 2 || t_switch % 2 != 0) {
        throw ConfigError("t_switch must be even and at least 2");
    }
    if (t_key < t_switch || t_key % t_switch != 0) {
        throw ConfigError("t_key must be a positive multiple of t_switch");
    }
    if (t_key > t_total) {
        throw ConfigError("t_key cannot exceed t_total");
    }
    if (q_levels < 2 || !std::has_single_bit(unsigned(q_levels))) {
        throw ConfigError("q_levels must be a power of two, at least 2");
    }
    if (n_blocks < 1) {
        throw ConfigError("n_blocks must be at least 1");
    }
}

double estimation_noise_variance(int t_switch, double p, double sigma2) {
    if (t_switch < 2) {
        throw DomainError("estimation_noise_variance: t_switch must be at least 2");
    }
    if (!(p > 0.0)) {
        throw DomainError("estimation_noise_variance: power must be positive");
    }
    return 2.0 * sigma2 / (double(t_switch) * p);
}

cx ls_estimate(cx g, Rng& rng, double sigma_bar_sq) {
    if (sigma_bar_sq < 0.0) {
        throw DomainError("ls_estimate: negative noise variance");
    }
    return g + rng.cnormal(sigma_bar_sq);
}

int quantize_phase(cx g, int q_levels) {
    if (g == cx{}) {
        throw DomainError("quantize_phase: zero input has no phase");
    }
    if (q_levels < 2) {
        throw DomainError("quantize_phase: need at least two levels");
    }
    double phase = std::arg(g);  // (-pi, pi]
    if (phase < 0.0) {
        phase += kTwoPi;
    }
    int level = int(phase / kTwoPi * q_levels);
    if (level >= q_levels) {
        level = q_levels - 1;  // phase == 2*pi after rounding
    }
    return level + 1;
}

KeygenResult run_keygen(Rng& rng, const Scenario& scenario, const ProtocolParams& params,
                        BitLabeling labeling) {
    params.validate();
    const int f_blocks = params.n_blocks;
    const int l_intervals = params.intervals();
    const double sigma_bar =
        estimation_noise_variance(params.t_switch, scenario.budget.tx_power,
                                  scenario.budget.noise_power);
    ChannelSampler sampler(scenario.budget, scenario.corr);
    const int n = int(scenario.corr.matrix.rows());

    KeygenResult out;
    EstimateRecord& rec = out.record;
    rec.n_blocks = f_blocks;
    rec.intervals = l_intervals;
    const std::size_t total = std::size_t(f_blocks) * std::size_t(l_intervals);
    for (auto* v : {&rec.est_ba, &rec.est_ab, &rec.est_ae, &rec.est_be, &rec.g_ab, &rec.g_ae,
                    &rec.g_be}) {
        v->reserve(total);
    }

    for (int f = 0; f < f_blocks; ++f) {
        const ChannelBlock blk = sampler.draw(rng);
        for (int l = 0; l < l_intervals; ++l) {
            const PhaseMatrix phases = random_phase_matrix(rng, n);
            const cx g_ab = aggregate(blk.h_ab, blk.h_ar, phases, blk.h_rb);
            const cx g_ae = aggregate(blk.h_ae, blk.h_ar, phases, blk.h_re);
            const cx g_be = aggregate(blk.h_be, blk.h_rb, phases, blk.h_re);
            rec.g_ab.push_back(g_ab);
            rec.g_ae.push_back(g_ae);
            rec.g_be.push_back(g_be);
            rec.est_ba.push_back(ls_estimate(g_ab, rng, sigma_bar));
            rec.est_ab.push_back(ls_estimate(g_ab, rng, sigma_bar));
            rec.est_ae.push_back(ls_estimate(g_ae, rng, sigma_bar));
            rec.est_be.push_back(ls_estimate(g_be, rng, sigma_bar));
        }
    }

    KeyMaterial& keys = out.keys;
    keys.bits_alice.resize(l_intervals);
    keys.bits_bob.resize(l_intervals);
    keys.bits_eve.resize(l_intervals);
    const std::size_t key_bits = std::size_t(key_length(f_blocks, params.q_levels));
    for (int l = 0; l < l_intervals; ++l) {
        keys.bits_alice[l].reserve(key_bits);
        keys.bits_bob[l].reserve(key_bits);
        keys.bits_eve[l].reserve(key_bits);
        for (int f = 0; f < f_blocks; ++f) {
            const std::size_t idx = std::size_t(f) * l_intervals + l;
            append_label(keys.bits_alice[l], quantize_phase(rec.est_ba[idx], params.q_levels),
                         params.q_levels, labeling);
            append_label(keys.bits_bob[l], quantize_phase(rec.est_ab[idx], params.q_levels),
                         params.q_levels, labeling);
            append_label(keys.bits_eve[l], quantize_phase(rec.est_ae[idx], params.q_levels),
                         params.q_levels, labeling);
        }
    }
    return out;
}

double empirical_kmr(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw DomainError("empirical_kmr: bit strings must have equal nonzero length");
    }
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += (a[i] != b[i]) ? 1 : 0;
    }
    return double(diff) / double(a.size());
}

double symbol_match_rate(const std::vector<cx>& est_a, const std::vector<cx>& est_b,
                         int q_levels) {
    if (est_a.size() != est_b.size() || est_a.empty()) {
        throw DomainError("symbol_match_rate: estimate streams must have equal nonzero length");
    }
    std::size_t match = 0;
    for (std::size_t i = 0; i < est_a.size(); ++i) {
        match += (quantize_phase(est_a[i], q_levels) == quantize_phase(est_b[i], q_levels)) ? 1
                                                                                           : 0;
    }
    return double(match) / double(est_a.size());
}

double match_prob_approx(int q_levels, double snr) {
    if (q_levels < 2) {
        throw DomainError("match_prob_approx: need at least two levels");
    }
    if (!(snr > 0.0)) {
        throw DomainError("match_prob_approx: snr must be positive");
    }
    const double sigma_t = 1.0 / snr;
    const double half_pi_q = kTwoPi / 2.0 / q_levels;  // pi/Q
    const double tq = std::tan(half_pi_q);
    const double first = tq * tq / (2.0 * (tq * tq + sigma_t));
    const double integral = adaptive_simpson(
        [sigma_t](double th) {
            const double t = std::tan(th);
            return t * t / (t * t + sigma_t);
        },
        0.0, half_pi_q, 1e-9);
    return first + double(q_levels) / kTwoPi * integral;
}

int key_length(int n_blocks, int q_levels) {
    if (n_blocks < 1 || q_levels < 2) {
        throw DomainError("key_length: invalid parameters");
    }
    return n_blocks * log2_exact(q_levels);
}

}  // namespace skg
