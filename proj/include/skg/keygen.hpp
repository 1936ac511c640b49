#pragma once

#include <cstdint>
#include <vector>

#include "skg/channels.hpp"
#include "skg/common.hpp"
#include "skg/rng.hpp"
#include "skg/scene.hpp"

namespace skg {

struct ProtocolParams {
    int t_total = 1000;  // T, coherence block length in symbols
    int t_key = 40;      // T_k, symbols spent probing per block
    int t_switch = 2;    // T_s, symbols per RIS configuration
    int q_levels = 4;    // Q, phase quantization levels
    int n_blocks = 100;  // F, blocks contributing one estimate to each key

    int intervals() const { return t_key / t_switch; }  // L
    void validate() const;
};

/// sigma_bar^2 = 2*sigma^2 / (T_s * P): LS estimation noise per ping-pong
/// exchange (T_s/2 pilot symbols each way).
double estimation_noise_variance(int t_switch, double p, double sigma2);

/// g + z with z ~ CN(0, sigma_bar_sq).
cx ls_estimate(cx g, Rng& rng, double sigma_bar_sq);

/// Sector index in {1..Q}; phase wrapped into [0, 2*pi), sector q covers
/// [2*pi*(q-1)/Q, 2*pi*q/Q).
int quantize_phase(cx g, int q_levels);

enum class BitLabeling { gray, binary };

/// All estimates of one protocol run, flattened over (block f, interval l)
/// as index f*L + l.  Noiseless aggregates ride along for oracle use.
struct EstimateRecord {
    int n_blocks = 0;
    int intervals = 0;
    std::vector<cx> est_ba;  // Alice's estimate of g_ab
    std::vector<cx> est_ab;  // Bob's estimate of g_ab
    std::vector<cx> est_ae;  // Eve's estimate of her aggregate
    std::vector<cx> est_be;  // Eve's estimate of the Bob-Eve aggregate
    std::vector<cx> g_ab;    // noiseless aggregates
    std::vector<cx> g_ae;
    std::vector<cx> g_be;
};

/// One key per switching interval l; each key concatenates F labeled
/// quantizer outputs.
struct KeyMaterial {
    std::vector<std::vector<std::uint8_t>> bits_alice;
    std::vector<std::vector<std::uint8_t>> bits_bob;
    std::vector<std::vector<std::uint8_t>> bits_eve;
};

struct KeygenResult {
    EstimateRecord record;
    KeyMaterial keys;
};

KeygenResult run_keygen(Rng& rng, const Scenario& scenario, const ProtocolParams& params,
                        BitLabeling labeling = BitLabeling::gray);

/// Fraction of differing bits.
double empirical_kmr(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

/// Fraction of (f, l) positions where both estimate streams quantize to the
/// same sector.
double symbol_match_rate(const std::vector<cx>& est_a, const std::vector<cx>& est_b,
                         int q_levels);

/// Closed-form approximation of the probability that two noisy phase
/// estimates of the same Gaussian channel fall in the same sector.
double match_prob_approx(int q_levels, double snr);

/// Bits per key: F * log2(Q).
int key_length(int n_blocks, int q_levels);

}  // namespace skg
