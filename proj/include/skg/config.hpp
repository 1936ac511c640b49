#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skg/keygen.hpp"
#include "skg/scene.hpp"

namespace skg {

struct ScenarioConfig {
    Position alice{0.0, 0.0, 1.5};
    Position bob{30.0, 0.0, 1.5};
    std::optional<Position> eve;  // default: Bob + lambda/10 along x
    Position ris_origin{0.0, 3.0, 1.5};
    int ris_cols = 20;
    int ris_rows = 5;
    double ris_spacing_wavelengths = 0.25;
    double carrier_hz = 3e9;
    double tx_power_dbm = 25.0;
    double noise_dbm = -96.0;
    double fixed_loss_db = 30.0;
    double exponent_direct = 3.67;
    double exponent_ris = 2.2;
    double antenna_gain_db = 0.0;
    double penetration_loss_db = 0.0;
    std::string rho_mode = "declared";      // declared | derived
    double rho = 0.9;
    bool ris_enabled = true;
    std::string ris_correlation = "sinc";   // sinc | identity

    double wavelength() const { return kSpeedOfLight / carrier_hz; }
    Position eve_position() const;
};

struct ProtocolConfig {
    int t_total = 1000;
    int t_key = 40;
    int t_switch = 2;
    int q_levels = 4;
    int n_blocks = 100;
};

struct SweepConfig {
    std::string variable = "N";
    std::vector<double> values = {10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    std::vector<std::string> metrics = {"skr_lb"};
};

struct RunConfig {
    ScenarioConfig scenario;
    ProtocolConfig protocol;
    SweepConfig sweep;
    long trials = 1000;
    std::uint64_t master_seed = 1;
    std::string output_path = "results.csv";
    int workers = 1;
};

/// Parse INI-style text ('[section]' headers, 'key = value' lines, '#'
/// comments).  Unknown keys and invariant violations raise ConfigError with
/// the offending line number.
RunConfig parse_config(const std::string& text);

std::string serialize_config(const RunConfig& config);

/// Build the physical scenario.  n_override (> 0) replaces the element count,
/// keeping the row count fixed; it must be divisible by the configured rows.
Scenario build_scenario(const ScenarioConfig& sc, int n_override = -1);

ProtocolParams to_params(const ProtocolConfig& pc);

}  // namespace skg
