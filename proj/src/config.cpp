#include "skg/config.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>

namespace skg {
namespace {

const std::vector<std::string> kSweepVariables = {"N",      "T_s",   "T_k", "Q",
                                                  "snr_db", "eve_x", "L"};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw ConfigError("line " + std::to_string(line) + ": " + message);
}

double parse_double(const std::string& value, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) {
            fail(line, "trailing characters after number '" + value + "'");
        }
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "expected a number, got '" + value + "'");
    }
}

long parse_long(const std::string& value, int line) {
    const double v = parse_double(value, line);
    if (v != std::floor(v)) {
        fail(line, "expected an integer, got '" + value + "'");
    }
    return long(v);
}

bool parse_bool(const std::string& value, int line) {
    if (value == "true" || value == "1") {
        return true;
    }
    if (value == "false" || value == "0") {
        return false;
    }
    fail(line, "expected true/false, got '" + value + "'");
}

Position parse_position(const std::string& value, int line) {
    std::istringstream in(value);
    Position p;
    if (!(in >> p.x >> p.y >> p.z)) {
        fail(line, "expected three coordinates, got '" + value + "'");
    }
    std::string rest;
    if (in >> rest) {
        fail(line, "too many coordinates in '" + value + "'");
    }
    return p;
}

std::vector<double> parse_doubles(const std::string& value, int line) {
    std::istringstream in(value);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        out.push_back(parse_double(tok, line));
    }
    if (out.empty()) {
        fail(line, "expected at least one value");
    }
    return out;
}

std::vector<std::string> parse_words(const std::string& value, int line) {
    std::istringstream in(value);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    if (out.empty()) {
        fail(line, "expected at least one value");
    }
    return out;
}

struct KeyTracker {
    std::map<std::string, int> lines;

    int line_of(const std::string& key) const {
        auto it = lines.find(key);
        return it == lines.end() ? 0 : it->second;
    }

    [[noreturn]] void fail_key(const std::string& key, const std::string& message) const {
        const int line = line_of(key);
        if (line > 0) {
            fail(line, message);
        }
        throw ConfigError(message);
    }
};

void validate(const RunConfig& cfg, const KeyTracker& keys) {
    const ScenarioConfig& sc = cfg.scenario;
    if (sc.ris_cols < 1 || sc.ris_rows < 1) {
        keys.fail_key("scenario.ris_cols", "RIS grid must have positive dimensions");
    }
    if (!(sc.ris_spacing_wavelengths > 0.0)) {
        keys.fail_key("scenario.ris_spacing_wavelengths", "RIS spacing must be positive");
    }
    if (!(sc.carrier_hz > 0.0)) {
        keys.fail_key("scenario.carrier_hz", "carrier frequency must be positive");
    }
    if (sc.rho < 0.0 || sc.rho > 1.0) {
        keys.fail_key("scenario.rho", "rho must lie in [0,1]");
    }
    if (sc.rho_mode != "declared" && sc.rho_mode != "derived") {
        keys.fail_key("scenario.rho_mode", "rho_mode must be 'declared' or 'derived'");
    }
    if (sc.ris_correlation != "sinc" && sc.ris_correlation != "identity") {
        keys.fail_key("scenario.ris_correlation",
                      "ris_correlation must be 'sinc' or 'identity'");
    }
    const ProtocolConfig& pc = cfg.protocol;
    if (pc.t_switch < 2 || pc.t_switch % 2 != 0) {
        keys.fail_key("protocol.t_switch", "t_switch must be even and at least 2");
    }
    if (pc.t_key < pc.t_switch || pc.t_key % pc.t_switch != 0) {
        keys.fail_key("protocol.t_key", "t_key must be a positive multiple of t_switch");
    }
    if (pc.t_key > pc.t_total) {
        keys.fail_key("protocol.t_key", "t_key cannot exceed t_total");
    }
    if (pc.q_levels < 2 || !std::has_single_bit(unsigned(pc.q_levels))) {
        keys.fail_key("protocol.q_levels", "q_levels must be a power of two, at least 2");
    }
    if (pc.n_blocks < 1) {
        keys.fail_key("protocol.n_blocks", "n_blocks must be at least 1");
    }
    if (std::find(kSweepVariables.begin(), kSweepVariables.end(), cfg.sweep.variable) ==
        kSweepVariables.end()) {
        keys.fail_key("sweep.variable", "unknown sweep variable '" + cfg.sweep.variable + "'");
    }
    if (cfg.sweep.values.empty()) {
        keys.fail_key("sweep.values", "sweep needs at least one value");
    }
    if (cfg.sweep.metrics.empty()) {
        keys.fail_key("sweep.metrics", "sweep needs at least one metric");
    }
    if (cfg.trials < 1) {
        keys.fail_key("run.trials", "trials must be at least 1");
    }
    if (cfg.workers < 0) {
        keys.fail_key("run.workers", "workers must be non-negative");
    }
}

}  // namespace

Position ScenarioConfig::eve_position() const {
    if (eve) {
        return *eve;
    }
    return {bob.x + wavelength() / 10.0, bob.y, bob.z};
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    KeyTracker keys;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                fail(line_no, "unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "scenario" && section != "protocol" && section != "sweep" &&
                section != "run") {
                fail(line_no, "unknown section '" + section + "'");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(line_no, "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            fail(line_no, "key '" + key + "' outside any section");
        }
        const std::string full = section + "." + key;
        keys.lines[full] = line_no;

        ScenarioConfig& sc = cfg.scenario;
        ProtocolConfig& pc = cfg.protocol;
        if (full == "scenario.alice") {
            sc.alice = parse_position(value, line_no);
        } else if (full == "scenario.bob") {
            sc.bob = parse_position(value, line_no);
        } else if (full == "scenario.eve") {
            sc.eve = parse_position(value, line_no);
        } else if (full == "scenario.ris_origin") {
            sc.ris_origin = parse_position(value, line_no);
        } else if (full == "scenario.ris_cols") {
            sc.ris_cols = int(parse_long(value, line_no));
        } else if (full == "scenario.ris_rows") {
            sc.ris_rows = int(parse_long(value, line_no));
        } else if (full == "scenario.ris_spacing_wavelengths") {
            sc.ris_spacing_wavelengths = parse_double(value, line_no);
        } else if (full == "scenario.carrier_hz") {
            sc.carrier_hz = parse_double(value, line_no);
        } else if (full == "scenario.tx_power_dbm") {
            sc.tx_power_dbm = parse_double(value, line_no);
        } else if (full == "scenario.noise_dbm") {
            sc.noise_dbm = parse_double(value, line_no);
        } else if (full == "scenario.fixed_loss_db") {
            sc.fixed_loss_db = parse_double(value, line_no);
        } else if (full == "scenario.exponent_direct") {
            sc.exponent_direct = parse_double(value, line_no);
        } else if (full == "scenario.exponent_ris") {
            sc.exponent_ris = parse_double(value, line_no);
        } else if (full == "scenario.antenna_gain_db") {
            sc.antenna_gain_db = parse_double(value, line_no);
        } else if (full == "scenario.penetration_loss_db") {
            sc.penetration_loss_db = parse_double(value, line_no);
        } else if (full == "scenario.rho_mode") {
            sc.rho_mode = value;
        } else if (full == "scenario.rho") {
            sc.rho = parse_double(value, line_no);
        } else if (full == "scenario.ris_enabled") {
            sc.ris_enabled = parse_bool(value, line_no);
        } else if (full == "scenario.ris_correlation") {
            sc.ris_correlation = value;
        } else if (full == "protocol.t_total") {
            pc.t_total = int(parse_long(value, line_no));
        } else if (full == "protocol.t_key") {
            pc.t_key = int(parse_long(value, line_no));
        } else if (full == "protocol.t_switch") {
            pc.t_switch = int(parse_long(value, line_no));
        } else if (full == "protocol.q_levels") {
            pc.q_levels = int(parse_long(value, line_no));
        } else if (full == "protocol.n_blocks") {
            pc.n_blocks = int(parse_long(value, line_no));
        } else if (full == "sweep.variable") {
            cfg.sweep.variable = value;
        } else if (full == "sweep.values") {
            cfg.sweep.values = parse_doubles(value, line_no);
        } else if (full == "sweep.metrics") {
            cfg.sweep.metrics = parse_words(value, line_no);
        } else if (full == "run.trials") {
            cfg.trials = parse_long(value, line_no);
        } else if (full == "run.master_seed") {
            cfg.master_seed = std::uint64_t(parse_long(value, line_no));
        } else if (full == "run.output_path") {
            cfg.output_path = value;
        } else if (full == "run.workers") {
            cfg.workers = int(parse_long(value, line_no));
        } else {
            fail(line_no, "unknown key '" + full + "'");
        }
    }
    validate(cfg, keys);
    return cfg;
}

namespace {

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

std::string fmt(const Position& p) { return fmt(p.x) + " " + fmt(p.y) + " " + fmt(p.z); }

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
    const ScenarioConfig& sc = cfg.scenario;
    std::ostringstream out;
    out << "[scenario]\n";
    out << "alice = " << fmt(sc.alice) << "\n";
    out << "bob = " << fmt(sc.bob) << "\n";
    if (sc.eve) {
        out << "eve = " << fmt(*sc.eve) << "\n";
    }
    out << "ris_origin = " << fmt(sc.ris_origin) << "\n";
    out << "ris_cols = " << sc.ris_cols << "\n";
    out << "ris_rows = " << sc.ris_rows << "\n";
    out << "ris_spacing_wavelengths = " << fmt(sc.ris_spacing_wavelengths) << "\n";
    out << "carrier_hz = " << fmt(sc.carrier_hz) << "\n";
    out << "tx_power_dbm = " << fmt(sc.tx_power_dbm) << "\n";
    out << "noise_dbm = " << fmt(sc.noise_dbm) << "\n";
    out << "fixed_loss_db = " << fmt(sc.fixed_loss_db) << "\n";
    out << "exponent_direct = " << fmt(sc.exponent_direct) << "\n";
    out << "exponent_ris = " << fmt(sc.exponent_ris) << "\n";
    out << "antenna_gain_db = " << fmt(sc.antenna_gain_db) << "\n";
    out << "penetration_loss_db = " << fmt(sc.penetration_loss_db) << "\n";
    out << "rho_mode = " << sc.rho_mode << "\n";
    out << "rho = " << fmt(sc.rho) << "\n";
    out << "ris_enabled = " << (sc.ris_enabled ? "true" : "false") << "\n";
    out << "ris_correlation = " << sc.ris_correlation << "\n";
    out << "\n[protocol]\n";
    out << "t_total = " << cfg.protocol.t_total << "\n";
    out << "t_key = " << cfg.protocol.t_key << "\n";
    out << "t_switch = " << cfg.protocol.t_switch << "\n";
    out << "q_levels = " << cfg.protocol.q_levels << "\n";
    out << "n_blocks = " << cfg.protocol.n_blocks << "\n";
    out << "\n[sweep]\n";
    out << "variable = " << cfg.sweep.variable << "\n";
    out << "values =";
    for (double v : cfg.sweep.values) {
        out << " " << fmt(v);
    }
    out << "\n";
    out << "metrics =";
    for (const std::string& m : cfg.sweep.metrics) {
        out << " " << m;
    }
    out << "\n";
    out << "\n[run]\n";
    out << "trials = " << cfg.trials << "\n";
    out << "master_seed = " << cfg.master_seed << "\n";
    out << "output_path = " << cfg.output_path << "\n";
    out << "workers = " << cfg.workers << "\n";
    return out.str();
}

Scenario build_scenario(const ScenarioConfig& sc, int n_override) {
    int cols = sc.ris_cols;
    int rows = sc.ris_rows;
    if (n_override > 0) {
        if (n_override % rows != 0) {
            throw ConfigError("RIS element count " + std::to_string(n_override) +
                              " is not divisible by the configured row count " +
                              std::to_string(rows));
        }
        cols = n_override / rows;
    }
    const double lambda = sc.wavelength();
    const RisLayout layout =
        RisLayout::planar(cols, rows, sc.ris_spacing_wavelengths * lambda, sc.ris_origin);

    PathLossSpec pl;
    pl.fixed_loss_db = sc.fixed_loss_db;
    pl.exponent_ris = sc.exponent_ris;
    pl.exponent_direct = sc.exponent_direct;
    pl.antenna_gain_db = sc.antenna_gain_db;
    pl.penetration_loss_db = sc.penetration_loss_db;

    const Position eve = sc.eve_position();
    Scenario scenario;
    scenario.budget = link_budget_from_geometry(sc.alice, sc.bob, eve, layout, pl,
                                                sc.carrier_hz, sc.tx_power_dbm, sc.noise_dbm);

    const double rho = sc.rho_mode == "derived"
                           ? pearson_correlation(distance(sc.bob, eve), lambda)
                           : sc.rho;
    if (!sc.ris_enabled) {
        scenario.budget.beta_ar = 0.0;
        scenario.budget.beta_rb = 0.0;
        scenario.budget.beta_re = 0.0;
        scenario.corr.matrix.resize(0, 0);
        scenario.corr.frob_sq = 0.0;
        scenario.corr.rho = rho;
    } else if (sc.ris_correlation == "identity") {
        scenario.corr.matrix = Eigen::MatrixXd::Identity(layout.size(), layout.size());
        scenario.corr.frob_sq = double(layout.size());
        scenario.corr.rho = rho;
    } else {
        scenario.corr = build_ris_correlation(layout, lambda, rho);
    }
    return scenario;
}

ProtocolParams to_params(const ProtocolConfig& pc) {
    ProtocolParams p;
    p.t_total = pc.t_total;
    p.t_key = pc.t_key;
    p.t_switch = pc.t_switch;
    p.q_levels = pc.q_levels;
    p.n_blocks = pc.n_blocks;
    p.validate();
    return p;
}

}  // namespace skg
