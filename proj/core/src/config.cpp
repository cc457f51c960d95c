#include "csra/config.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace csra {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
    throw std::invalid_argument("config: " + key + ": " + what);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) bad(key, "trailing characters in '" + v + "'");
        return x;
    } catch (const std::invalid_argument&) {
        bad(key, "not a number: '" + v + "'");
    } catch (const std::out_of_range&) {
        bad(key, "out of range: '" + v + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const std::int64_t x = std::stoll(v, &pos);
        if (pos != v.size()) bad(key, "trailing characters in '" + v + "'");
        return x;
    } catch (const std::invalid_argument&) {
        bad(key, "not an integer: '" + v + "'");
    } catch (const std::out_of_range&) {
        bad(key, "out of range: '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const std::uint64_t x = std::stoull(v, &pos);
        if (pos != v.size()) bad(key, "trailing characters in '" + v + "'");
        return x;
    } catch (const std::invalid_argument&) {
        bad(key, "not an unsigned integer: '" + v + "'");
    } catch (const std::out_of_range&) {
        bad(key, "out of range: '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    bad(key, "not a boolean: '" + v + "'");
}

}  // namespace

std::string to_string(Scheme s) { return s == Scheme::csra ? "csra" : "csra-se"; }
std::string to_string(PowerPolicy p) { return p == PowerPolicy::split ? "split" : "full"; }
std::string to_string(FootprintMode f) {
    return f == FootprintMode::geometric ? "geometric" : "data-driven";
}
std::string to_string(ThresholdMode m) {
    return m == ThresholdMode::noise_floor ? "noise-floor" : "sigma-amplitude";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "csra") return Scheme::csra;
    if (s == "csra-se") return Scheme::csra_se;
    throw std::invalid_argument("config: scheme must be 'csra' or 'csra-se', got '" + s + "'");
}

PowerPolicy power_policy_from_string(const std::string& s) {
    if (s == "split") return PowerPolicy::split;
    if (s == "full") return PowerPolicy::full;
    throw std::invalid_argument("config: power_policy must be 'split' or 'full', got '" + s + "'");
}

FootprintMode footprint_from_string(const std::string& s) {
    if (s == "geometric") return FootprintMode::geometric;
    if (s == "data-driven") return FootprintMode::data_driven;
    throw std::invalid_argument("config: footprint must be 'geometric' or 'data-driven', got '" +
                                s + "'");
}

ThresholdMode threshold_mode_from_string(const std::string& s) {
    if (s == "noise-floor") return ThresholdMode::noise_floor;
    if (s == "sigma-amplitude") return ThresholdMode::sigma_amplitude;
    throw std::invalid_argument(
        "config: threshold_mode must be 'noise-floor' or 'sigma-amplitude', got '" + s + "'");
}

int SimConfig::n_r() const {
    return static_cast<int>(std::llround(elaa_length_m / element_spacing_m()));
}

double SimConfig::sigma2() const {
    return noise_variance(bandwidth_hz, noise_temperature_k, noise_figure_db);
}

double SimConfig::eta() const {
    if (threshold_mode == ThresholdMode::sigma_amplitude) {
        return threshold_scale * std::sqrt(sigma2()) / static_cast<double>(n_p);
    }
    return threshold_scale * estimator_noise_floor(sigma2(), tx_power_w, n_p);
}

NoiseModel SimConfig::noise_model() const {
    return {bandwidth_hz, noise_temperature_k, noise_figure_db, implementation_loss_db};
}

UlaSpec SimConfig::elaa_spec() const {
    return {{0.0, 0.0, elaa_height_m}, {0.0, 1.0, 0.0}, n_r(), element_spacing_m()};
}

ScenarioGeometry SimConfig::scenario() const {
    return {elaa_spec(), user_segment_half_m, n_t, element_spacing_m()};
}

ReceiverParams SimConfig::receiver_params() const {
    ReceiverParams p;
    p.eta = eta();
    p.sic = sic;
    p.max_sic_rounds = max_sic_rounds;
    p.se_mode = scheme == Scheme::csra_se;
    p.footprint = footprint;
    p.exhaustive_rescan = exhaustive_rescan;
    return p;
}

void SimConfig::validate() const {
    if (!(carrier_hz > 0)) bad("carrier_hz", "must be positive");
    if (!(elaa_length_m > 0)) bad("elaa_length_m", "must be positive");
    if (!(elaa_height_m > 0)) bad("elaa_height_m", "must be positive");
    if (n_t < 2) bad("n_t", "need at least 2 transmit elements");
    if (!(user_segment_half_m >= 0)) bad("user_segment_half_m", "must be non-negative");
    if (!(tx_power_w > 0)) bad("tx_power_w", "must be positive");
    if (!(bandwidth_hz > 0)) bad("bandwidth_hz", "must be positive");
    if (!(noise_temperature_k > 0)) bad("noise_temperature_k", "must be positive");
    if (n_p < 1 || !std::has_single_bit(static_cast<unsigned>(n_p))) {
        bad("n_p", "must be a power of two");
    }
    if (message_bits != MessageBits::kBits) {
        bad("message_bits", "codec is fixed at " + std::to_string(MessageBits::kBits) + " bits");
    }
    if (n_d != Codeword::kBits / 2) {
        bad("n_d", "frame is fixed at " + std::to_string(Codeword::kBits / 2) + " symbols");
    }
    if (pilot_count < 1 || pilot_count > n_p) bad("pilot_count", "must be in [1, n_p]");
    if (k < 1) bad("k", "need at least one active user");
    if (r < 1) bad("r", "need at least one replica");
    if (!(threshold_scale > 0)) bad("threshold_scale", "must be positive");
    if (max_sic_rounds < 1) bad("max_sic_rounds", "must be at least 1");
    if (trials < 1) bad("trials", "must be at least 1");
    if (workers < 0) bad("workers", "must be non-negative");
    if (!(edge_limit > 0)) bad("edge_limit", "must be positive");
    if (!(noise_scale >= 0)) bad("noise_scale", "must be non-negative");
    if (n_r() < 2) bad("elaa_length_m", "ELAA must have at least 2 elements at lambda/2 pitch");
}

void apply_config_entry(SimConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "carrier_hz") cfg.carrier_hz = parse_double(key, value);
    else if (key == "elaa_length_m") cfg.elaa_length_m = parse_double(key, value);
    else if (key == "elaa_height_m") cfg.elaa_height_m = parse_double(key, value);
    else if (key == "n_t") cfg.n_t = static_cast<int>(parse_int(key, value));
    else if (key == "user_segment_half_m") cfg.user_segment_half_m = parse_double(key, value);
    else if (key == "tx_power_w") cfg.tx_power_w = parse_double(key, value);
    else if (key == "bandwidth_hz") cfg.bandwidth_hz = parse_double(key, value);
    else if (key == "noise_temperature_k") cfg.noise_temperature_k = parse_double(key, value);
    else if (key == "noise_figure_db") cfg.noise_figure_db = parse_double(key, value);
    else if (key == "implementation_loss_db") cfg.implementation_loss_db = parse_double(key, value);
    else if (key == "n_p") cfg.n_p = static_cast<int>(parse_int(key, value));
    else if (key == "n_d") cfg.n_d = static_cast<int>(parse_int(key, value));
    else if (key == "message_bits") cfg.message_bits = static_cast<int>(parse_int(key, value));
    else if (key == "pilot_count") cfg.pilot_count = static_cast<int>(parse_int(key, value));
    else if (key == "k") cfg.k = static_cast<int>(parse_int(key, value));
    else if (key == "r") cfg.r = static_cast<int>(parse_int(key, value));
    else if (key == "sic") cfg.sic = parse_bool(key, value);
    else if (key == "scheme") cfg.scheme = scheme_from_string(value);
    else if (key == "threshold_mode") cfg.threshold_mode = threshold_mode_from_string(value);
    else if (key == "threshold_scale") cfg.threshold_scale = parse_double(key, value);
    else if (key == "power_policy") cfg.power_policy = power_policy_from_string(value);
    else if (key == "footprint") cfg.footprint = footprint_from_string(value);
    else if (key == "max_sic_rounds") cfg.max_sic_rounds = static_cast<int>(parse_int(key, value));
    else if (key == "exhaustive_rescan") cfg.exhaustive_rescan = parse_bool(key, value);
    else if (key == "trials") cfg.trials = parse_u64(key, value);
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "workers") cfg.workers = static_cast<int>(parse_int(key, value));
    else if (key == "paired") cfg.paired = parse_bool(key, value);
    else if (key == "edge_limit") cfg.edge_limit = parse_double(key, value);
    else if (key == "noise_scale") cfg.noise_scale = parse_double(key, value);
    else if (key == "single_pilot_per_user") cfg.single_pilot_per_user = parse_bool(key, value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

namespace {

SimConfig parse_json_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: JSON root must be an object");
    SimConfig cfg;
    for (const auto& [key, value] : j.items()) {
        std::string v;
        if (value.is_string()) {
            v = value.get<std::string>();
        } else if (value.is_boolean()) {
            v = value.get<bool>() ? "true" : "false";
        } else if (value.is_number_unsigned()) {
            v = std::to_string(value.get<std::uint64_t>());
        } else if (value.is_number_integer()) {
            v = std::to_string(value.get<std::int64_t>());
        } else if (value.is_number_float()) {
            std::ostringstream os;
            os.precision(17);
            os << value.get<double>();
            v = os.str();
        } else {
            throw std::invalid_argument("config: unsupported JSON value for key '" + key + "'");
        }
        apply_config_entry(cfg, key, v);
    }
    return cfg;
}

}  // namespace

SimConfig parse_config_text(const std::string& text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_json_config(text);

    SimConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace csra
