#pragma once

#include <cstdint>
#include <string>

#include "csra/channel.hpp"
#include "csra/geometry.hpp"
#include "csra/receiver.hpp"

namespace csra {

enum class ThresholdMode { noise_floor, sigma_amplitude };

// Full simulation parameter set. Defaults reproduce the reference factory
// scenario: 60 GHz carrier, 20 m ELAA at 8 m height, 20-element users on a
// +-3 m segment, 0.1 mW transmit power, 100 kHz bandwidth.
struct SimConfig {
    // Deployment and physics.
    double carrier_hz = 60e9;
    double elaa_length_m = 20.0;
    double elaa_height_m = 8.0;
    int n_t = 20;
    double user_segment_half_m = 3.0;
    double tx_power_w = 1e-4;
    double bandwidth_hz = 1e5;
    double noise_temperature_k = 290.0;
    double noise_figure_db = 10.0;
    double implementation_loss_db = 10.0;

    // Frame layout.
    int n_p = 8;
    int n_d = 256;
    int message_bits = 421;
    int pilot_count = 8;

    // Access scheme and receiver.
    int k = 25;
    int r = 4;
    bool sic = true;
    Scheme scheme = Scheme::csra;
    ThresholdMode threshold_mode = ThresholdMode::noise_floor;
    double threshold_scale = 2.0;
    PowerPolicy power_policy = PowerPolicy::split;
    FootprintMode footprint = FootprintMode::geometric;
    int max_sic_rounds = 256;
    bool exhaustive_rescan = false;

    // Campaign.
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    int workers = 0;     // 0 = hardware concurrency
    bool paired = true;  // shared slot realizations across scheme/SIC variants

    // Sensitivity switches.
    double edge_limit = 1.0;   // beam usability margin, fraction of half-aperture
    double noise_scale = 1.0;  // multiplies the noise variance; 0 = noiseless
    bool single_pilot_per_user = false;

    // Derived quantities. Wavelength uses the nominal 3e8 m/s propagation
    // speed so the 60 GHz default gives exactly 5 mm (and an 8000-element
    // ELAA at half-wavelength pitch).
    double lambda_m() const { return 3.0e8 / carrier_hz; }
    double element_spacing_m() const { return lambda_m() / 2.0; }
    int n_r() const;
    double sigma2() const;  // physical noise variance, before noise_scale
    double eta() const;     // detection threshold per threshold_mode and scale
    NoiseModel noise_model() const;
    UlaSpec elaa_spec() const;
    ScenarioGeometry scenario() const;
    ReceiverParams receiver_params() const;

    // Throws std::invalid_argument with a field-specific message.
    void validate() const;
};

// Parses flat `key = value` lines (# comments allowed) or, when the first
// non-space character is '{', a JSON object with the same field names.
// Unknown keys are errors.
SimConfig parse_config_text(const std::string& text);
SimConfig load_config_file(const std::string& path);

// Sets one field by config-file key; shared by the parser and CLI overrides.
void apply_config_entry(SimConfig& cfg, const std::string& key, const std::string& value);

std::string to_string(Scheme s);
std::string to_string(PowerPolicy p);
std::string to_string(FootprintMode f);
std::string to_string(ThresholdMode m);
Scheme scheme_from_string(const std::string& s);
PowerPolicy power_policy_from_string(const std::string& s);
FootprintMode footprint_from_string(const std::string& s);
ThresholdMode threshold_mode_from_string(const std::string& s);

}  // namespace csra
