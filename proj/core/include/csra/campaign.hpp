#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "csra/config.hpp"
#include "csra/stats.hpp"

namespace csra {

// One sweep point: the axes the reference experiments vary.
struct PointSpec {
    int k = 25;
    int r = 4;
    Scheme scheme = Scheme::csra;
    bool sic = true;
};

struct TrialResult {
    std::uint64_t trial = 0;
    int k = 0;
    int recovered = 0;
    int false_decodes = 0;
    int sic_rounds = 0;
};

struct PointResult {
    PointSpec point{};
    std::uint64_t trials = 0;
    PlrEstimate plr{};
    double mean_sic_rounds = 0.0;
    double false_decode_rate = 0.0;  // false decodes per transmitted message
};

// Per-trial stream seed. When pairing is on, the tag depends on (k, r) only,
// so scheme and SIC variants of a point see identical slot realizations.
std::uint64_t point_tag(const PointSpec& p, std::size_t point_index, bool paired);
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t trial);

SimConfig apply_point(const SimConfig& base, const PointSpec& p);

// Draws one slot realization: user placement, replica selection, messages,
// channel synthesis. Depends on (seed, geometry/load config) only, never on
// scheme or SIC, so paired variants can share it.
ReceivedSlot synthesize_trial(std::uint64_t seed, const SimConfig& cfg);

// Runs the configured receiver over a synthesized slot (mutates it when SIC
// is enabled).
DecodeOutcome decode_trial(ReceivedSlot& slot, const SimConfig& cfg);

// synthesize + decode + score; fully deterministic in (seed, cfg).
TrialResult run_slot(std::uint64_t seed, const SimConfig& cfg);

// Aggregates trial results into a Wilson-interval PLR estimate.
// lost = sum(k - recovered), total = sum(k). Throws on empty input.
PlrEstimate plr(const std::vector<TrialResult>& trials);

// Runs cfg.trials slots per point over a worker pool. Points sharing (k, r)
// reuse one synthesized slot per trial when cfg.paired. Results are reduced
// by integer sums, so the output is identical for any worker count.
// on_point, when set, is invoked once per finished point, grouped by shared
// realization; the returned vector is always in input order.
std::vector<PointResult> run_campaign(const SimConfig& base, const std::vector<PointSpec>& points,
                                      const std::function<void(const PointResult&)>& on_point = {});

// Serialization. CSV column set is fixed; seed is the campaign master seed.
std::string to_csv(const std::vector<PointResult>& results, std::uint64_t seed);
std::string to_json(const std::vector<PointResult>& results, std::uint64_t seed);

}  // namespace csra
