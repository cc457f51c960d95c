// csra-sim: Monte Carlo campaign runner for the CSRA link-level simulator.
//
// Subcommands pick the sweep; a config file plus per-flag overrides pick
// everything else. Results go to stdout or --out as CSV (fixed column set)
// or JSON (same fields plus diagnostics). Progress lines go to stderr.

#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "csra/campaign.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    // Overrides ride through the config-file parser so both paths accept
    // exactly the same value syntax and produce the same error messages.
    std::optional<std::string> trials, seed, workers;
    std::optional<std::string> k, r, sic, scheme;
    std::optional<std::string> threshold_scale, power_policy, footprint;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "Config file (key=value lines or JSON)");
    cmd->add_option("--out", o.out_path, "Output path (default: stdout)");
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--trials", o.trials, "Slots per sweep point");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--workers", o.workers, "Worker threads (0 = hardware concurrency)");
    cmd->add_option("--k", o.k, "Active users");
    cmd->add_option("--r", o.r, "Replicas per user");
    cmd->add_option("--sic", o.sic, "Enable SIC (true/false)");
    cmd->add_option("--scheme", o.scheme, "Receiver scheme (csra|csra-se)");
    cmd->add_option("--threshold-scale", o.threshold_scale, "Detection threshold scale");
    cmd->add_option("--power-policy", o.power_policy, "Replica power policy (split|full)");
    cmd->add_option("--footprint", o.footprint, "Cancellation footprint (geometric|data-driven)");
}

csra::SimConfig build_config(const CommonOpts& o) {
    csra::SimConfig cfg;
    if (!o.config_path.empty()) cfg = csra::load_config_file(o.config_path);
    const std::pair<const char*, const std::optional<std::string>&> entries[] = {
        {"trials", o.trials},
        {"seed", o.seed},
        {"workers", o.workers},
        {"k", o.k},
        {"r", o.r},
        {"sic", o.sic},
        {"scheme", o.scheme},
        {"threshold_scale", o.threshold_scale},
        {"power_policy", o.power_policy},
        {"footprint", o.footprint},
    };
    for (const auto& [key, value] : entries) {
        if (value) csra::apply_config_entry(cfg, key, *value);
    }
    cfg.validate();
    return cfg;
}

int emit(const CommonOpts& o, const csra::SimConfig& cfg,
         const std::vector<csra::PointSpec>& points) {
    const std::vector<csra::PointResult> results =
        csra::run_campaign(cfg, points, [](const csra::PointResult& p) {
            std::fprintf(stderr,
                         "point scheme=%s sic=%d k=%d r=%d plr=%.4g ci=[%.4g,%.4g] rounds=%.2f\n",
                         csra::to_string(p.point.scheme).c_str(), p.point.sic ? 1 : 0, p.point.k,
                         p.point.r, p.plr.plr, p.plr.ci_low, p.plr.ci_high, p.mean_sic_rounds);
        });
    const std::string text =
        o.format == "json" ? csra::to_json(results, cfg.seed) : csra::to_csv(results, cfg.seed);
    if (o.out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return 0;
    }
    std::ofstream out(o.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + o.out_path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + o.out_path);
    return 0;
}

std::vector<csra::PointSpec> figure2_points() {
    std::vector<csra::PointSpec> pts;
    for (int k : {20, 25, 30, 35, 40, 45, 50})
        for (int r : {2, 3, 4, 5})
            for (bool sic : {true, false}) pts.push_back({k, r, csra::Scheme::csra, sic});
    return pts;
}

std::vector<csra::PointSpec> figure3_points() {
    std::vector<csra::PointSpec> pts;
    for (int k : {25, 45})
        for (int r : {2, 3, 4, 5, 6, 7})
            for (bool sic : {true, false}) pts.push_back({k, r, csra::Scheme::csra, sic});
    return pts;
}

std::vector<csra::PointSpec> figure4_points() {
    std::vector<csra::PointSpec> pts;
    for (int k : {5, 10, 15, 20, 25, 30, 35, 40, 45})
        for (int r : {4, 5})
            for (csra::Scheme s : {csra::Scheme::csra, csra::Scheme::csra_se})
                for (bool sic : {true, false}) pts.push_back({k, r, s, sic});
    return pts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CSRA link-level Monte Carlo simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::vector<int> k_values;
    std::vector<int> r_values;

    CLI::App* single = app.add_subcommand("single", "Run one sweep point");
    add_common(single, opts);

    CLI::App* sweep_k = app.add_subcommand("sweep-k", "Sweep the number of active users");
    add_common(sweep_k, opts);
    sweep_k->add_option("--k-values", k_values, "K values to sweep")
        ->required()
        ->delimiter(',');

    CLI::App* sweep_r = app.add_subcommand("sweep-r", "Sweep the number of replicas");
    add_common(sweep_r, opts);
    sweep_r->add_option("--r-values", r_values, "R values to sweep")
        ->required()
        ->delimiter(',');

    CLI::App* fig2 = app.add_subcommand(
        "figure2", "Preset: PLR vs load, K in {20..50}, R in {2..5}, SIC on/off");
    add_common(fig2, opts);
    CLI::App* fig3 = app.add_subcommand(
        "figure3", "Preset: PLR vs replicas, K in {25,45}, R in {2..7}, SIC on/off");
    add_common(fig3, opts);
    CLI::App* fig4 = app.add_subcommand(
        "figure4", "Preset: clustered vs single-element, K in {5..45}, R in {4,5}");
    add_common(fig4, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const csra::SimConfig cfg = build_config(opts);
        std::vector<csra::PointSpec> points;
        if (single->parsed()) {
            points.push_back({cfg.k, cfg.r, cfg.scheme, cfg.sic});
        } else if (sweep_k->parsed()) {
            for (int k : k_values) points.push_back({k, cfg.r, cfg.scheme, cfg.sic});
        } else if (sweep_r->parsed()) {
            for (int r : r_values) points.push_back({cfg.k, r, cfg.scheme, cfg.sic});
        } else {
            // Presets fix the swept axes themselves; a per-point override
            // would be silently discarded, so reject it.
            for (const auto& [name, value] :
                 {std::pair<const char*, const std::optional<std::string>&>{"--k", opts.k},
                  {"--r", opts.r},
                  {"--sic", opts.sic},
                  {"--scheme", opts.scheme}}) {
                if (value) {
                    throw std::invalid_argument(std::string(name) +
                                                " cannot override a figure preset's points");
                }
            }
            if (fig2->parsed()) {
                points = figure2_points();
            } else if (fig3->parsed()) {
                points = figure3_points();
            } else {
                points = figure4_points();
            }
        }
        return emit(opts, cfg, points);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
