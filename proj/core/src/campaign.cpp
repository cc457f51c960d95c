#include "csra/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "csra/pilots.hpp"
#include "csra/qpsk.hpp"
#include "csra/receiver.hpp"
#include "json.hpp"

namespace csra {

std::uint64_t point_tag(const PointSpec& p, std::size_t point_index, bool paired) {
    if (paired) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.k)) << 32) |
               static_cast<std::uint32_t>(p.r);
    }
    return (1ULL << 63) | static_cast<std::uint64_t>(point_index);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t trial) {
    return derive_seed(master, tag, trial, 0);
}

SimConfig apply_point(const SimConfig& base, const PointSpec& p) {
    SimConfig cfg = base;
    cfg.k = p.k;
    cfg.r = p.r;
    cfg.scheme = p.scheme;
    cfg.sic = p.sic;
    return cfg;
}

ReceivedSlot synthesize_trial(std::uint64_t seed, const SimConfig& cfg) {
    Rng scen(derive_seed(seed, 0, 0, 1));
    Rng noise(derive_seed(seed, 0, 0, 2));
    const ScenarioGeometry geom = cfg.scenario();
    const BeamCodebook book(cfg.n_t);
    const Eigen::MatrixXcd pilots = walsh_pilots(cfg.pilot_count, cfg.n_p);

    const std::vector<UlaSpec> arrays = place_users(scen, cfg.k, geom);
    std::vector<TxUser> users;
    std::vector<ChannelMatrix> channels;
    users.reserve(arrays.size());
    channels.reserve(arrays.size());
    for (const UlaSpec& arr : arrays) {
        TxUser u;
        u.array = arr;
        const std::vector<int> usable =
            usable_directions(arr.center, geom.elaa, cfg.n_t, cfg.edge_limit);
        u.plan = select_replicas(scen, usable, cfg.r, cfg.pilot_count, cfg.single_pilot_per_user);
        u.msg = MessageBits::random(scen);
        u.payload = qpsk_map(bch_encode(u.msg));
        users.push_back(std::move(u));
        channels.push_back(ChannelMatrix::los(geom.elaa, arr, cfg.lambda_m()));
    }
    const SlotSynthesisParams sp{cfg.tx_power_w, cfg.noise_model(), cfg.power_policy,
                                 cfg.noise_scale};
    return synthesize_slot(noise, users, channels, book, pilots, sp);
}

DecodeOutcome decode_trial(ReceivedSlot& slot, const SimConfig& cfg) {
    ReceiverContext ctx{walsh_pilots(cfg.pilot_count, cfg.n_p), cfg.elaa_spec(), cfg.n_t,
                        cfg.tx_power_w, cfg.receiver_params()};
    return csra_decode(slot, ctx);
}

TrialResult run_slot(std::uint64_t seed, const SimConfig& cfg) {
    cfg.validate();
    ReceivedSlot slot = synthesize_trial(seed, cfg);
    const DecodeOutcome out = decode_trial(slot, cfg);
    return {0, cfg.k, out.recovered_count, out.false_decodes, out.diag.sic_rounds};
}

PlrEstimate plr(const std::vector<TrialResult>& trials) {
    if (trials.empty()) throw std::invalid_argument("plr: no trial results");
    std::uint64_t lost = 0, total = 0;
    for (const TrialResult& t : trials) {
        if (t.recovered > t.k) throw std::invalid_argument("plr: recovered exceeds k");
        lost += static_cast<std::uint64_t>(t.k - t.recovered);
        total += static_cast<std::uint64_t>(t.k);
    }
    return wilson_interval(lost, total);
}

namespace {

struct Acc {
    std::uint64_t recovered = 0;
    std::uint64_t false_decodes = 0;
    std::uint64_t sic_rounds = 0;
};

}  // namespace

std::vector<PointResult> run_campaign(const SimConfig& base, const std::vector<PointSpec>& points,
                                      const std::function<void(const PointResult&)>& on_point) {
    base.validate();
    if (points.empty()) throw std::invalid_argument("run_campaign: no sweep points");

    // Points sharing a realization tag synthesize each trial's slot once.
    struct Group {
        std::uint64_t tag = 0;
        std::vector<std::size_t> members;
    };
    std::vector<Group> groups;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::uint64_t tag = point_tag(points[i], i, base.paired);
        auto it = std::find_if(groups.begin(), groups.end(),
                               [tag](const Group& g) { return g.tag == tag; });
        if (it == groups.end()) {
            groups.push_back({tag, {i}});
        } else {
            it->members.push_back(i);
        }
    }

    int workers = base.workers > 0 ? base.workers
                                   : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;

    std::vector<PointResult> results(points.size());
    for (const Group& g : groups) {
        std::vector<SimConfig> member_cfgs;
        member_cfgs.reserve(g.members.size());
        for (const std::size_t pi : g.members) member_cfgs.push_back(apply_point(base, points[pi]));

        // One accumulator block per worker; merged by integer sums afterwards
        // so the outcome is independent of scheduling and worker count.
        std::vector<std::vector<Acc>> partials(
            static_cast<std::size_t>(workers),
            std::vector<Acc>(g.members.size()));
        std::atomic<std::uint64_t> next{0};
        std::mutex error_mutex;
        std::exception_ptr error;

        auto work = [&](int wi) {
            std::vector<Acc>& mine = partials[static_cast<std::size_t>(wi)];
            try {
                for (;;) {
                    const std::uint64_t t = next.fetch_add(1, std::memory_order_relaxed);
                    if (t >= base.trials) break;
                    {
                        const std::lock_guard<std::mutex> lock(error_mutex);
                        if (error) break;
                    }
                    const std::uint64_t seed = trial_seed(base.seed, g.tag, t);
                    ReceivedSlot slot = synthesize_trial(seed, member_cfgs.front());
                    for (std::size_t mi = 0; mi < g.members.size(); ++mi) {
                        DecodeOutcome out;
                        if (mi + 1 == g.members.size()) {
                            out = decode_trial(slot, member_cfgs[mi]);
                        } else {
                            ReceivedSlot copy = slot;
                            out = decode_trial(copy, member_cfgs[mi]);
                        }
                        Acc& a = mine[mi];
                        a.recovered += static_cast<std::uint64_t>(out.recovered_count);
                        a.false_decodes += static_cast<std::uint64_t>(out.false_decodes);
                        a.sic_rounds += static_cast<std::uint64_t>(out.diag.sic_rounds);
                    }
                }
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        };

        if (workers == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
            for (std::thread& th : pool) th.join();
        }
        if (error) std::rethrow_exception(error);

        for (std::size_t mi = 0; mi < g.members.size(); ++mi) {
            Acc sum;
            for (int w = 0; w < workers; ++w) {
                const Acc& a = partials[static_cast<std::size_t>(w)][mi];
                sum.recovered += a.recovered;
                sum.false_decodes += a.false_decodes;
                sum.sic_rounds += a.sic_rounds;
            }
            const std::size_t pi = g.members[mi];
            const std::uint64_t total =
                base.trials * static_cast<std::uint64_t>(points[pi].k);
            PointResult& res = results[pi];
            res.point = points[pi];
            res.trials = base.trials;
            res.plr = wilson_interval(total - sum.recovered, total);
            res.mean_sic_rounds =
                static_cast<double>(sum.sic_rounds) / static_cast<double>(base.trials);
            res.false_decode_rate =
                static_cast<double>(sum.false_decodes) / static_cast<double>(total);
            if (on_point) on_point(res);
        }
    }
    return results;
}

std::string to_csv(const std::vector<PointResult>& results, std::uint64_t seed) {
    std::string out = "scheme,sic,k,r,trials,msgs_total,msgs_lost,plr,ci_low,ci_high,seed\n";
    char buf[320];
    for (const PointResult& p : results) {
        std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%llu,%llu,%llu,%.10g,%.10g,%.10g,%llu\n",
                      to_string(p.point.scheme).c_str(), p.point.sic ? 1 : 0, p.point.k, p.point.r,
                      static_cast<unsigned long long>(p.trials),
                      static_cast<unsigned long long>(p.plr.msgs_total),
                      static_cast<unsigned long long>(p.plr.msgs_lost), p.plr.plr, p.plr.ci_low,
                      p.plr.ci_high, static_cast<unsigned long long>(seed));
        out += buf;
    }
    return out;
}

std::string to_json(const std::vector<PointResult>& results, std::uint64_t seed) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const PointResult& p : results) {
        nlohmann::ordered_json o;
        o["scheme"] = to_string(p.point.scheme);
        o["sic"] = p.point.sic;
        o["k"] = p.point.k;
        o["r"] = p.point.r;
        o["trials"] = p.trials;
        o["msgs_total"] = p.plr.msgs_total;
        o["msgs_lost"] = p.plr.msgs_lost;
        o["plr"] = p.plr.plr;
        o["ci_low"] = p.plr.ci_low;
        o["ci_high"] = p.plr.ci_high;
        o["seed"] = seed;
        o["mean_sic_rounds"] = p.mean_sic_rounds;
        o["false_decode_rate"] = p.false_decode_rate;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

}  // namespace csra
