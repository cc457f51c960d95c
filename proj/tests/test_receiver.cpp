#include <cmath>
#include <complex>
#include <vector>

#include "csra/campaign.hpp"
#include "csra/pilots.hpp"
#include "csra/qpsk.hpp"
#include "csra/receiver.hpp"
#include "doctest.h"

using namespace csra;

namespace {

constexpr double kLambda = 0.005;
constexpr double kPt = 1e-4;

// 20 m aperture sampled by 2000 elements: same rays and footprint geometry
// as the reference array at a quarter of the compute.
const UlaSpec kElaa({0.0, 0.0, 8.0}, {0.0, 1.0, 0.0}, 2000, 0.01);

TxUser make_user(Rng& rng, double y, std::vector<int> beams, std::vector<int> pilot_ids) {
    TxUser u;
    u.array = UlaSpec({0.0, y, 0.0}, {0.0, 1.0, 0.0}, 20, 0.0025);
    u.plan.beams = std::move(beams);
    u.plan.pilots = std::move(pilot_ids);
    u.msg = MessageBits::random(rng);
    u.payload = qpsk_map(bch_encode(u.msg));
    return u;
}

ReceivedSlot make_slot(const std::vector<TxUser>& users, double noise_scale, Rng& noise_rng) {
    std::vector<ChannelMatrix> channels;
    channels.reserve(users.size());
    for (const TxUser& u : users) channels.push_back(ChannelMatrix::los(kElaa, u.array, kLambda));
    SlotSynthesisParams params;
    params.noise_scale = noise_scale;
    const BeamCodebook book(20);
    return synthesize_slot(noise_rng, users, channels, book, walsh_pilots(8, 8), params);
}

ReceiverContext make_ctx(double eta_scale = 2.0) {
    ReceiverContext ctx;
    ctx.pilots = walsh_pilots(8, 8);
    ctx.elaa = kElaa;
    ctx.n_t = 20;
    ctx.pt_w = kPt;
    ctx.params.eta = eta_scale * estimator_noise_floor(noise_variance(1e5, 290.0, 10.0), kPt, 8);
    return ctx;
}

}  // namespace

TEST_CASE("estimator noise floor") {
    const double sigma2 = noise_variance(1e5, 290.0, 10.0);
    CHECK(estimator_noise_floor(sigma2, kPt, 8) == doctest::Approx(5.004853e-12).epsilon(1e-5));
    CHECK_THROWS(estimator_noise_floor(sigma2, 0.0, 8));
}

TEST_CASE("pilot-domain estimation recovers the effective channel exactly") {
    Rng rng(3);
    const std::vector<TxUser> users = {make_user(rng, 0.0, {2}, {5})};
    Rng noise_rng(4);
    const ReceivedSlot slot = make_slot(users, 0.0, noise_rng);
    const Eigen::MatrixXcd pilots = walsh_pilots(8, 8);

    const Eigen::MatrixXcd est = estimate_channels(slot.pilot_part, pilots, kPt);
    REQUIRE(est.rows() == kElaa.n);
    REQUIRE(est.cols() == 8);

    // Reference: effective channel of the single replica normalized by
    // sqrt(pt), which is what the pilot correlator returns.
    const BeamCodebook book(20);
    const ChannelMatrix ch = ChannelMatrix::los(kElaa, users[0].array, kLambda);
    const Eigen::VectorXcd href =
        ch.product(book.vector(2)) * std::sqrt(SlotSynthesisParams{}.noise.impl_gain());
    CHECK((est.col(5) - href).norm() < 1e-12 * href.norm());
    for (int p = 0; p < 8; ++p) {
        if (p != 5) CHECK(est.col(p).norm() < 1e-12 * href.norm());
    }

    // Row-level helper agrees with the batched form.
    const std::complex<double> h_one =
        estimate_channel_pilot(slot.pilot_part.row(700), pilots.row(5), kPt);
    CHECK(std::abs(h_one - est(700, 5)) < 1e-15);
}

TEST_CASE("detection fires exactly where the estimate clears the threshold") {
    Rng rng(5);
    const std::vector<TxUser> users = {make_user(rng, 0.3, {1, -2}, {0, 3})};
    Rng noise_rng(6);
    const ReceivedSlot slot = make_slot(users, 1.0, noise_rng);
    const Eigen::MatrixXcd pilots = walsh_pilots(8, 8);
    const double eta = 2.0 * estimator_noise_floor(noise_variance(1e5, 290.0, 10.0), kPt, 8);

    const DetectionMap map = build_detection_map(slot.pilot_part, pilots, kPt, eta);
    REQUIRE(map.n_r == kElaa.n);
    REQUIRE(map.pilot_count == 8);
    int detected = 0;
    for (int p = 0; p < 8; ++p) {
        for (int r = 0; r < map.n_r; ++r) {
            const bool want = std::norm(map.est(r, p)) > eta;
            CHECK(map.detected(r, p) == want);
            detected += want;
            if (!want) CHECK(map.estimate(r, p) == std::complex<double>{});
        }
    }
    // Both replica footprints plus noise-driven false alarms must fire.
    const ElementInterval f1 = predict_footprint(users[0].array.center, 1, kElaa, 20);
    CHECK(detected > f1.size());
}

TEST_CASE("clustering groups maximal contiguous runs per pilot") {
    DetectionMap map;
    map.n_r = 10;
    map.pilot_count = 2;
    map.est = Eigen::MatrixXcd::Constant(10, 2, std::complex<double>(1.0, 0.0));
    map.det.assign(20, 0);
    for (int r : {1, 2, 3, 5}) map.det[0 * 10 + r] = 1;  // pilot 0
    map.det[1 * 10 + 2] = 1;                             // pilot 1

    const std::vector<Cluster> clusters = build_clusters(map, false);
    REQUIRE(clusters.size() == 3);
    CHECK(clusters[0].pilot == 0);
    CHECK(clusters[0].span.first == 1);
    CHECK(clusters[0].span.last == 3);
    CHECK(clusters[1].pilot == 0);
    CHECK(clusters[1].span.first == 5);
    CHECK(clusters[1].span.last == 5);
    CHECK(clusters[2].pilot == 1);
    CHECK(clusters[2].span.first == 2);
    CHECK(clusters[2].span.last == 2);

    const std::vector<Cluster> singles = build_clusters(map, true);
    REQUIRE(singles.size() == 5);
    for (const Cluster& c : singles) CHECK(c.span.size() == 1);
}

TEST_CASE("mrc over a clean rank-one cluster returns the symbols exactly") {
    const int rows = 40;
    Rng rng(7);
    const MessageBits msg = MessageBits::random(rng);
    const Eigen::VectorXcd s = qpsk_map(bch_encode(msg));

    Eigen::VectorXcd h(rows);
    for (int r = 0; r < rows; ++r) h[r] = std::complex<double>(0.1 + 0.01 * r, -0.2 + 0.03 * r);
    MatrixXcdR y = h * s.transpose();
    Eigen::MatrixXcd est = Eigen::MatrixXcd::Zero(rows, 8);
    est.col(2) = h;

    const Cluster c{2, {0, rows - 1}};
    const Eigen::VectorXcd z = mrc_combine(y, est, c);
    CHECK((z - s).norm() < 1e-12);

    const DecodeResult res = attempt_decode(z);
    REQUIRE(res.ok);
    CHECK(res.msg == msg);

    CHECK_THROWS(mrc_combine(y, est, Cluster{2, {5, 4}}));
    CHECK_THROWS(mrc_combine(y, est, Cluster{0, {0, rows - 1}}));  // zero estimate column
}

TEST_CASE("decode attempts reject dead clusters and garbage") {
    // An all-plus symbol vector demaps to the all-zero word: formally a
    // codeword, but a dead cluster carries no message.
    const double a = 1.0 / std::sqrt(2.0);
    const Eigen::VectorXcd flat = Eigen::VectorXcd::Constant(kSymbolsPerFrame, {a, a});
    CHECK(!attempt_decode(flat).ok);

    Rng rng(9);
    int accepted = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXcd z(kSymbolsPerFrame);
        for (int i = 0; i < z.size(); ++i) z[i] = rng.complex_normal(1.0);
        accepted += attempt_decode(z).ok;
    }
    CHECK(accepted <= 1);
}

TEST_CASE("payload re-estimation and cancellation are exact without noise") {
    Rng rng(11);
    const std::vector<TxUser> users = {make_user(rng, -0.4, {3}, {6})};
    Rng noise_rng(12);
    ReceivedSlot slot = make_slot(users, 0.0, noise_rng);
    const Eigen::MatrixXcd pilots = walsh_pilots(8, 8);

    const Eigen::VectorXcd sym = qpsk_map(bch_encode(users[0].msg));
    const ElementInterval all{0, kElaa.n - 1};
    const Eigen::VectorXcd h = reestimate_channel_payload(slot.payload_part, sym, all);

    const double before =
        std::sqrt(slot.pilot_part.squaredNorm() + slot.payload_part.squaredNorm());
    sic_cancel(slot, pilots, {Cluster{6, all}}, sym);
    const double after =
        std::sqrt(slot.pilot_part.squaredNorm() + slot.payload_part.squaredNorm());
    CHECK(after < 1e-12 * before);
    CHECK(h.size() == kElaa.n);
}

TEST_CASE("cancelling a geometric footprint removes the mainlobe energy") {
    Rng rng(13);
    const std::vector<TxUser> users = {make_user(rng, 0.2, {2}, {1})};
    Rng noise_rng(14);
    ReceivedSlot slot = make_slot(users, 0.0, noise_rng);
    const Eigen::MatrixXcd pilots = walsh_pilots(8, 8);

    const ElementInterval fp = predict_footprint(users[0].array.center, 2, kElaa, 20);
    const double fp_before = slot.payload_part.middleRows(fp.first, fp.size()).norm();
    const double total_before = slot.payload_part.norm();

    sic_cancel(slot, pilots, {Cluster{1, fp}}, qpsk_map(bch_encode(users[0].msg)));
    CHECK(slot.payload_part.middleRows(fp.first, fp.size()).norm() < 1e-12 * fp_before);
    // Sidelobe energy outside the footprint survives by design.
    CHECK(slot.payload_part.norm() < total_before);
    CHECK(slot.payload_part.norm() > 0.0);
}

TEST_CASE("full receiver pass recovers disjoint users without cancellation") {
    Rng rng(15);
    const std::vector<TxUser> users = {
        make_user(rng, -2.0, {4, 6}, {0, 1}),
        make_user(rng, 2.0, {-4, -6}, {2, 3}),
    };

    // The code is complement-closed (the all-ones vector is a codeword), so
    // a cluster whose channel estimate is ~180 degrees out of phase with the
    // payload that dominates its rows decodes that user's bit complement.
    // One user's sidelobe cluster overlapping another's mainlobe produces
    // exactly this, even without noise. Such ghosts are expected and benign;
    // any non-complement false decode here would be a defect.
    const auto check_outcome = [&](const DecodeOutcome& out) {
        REQUIRE(out.recovered.size() == 2);
        CHECK(out.recovered[0] == 1);
        CHECK(out.recovered[1] == 1);
        CHECK(out.diag.clusters_seen > 0);
        for (const DecodedEntry& e : out.decoded) {
            if (e.user >= 0) continue;
            bool is_complement = false;
            for (const TxUser& u : users) {
                MessageBits flipped = u.msg;
                for (int i = 0; i < MessageBits::kBits; ++i) flipped.set(i, !flipped.get(i));
                is_complement = is_complement || flipped == e.msg;
            }
            CHECK(is_complement);
        }
    };

    SUBCASE("noiseless") {
        Rng noise_rng(16);
        ReceivedSlot slot = make_slot(users, 0.0, noise_rng);
        check_outcome(csra_decode(slot, make_ctx()));
    }

    SUBCASE("full noise") {
        Rng noise_rng(16);
        ReceivedSlot slot = make_slot(users, 1.0, noise_rng);
        check_outcome(csra_decode(slot, make_ctx()));
    }
}

TEST_CASE("receiver context is validated") {
    Rng rng(17);
    const std::vector<TxUser> users = {make_user(rng, 0.0, {1}, {0})};
    Rng noise_rng(18);
    ReceivedSlot slot = make_slot(users, 1.0, noise_rng);

    ReceiverContext bad = make_ctx();
    bad.params.eta = 0.0;
    CHECK_THROWS(csra_decode(slot, bad));

    ReceiverContext rounds = make_ctx();
    rounds.params.max_sic_rounds = 0;
    CHECK_THROWS(csra_decode(slot, rounds));

    ReceiverContext pil = make_ctx();
    pil.pilots = walsh_pilots(8, 16);  // wrong pilot length for the slot
    CHECK_THROWS(csra_decode(slot, pil));
}

TEST_CASE("single-element mode recovers an isolated noiseless user") {
    Rng rng(19);
    const std::vector<TxUser> users = {make_user(rng, 0.0, {2}, {4})};
    Rng noise_rng(20);
    ReceivedSlot slot = make_slot(users, 0.0, noise_rng);
    ReceiverContext ctx = make_ctx();

    const DecodeOutcome out = csra_se_decode(slot, ctx);
    CHECK(out.recovered_count == 1);
    // Every detected element is its own cluster; the duplicate decodes of the
    // same message must be deduplicated, not recounted.
    CHECK(out.diag.clusters_seen > 50);
    CHECK(out.decoded.size() == 1);
}

TEST_CASE("paired slots: SIC never recovers fewer users than no-SIC") {
    SimConfig cfg;
    cfg.k = 25;
    cfg.r = 4;
    SimConfig no_sic = cfg;
    no_sic.sic = false;

    int sic_total = 0, plain_total = 0;
    for (std::uint64_t t = 0; t < 20; ++t) {
        const std::uint64_t seed = trial_seed(cfg.seed, point_tag({cfg.k, cfg.r}, 0, true), t);
        ReceivedSlot slot = synthesize_trial(seed, cfg);
        ReceivedSlot copy = slot;
        const DecodeOutcome plain = decode_trial(copy, no_sic);
        const DecodeOutcome sic = decode_trial(slot, cfg);
        CHECK(sic.recovered_count >= plain.recovered_count);
        for (std::size_t u = 0; u < sic.recovered.size(); ++u) {
            // SIC only ever adds to the first-pass decode set.
            if (plain.recovered[u]) CHECK(sic.recovered[u]);
        }
        sic_total += sic.recovered_count;
        plain_total += plain.recovered_count;
    }
    CHECK(sic_total > plain_total);  // at this load SIC recovers strictly more
}

TEST_CASE("incremental rescan matches the exhaustive reference receiver") {
    SimConfig cfg;
    cfg.elaa_length_m = 10.0;  // 4000 elements: cheaper, same structure
    cfg.k = 10;
    cfg.r = 3;
    SimConfig ref = cfg;
    ref.exhaustive_rescan = true;

    for (std::uint64_t t = 0; t < 25; ++t) {
        const std::uint64_t seed = trial_seed(7, point_tag({cfg.k, cfg.r}, 0, true), t);
        ReceivedSlot slot = synthesize_trial(seed, cfg);
        ReceivedSlot slot_ref = slot;
        const DecodeOutcome fast = decode_trial(slot, cfg);
        const DecodeOutcome full = decode_trial(slot_ref, ref);
        CHECK(fast.recovered == full.recovered);
        CHECK(fast.recovered_count == full.recovered_count);
        CHECK(fast.false_decodes == full.false_decodes);
        CHECK(fast.diag.sic_rounds == full.diag.sic_rounds);
        // The memo must only ever skip work, never add it.
        CHECK(fast.diag.decode_attempts <= full.diag.decode_attempts);
    }
}

TEST_CASE("data-driven footprints also clear the slot") {
    SimConfig cfg;
    cfg.elaa_length_m = 10.0;
    cfg.k = 8;
    cfg.r = 3;
    cfg.footprint = FootprintMode::data_driven;
    SimConfig geo = cfg;
    geo.footprint = FootprintMode::geometric;

    int data_total = 0, geo_total = 0;
    for (std::uint64_t t = 0; t < 15; ++t) {
        const std::uint64_t seed = trial_seed(3, point_tag({cfg.k, cfg.r}, 0, true), t);
        ReceivedSlot slot = synthesize_trial(seed, cfg);
        ReceivedSlot slot2 = slot;
        data_total += decode_trial(slot, cfg).recovered_count;
        geo_total += decode_trial(slot2, geo).recovered_count;
    }
    // Both modes must be in the same performance regime at this light load.
    CHECK(data_total >= 15 * 8 - 12);
    CHECK(geo_total >= 15 * 8 - 12);
}
