#include "csra/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "csra/qpsk.hpp"

namespace csra {

std::complex<double> estimate_channel_pilot(const Eigen::RowVectorXcd& y_p,
                                            const Eigen::RowVectorXcd& pilot, double pt_w) {
    if (y_p.size() != pilot.size()) {
        throw std::invalid_argument("estimate_channel_pilot: sample/pilot length mismatch");
    }
    // pilot.dot(y) = sum conj(pilot_i) y_i = y pilot^H
    return pilot.dot(y_p) / (std::sqrt(pt_w) * static_cast<double>(pilot.size()));
}

Eigen::MatrixXcd estimate_channels(const Eigen::MatrixXcd& pilot_part,
                                   const Eigen::MatrixXcd& pilots, double pt_w) {
    if (pilot_part.cols() != pilots.cols()) {
        throw std::invalid_argument("estimate_channels: sample/pilot length mismatch");
    }
    const double scale = 1.0 / (std::sqrt(pt_w) * static_cast<double>(pilots.cols()));
    return pilot_part * (pilots.adjoint() * scale);
}

double estimator_noise_floor(double sigma2, double pt_w, int n_p) {
    if (pt_w <= 0.0 || n_p < 1) {
        throw std::invalid_argument("estimator_noise_floor: pt and N_P must be positive");
    }
    return sigma2 / (pt_w * static_cast<double>(n_p));
}

DetectionMap build_detection_map(const Eigen::MatrixXcd& pilot_part,
                                 const Eigen::MatrixXcd& pilots, double pt_w, double eta) {
    DetectionMap map;
    map.n_r = static_cast<int>(pilot_part.rows());
    map.pilot_count = static_cast<int>(pilots.rows());
    map.est = estimate_channels(pilot_part, pilots, pt_w);
    map.det.assign(static_cast<std::size_t>(map.n_r) * map.pilot_count, 0);
    for (int p = 0; p < map.pilot_count; ++p) {
        std::uint8_t* col = map.det.data() + static_cast<std::size_t>(p) * map.n_r;
        for (int r = 0; r < map.n_r; ++r) {
            col[r] = std::norm(map.est(r, p)) > eta ? 1 : 0;
        }
    }
    return map;
}

std::vector<Cluster> build_clusters(const DetectionMap& map, bool single_element) {
    std::vector<Cluster> out;
    for (int p = 0; p < map.pilot_count; ++p) {
        const std::uint8_t* col = map.det.data() + static_cast<std::size_t>(p) * map.n_r;
        if (single_element) {
            for (int r = 0; r < map.n_r; ++r) {
                if (col[r]) out.push_back({p, {r, r}});
            }
        } else {
            int r = 0;
            while (r < map.n_r) {
                if (!col[r]) {
                    ++r;
                    continue;
                }
                int e = r;
                while (e + 1 < map.n_r && col[e + 1]) ++e;
                out.push_back({p, {r, e}});
                r = e + 1;
            }
        }
    }
    return out;
}

Eigen::VectorXcd mrc_combine(const MatrixXcdR& payload_part, const Eigen::MatrixXcd& est,
                             const Cluster& c) {
    if (c.span.empty()) throw std::invalid_argument("mrc_combine: empty cluster");
    const int first = c.span.first;
    const int len = c.span.size();
    const auto h = est.col(c.pilot).segment(first, len);
    const double nrm = h.squaredNorm();
    if (!(nrm > 0.0)) throw std::runtime_error("mrc_combine: zero estimate norm");
    Eigen::VectorXcd z(payload_part.cols());
    z.transpose().noalias() = h.adjoint() * payload_part.middleRows(first, len);
    z /= nrm;
    return z;
}

DecodeResult attempt_decode(const Eigen::VectorXcd& symbols) {
    const Codeword cw = qpsk_demap(symbols);
    bool all_zero = true;
    for (auto v : cw.w) all_zero &= (v == 0);
    if (all_zero) return {};
    return bch_decode(cw);
}

Eigen::VectorXcd reestimate_channel_payload(const MatrixXcdR& payload_part,
                                            const Eigen::VectorXcd& symbols,
                                            ElementInterval span) {
    if (span.empty()) return {};
    Eigen::VectorXcd h(span.size());
    h.noalias() = payload_part.middleRows(span.first, span.size()) * symbols.conjugate();
    h /= static_cast<double>(symbols.size());
    return h;
}

void sic_cancel(ReceivedSlot& slot, const Eigen::MatrixXcd& pilots,
                const std::vector<Cluster>& footprints, const Eigen::VectorXcd& symbols) {
    for (const Cluster& f : footprints) {
        if (f.span.empty()) continue;
        const int first = f.span.first;
        const int len = f.span.size();
        const Eigen::VectorXcd h = reestimate_channel_payload(slot.payload_part, symbols, f.span);
        slot.payload_part.middleRows(first, len).noalias() -= h * symbols.transpose();
        slot.pilot_part.middleRows(first, len).noalias() -= h * pilots.row(f.pilot);
    }
}

namespace {

// One slot's worth of receiver state. Re-detection after a cancellation is
// incremental (touched rows only) with memoized cluster outcomes; both are
// bit-exact against the exhaustive reference because cancellation modifies
// only footprint rows, so untouched rows keep identical estimates and
// payloads, and unchanged clusters reproduce identical decode attempts.
class SlotDecoder {
  public:
    SlotDecoder(ReceivedSlot& slot, const ReceiverContext& ctx)
        : slot_(slot),
          ctx_(ctx),
          p_(ctx.params),
          nr_(static_cast<int>(slot.pilot_part.rows())),
          pilot_count_(static_cast<int>(ctx.pilots.rows())),
          pilots_scaled_h_(ctx.pilots.adjoint() /
                           (std::sqrt(ctx.pt_w) * static_cast<double>(ctx.pilots.cols()))) {}

    DecodeOutcome run() {
        est_.resize(nr_, pilot_count_);
        det_.assign(static_cast<std::size_t>(nr_) * pilot_count_, 0);
        last_touch_.assign(static_cast<std::size_t>(nr_), -1);
        detect_rows(0, nr_);
        rebuild_clusters();
        scan_clusters();
        if (p_.sic) {
            std::size_t next = 0;
            while (next < decoded_.size() && rounds_ < p_.max_sic_rounds) {
                cancel(decoded_[next++]);
                ++rounds_;
                rebuild_clusters();
                scan_clusters();
            }
        }

        DecodeOutcome out;
        out.recovered.assign(slot_.truth.size(), 0);
        for (std::size_t u = 0; u < slot_.truth.size(); ++u) {
            if (seen_.count(slot_.truth[u].msg)) {
                out.recovered[u] = 1;
                ++out.recovered_count;
            }
        }
        for (const DecodedEntry& e : decoded_) {
            if (e.user < 0) ++out.false_decodes;
        }
        diag_.sic_rounds = rounds_;
        out.diag = diag_;
        out.decoded = std::move(decoded_);
        return out;
    }

  private:
    static std::uint64_t cluster_key(const Cluster& c) {
        return (static_cast<std::uint64_t>(c.pilot) << 48) |
               (static_cast<std::uint64_t>(c.span.first) << 24) |
               static_cast<std::uint64_t>(c.span.last);
    }

    int max_touch(ElementInterval span) const {
        int m = -1;
        for (int r = span.first; r <= span.last; ++r) m = std::max(m, last_touch_[r]);
        return m;
    }

    void detect_rows(int first, int len) {
        est_.middleRows(first, len).noalias() =
            slot_.pilot_part.middleRows(first, len) * pilots_scaled_h_;
        for (int p = 0; p < pilot_count_; ++p) {
            std::uint8_t* col = det_.data() + static_cast<std::size_t>(p) * nr_;
            for (int r = first; r < first + len; ++r) {
                col[r] = std::norm(est_(r, p)) > p_.eta ? 1 : 0;
            }
        }
    }

    void rebuild_clusters() {
        clusters_.clear();
        for (int p = 0; p < pilot_count_; ++p) {
            const std::uint8_t* col = det_.data() + static_cast<std::size_t>(p) * nr_;
            if (p_.se_mode) {
                for (int r = 0; r < nr_; ++r) {
                    if (col[r]) clusters_.push_back({p, {r, r}});
                }
            } else {
                int r = 0;
                while (r < nr_) {
                    if (!col[r]) {
                        ++r;
                        continue;
                    }
                    int e = r;
                    while (e + 1 < nr_ && col[e + 1]) ++e;
                    clusters_.push_back({p, {r, e}});
                    r = e + 1;
                }
            }
        }
    }

    void scan_clusters() {
        diag_.clusters_seen += clusters_.size();
        Eigen::VectorXcd z(slot_.payload_part.cols());
        for (const Cluster& c : clusters_) {
            if (!p_.exhaustive_rescan) {
                const auto it = attempted_.find(cluster_key(c));
                if (it != attempted_.end() && it->second >= max_touch(c.span)) continue;
                attempted_[cluster_key(c)] = epoch_;
            }
            ++diag_.decode_attempts;
            const auto h = est_.col(c.pilot).segment(c.span.first, c.span.size());
            const double nrm = h.squaredNorm();
            z.transpose().noalias() =
                h.adjoint() * slot_.payload_part.middleRows(c.span.first, c.span.size());
            z /= nrm;
            const DecodeResult res = attempt_decode(z);
            if (!res.ok || seen_.count(res.msg)) continue;
            seen_.insert(res.msg);
            DecodedEntry e;
            e.msg = res.msg;
            e.source_pilot = c.pilot;
            e.source_span = c.span;
            for (std::size_t u = 0; u < slot_.truth.size(); ++u) {
                if (slot_.truth[u].msg == res.msg) {
                    e.user = static_cast<int>(u);
                    break;
                }
            }
            decoded_.push_back(std::move(e));
        }
    }

    void cancel(DecodedEntry& e) {
        ++epoch_;
        std::vector<Cluster> fps;
        if (e.user >= 0) {
            // The decoded payload identifies the sender; its (static) position
            // and replica layout determine the cancellation rows.
            const UserTruth& t = slot_.truth[static_cast<std::size_t>(e.user)];
            for (std::size_t j = 0; j < t.plan.beams.size(); ++j) {
                const ElementInterval iv =
                    predict_footprint(t.center, t.plan.beams[j], ctx_.elaa, ctx_.n_t);
                if (!iv.empty()) fps.push_back({t.plan.pilots[j], iv});
            }
        } else {
            fps.push_back({e.source_pilot, e.source_span});
        }
        const Eigen::VectorXcd symbols = qpsk_map(bch_encode(e.msg));
        if (p_.footprint == FootprintMode::data_driven && !fps.empty()) {
            augment_footprints(fps, symbols);
        }
        sic_cancel(slot_, ctx_.pilots, fps, symbols);
        for (const Cluster& f : fps) {
            for (int r = f.span.first; r <= f.span.last; ++r) last_touch_[r] = epoch_;
        }
        if (p_.exhaustive_rescan) {
            detect_rows(0, nr_);
        } else {
            for (const Cluster& f : fps) detect_rows(f.span.first, f.span.size());
        }
        e.footprints = std::move(fps);
    }

    // Adds rows whose payload-domain re-estimate clears the detection
    // threshold but that no geometric footprint covers; each run of such rows
    // adopts the pilot of the nearest base footprint.
    void augment_footprints(std::vector<Cluster>& fps, const Eigen::VectorXcd& symbols) {
        Eigen::VectorXcd h_all(nr_);
        h_all.noalias() = slot_.payload_part * symbols.conjugate();
        h_all /= static_cast<double>(symbols.size());
        std::vector<std::uint8_t> in_base(static_cast<std::size_t>(nr_), 0);
        for (const Cluster& f : fps) {
            for (int r = f.span.first; r <= f.span.last; ++r) in_base[r] = 1;
        }
        const double pt = ctx_.pt_w;
        const std::size_t base_count = fps.size();
        int r = 0;
        while (r < nr_) {
            if (in_base[r] || !(std::norm(h_all[r]) / pt > p_.eta)) {
                ++r;
                continue;
            }
            int e = r;
            while (e + 1 < nr_ && !in_base[e + 1] && std::norm(h_all[e + 1]) / pt > p_.eta) ++e;
            int best = 0;
            long best_gap = -1;
            for (std::size_t i = 0; i < base_count; ++i) {
                const ElementInterval& s = fps[i].span;
                const long gap = s.first > e ? s.first - e : (r > s.last ? r - s.last : 0);
                if (best_gap < 0 || gap < best_gap) {
                    best_gap = gap;
                    best = static_cast<int>(i);
                }
            }
            fps.push_back({fps[best].pilot, {r, e}});
            r = e + 1;
        }
    }

    ReceivedSlot& slot_;
    const ReceiverContext& ctx_;
    const ReceiverParams& p_;
    int nr_;
    int pilot_count_;
    Eigen::MatrixXcd pilots_scaled_h_;  // N_P x pilot_count, adjoint pre-scaled
    Eigen::MatrixXcd est_;              // n_r x pilot_count
    std::vector<std::uint8_t> det_;     // column-major flags
    std::vector<Cluster> clusters_;
    std::vector<int> last_touch_;                       // epoch a row was last modified
    std::unordered_map<std::uint64_t, int> attempted_;  // cluster key -> epoch of last attempt
    std::unordered_set<MessageBits, MessageBitsHash> seen_;
    std::vector<DecodedEntry> decoded_;  // FIFO cancellation list
    DecodeDiagnostics diag_{};
    int epoch_ = 0;
    int rounds_ = 0;
};

}  // namespace

DecodeOutcome csra_decode(ReceivedSlot& slot, const ReceiverContext& ctx) {
    if (!(ctx.params.eta > 0.0)) {
        throw std::invalid_argument("csra_decode: detection threshold must be positive");
    }
    if (ctx.params.max_sic_rounds < 1) {
        throw std::invalid_argument("csra_decode: max_sic_rounds must be at least 1");
    }
    if (slot.pilot_part.cols() != ctx.pilots.cols()) {
        throw std::invalid_argument("csra_decode: pilot length mismatch");
    }
    SlotDecoder dec(slot, ctx);
    return dec.run();
}

DecodeOutcome csra_se_decode(ReceivedSlot& slot, const ReceiverContext& ctx) {
    ReceiverContext se_ctx = ctx;
    se_ctx.params.se_mode = true;
    return csra_decode(slot, se_ctx);
}

}  // namespace csra
