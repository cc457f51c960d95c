#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "csra/bch.hpp"
#include "csra/beams.hpp"
#include "csra/channel.hpp"

namespace csra {

enum class Scheme { csra, csra_se };
enum class FootprintMode { geometric, data_driven };

struct ReceiverParams {
    double eta = 0.0;  // detection threshold on |h_est|^2
    bool sic = true;
    int max_sic_rounds = 256;
    bool se_mode = false;  // per-element processing: every detection is its own cluster
    FootprintMode footprint = FootprintMode::geometric;
    // Reference mode: full re-estimation, re-detection and re-decoding after
    // every cancellation, with no memoization. The default incremental path
    // must produce bit-identical outcomes.
    bool exhaustive_rescan = false;
};

struct ReceiverContext {
    Eigen::MatrixXcd pilots;  // pilot_count x N_P, rows orthogonal
    UlaSpec elaa;
    int n_t = 20;
    double pt_w = 1e-4;
    ReceiverParams params;
};

// Per-(element, pilot) channel estimates and their detection flags.
struct DetectionMap {
    Eigen::MatrixXcd est;           // n_r x pilot_count
    std::vector<std::uint8_t> det;  // column-major: det[p * n_r + r]
    int n_r = 0;
    int pilot_count = 0;

    bool detected(int r, int p) const {
        return det[static_cast<std::size_t>(p) * n_r + r] != 0;
    }
    // Gated accessor: an estimate exists only where detection fired.
    std::complex<double> estimate(int r, int p) const {
        return detected(r, p) ? est(r, p) : std::complex<double>{};
    }
};

// Maximal run of contiguous elements detected on one pilot (a single element
// in SE mode).
struct Cluster {
    int pilot = 0;
    ElementInterval span{};
};

struct DecodedEntry {
    MessageBits msg{};
    int user = -1;  // index into slot truth, -1 for a false decode
    int source_pilot = 0;
    ElementInterval source_span{};
    std::vector<Cluster> footprints;  // rows cancelled for this message
};

struct DecodeDiagnostics {
    std::uint64_t decode_attempts = 0;
    std::uint64_t clusters_seen = 0;
    int sic_rounds = 0;  // cancellations performed
};

struct DecodeOutcome {
    std::vector<DecodedEntry> decoded;
    std::vector<std::uint8_t> recovered;  // per truth user
    int recovered_count = 0;
    int false_decodes = 0;
    DecodeDiagnostics diag{};
};

// Pilot-domain estimate for one element: h = y_p pilot^H / (sqrt(pt) N_P).
std::complex<double> estimate_channel_pilot(const Eigen::RowVectorXcd& y_p,
                                            const Eigen::RowVectorXcd& pilot, double pt_w);

// Batched form over all elements and pilots in two matrix products.
Eigen::MatrixXcd estimate_channels(const Eigen::MatrixXcd& pilot_part,
                                   const Eigen::MatrixXcd& pilots, double pt_w);

inline bool energy_detect(std::complex<double> h_est, double eta) {
    return std::norm(h_est) > eta;
}

// Noise power of the pilot-domain estimator, sigma^2 / (pt N_P); thresholds
// are expressed as multiples of this floor.
double estimator_noise_floor(double sigma2, double pt_w, int n_p);

DetectionMap build_detection_map(const Eigen::MatrixXcd& pilot_part,
                                 const Eigen::MatrixXcd& pilots, double pt_w, double eta);

// Maximal contiguous runs per pilot, pilot-major, runs by ascending first
// index. With single_element set, one cluster per detected (element, pilot).
std::vector<Cluster> build_clusters(const DetectionMap& map, bool single_element);

// z = h^H Y_D / ||h||^2 over the cluster rows. Throws if the estimate segment
// has zero norm (cannot happen for a detected cluster).
Eigen::VectorXcd mrc_combine(const MatrixXcdR& payload_part, const Eigen::MatrixXcd& est,
                             const Cluster& c);

// Demap + decode; ok=false on decoder failure or an all-zero demapped word
// (a dead cluster carries no message).
DecodeResult attempt_decode(const Eigen::VectorXcd& symbols);

// Payload-domain re-estimate h(r) = Y_D.row(r) s^H / N_D for rows in span.
Eigen::VectorXcd reestimate_channel_payload(const MatrixXcdR& payload_part,
                                            const Eigen::VectorXcd& symbols,
                                            ElementInterval span);

// For every footprint row: re-estimate from the payload residual and subtract
// the reconstructed [pilot, payload] contribution. Rows outside the
// footprints are untouched.
void sic_cancel(ReceivedSlot& slot, const Eigen::MatrixXcd& pilots,
                const std::vector<Cluster>& footprints, const Eigen::VectorXcd& symbols);

// Full receiver pass: detection, clustering, per-cluster decode, then (when
// enabled) FIFO interference cancellation with global re-detection after
// every cancellation.
DecodeOutcome csra_decode(ReceivedSlot& slot, const ReceiverContext& ctx);

// Same pipeline with per-element (singleton) clusters.
DecodeOutcome csra_se_decode(ReceivedSlot& slot, const ReceiverContext& ctx);

}  // namespace csra
