#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "csra/bch.hpp"
#include "csra/beams.hpp"
#include "csra/geometry.hpp"
#include "csra/rng.hpp"

namespace csra {

using MatrixXcdR =
    Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Free-space LOS gain lambda/(4 pi d) exp(-j 2 pi d / lambda).
std::complex<double> los_gain(const Point3& a, const Point3& b, double lambda_m);

// LOS channel between a TX ULA and an RX ULA. When the two arrays share the
// same axis direction and element pitch, the gain depends on r - t only and
// the matrix is stored as one diagonal profile of nr + nt - 1 entries;
// arbitrary geometries fall back to a dense matrix.
class ChannelMatrix {
  public:
    static ChannelMatrix los(const UlaSpec& rx, const UlaSpec& tx, double lambda_m);

    int rows() const { return nr_; }
    int cols() const { return nt_; }
    bool is_toeplitz() const { return toeplitz_; }

    std::complex<double> coeff(int r, int t) const {
        return toeplitz_ ? diag_[r - t + nt_ - 1] : dense_(r, t);
    }

    // out += H * w, with w.size() == cols() and out.size() == rows().
    void accumulate_product(const Eigen::VectorXcd& w, Eigen::Ref<Eigen::VectorXcd> out) const;
    Eigen::VectorXcd product(const Eigen::VectorXcd& w) const;

  private:
    ChannelMatrix() = default;

    bool toeplitz_ = false;
    int nr_ = 0, nt_ = 0;
    Eigen::VectorXcd diag_;  // entry m holds the gain for r - t = m - (nt - 1)
    Eigen::MatrixXcd dense_;
};

struct NoiseModel {
    double bandwidth_hz = 1e5;
    double temperature_k = 290.0;
    double noise_figure_db = 10.0;
    double implementation_loss_db = 10.0;

    double variance() const;   // thermal noise power per complex sample
    double impl_gain() const;  // multiplicative signal power derating
};

double noise_variance(double bandwidth_hz, double temperature_k, double noise_figure_db);

// How transmit power is shared by a user's simultaneous replicas: `split`
// scales each replica by 1/sqrt(R) so the radiated total stays pt, `full`
// drives every replica at pt.
enum class PowerPolicy { split, full };

struct TxUser {
    UlaSpec array;
    DirectionPlan plan;
    MessageBits msg;
    Eigen::VectorXcd payload;  // kSymbolsPerFrame modulated symbols
};

// What the receiver may legitimately know about a transmission after it has
// decoded the message: user positions are static and the payload identifies
// the sender, so the replica layout becomes available for cancellation.
struct UserTruth {
    MessageBits msg;
    Point3 center;
    DirectionPlan plan;
};

struct ReceivedSlot {
    Eigen::MatrixXcd pilot_part;  // n_r x N_P samples
    MatrixXcdR payload_part;      // n_r x N_D samples, row-contiguous
    std::vector<UserTruth> truth;
};

struct SlotSynthesisParams {
    double pt_w = 1e-4;
    NoiseModel noise{};
    PowerPolicy policy = PowerPolicy::split;
    double noise_scale = 1.0;  // multiplies the noise variance; 0 disables noise
};

// Builds one received slot: AWGN, then every user's replicas accumulated on
// their pilot and payload gain columns and expanded through two matrix
// products. Users and channels are index-aligned.
ReceivedSlot synthesize_slot(Rng& noise_rng, const std::vector<TxUser>& users,
                             const std::vector<ChannelMatrix>& channels,
                             const BeamCodebook& book, const Eigen::MatrixXcd& pilots,
                             const SlotSynthesisParams& params);

}  // namespace csra
