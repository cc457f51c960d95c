#include "csra/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "csra/qpsk.hpp"

namespace csra {

std::complex<double> los_gain(const Point3& a, const Point3& b, double lambda_m) {
    const double d = distance(a, b);
    if (d <= 0.0) throw std::invalid_argument("los_gain: coincident antennas");
    const double amp = lambda_m / (4.0 * std::numbers::pi * d);
    const double phase = -2.0 * std::numbers::pi * d / lambda_m;
    return std::polar(amp, phase);
}

ChannelMatrix ChannelMatrix::los(const UlaSpec& rx, const UlaSpec& tx, double lambda_m) {
    if (lambda_m <= 0.0) throw std::invalid_argument("ChannelMatrix: wavelength must be positive");
    ChannelMatrix h;
    h.nr_ = rx.n;
    h.nt_ = tx.n;
    const bool same_axis = rx.axis.dot(tx.axis) > 1.0 - 1e-12;
    const bool same_pitch =
        std::abs(rx.spacing - tx.spacing) <= 1e-12 * std::max(rx.spacing, tx.spacing);
    h.toeplitz_ = same_axis && same_pitch;
    if (h.toeplitz_) {
        h.diag_.resize(h.nr_ + h.nt_ - 1);
        for (int m = 0; m < h.nr_ + h.nt_ - 1; ++m) {
            // Any (r, t) with r - t = m - (nt - 1) gives the same distance.
            const int r = (m >= h.nt_ - 1) ? m - h.nt_ + 1 : 0;
            const int t = (m >= h.nt_ - 1) ? 0 : h.nt_ - 1 - m;
            h.diag_[m] = los_gain(rx.element_position(r), tx.element_position(t), lambda_m);
        }
    } else {
        h.dense_.resize(h.nr_, h.nt_);
        for (int t = 0; t < h.nt_; ++t) {
            for (int r = 0; r < h.nr_; ++r) {
                h.dense_(r, t) = los_gain(rx.element_position(r), tx.element_position(t), lambda_m);
            }
        }
    }
    return h;
}

void ChannelMatrix::accumulate_product(const Eigen::VectorXcd& w,
                                       Eigen::Ref<Eigen::VectorXcd> out) const {
    if (w.size() != nt_ || out.size() != nr_) {
        throw std::invalid_argument("ChannelMatrix: product dimension mismatch");
    }
    if (toeplitz_) {
        for (int t = 0; t < nt_; ++t) {
            out += w[t] * diag_.segment(nt_ - 1 - t, nr_);
        }
    } else {
        out.noalias() += dense_ * w;
    }
}

Eigen::VectorXcd ChannelMatrix::product(const Eigen::VectorXcd& w) const {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(nr_);
    accumulate_product(w, out);
    return out;
}

double noise_variance(double bandwidth_hz, double temperature_k, double noise_figure_db) {
    if (bandwidth_hz <= 0.0 || temperature_k <= 0.0) {
        throw std::invalid_argument("noise_variance: bandwidth and temperature must be positive");
    }
    constexpr double kBoltzmann = 1.380649e-23;
    return bandwidth_hz * kBoltzmann * temperature_k * std::pow(10.0, noise_figure_db / 10.0);
}

double NoiseModel::variance() const {
    return noise_variance(bandwidth_hz, temperature_k, noise_figure_db);
}

double NoiseModel::impl_gain() const { return std::pow(10.0, -implementation_loss_db / 10.0); }

ReceivedSlot synthesize_slot(Rng& noise_rng, const std::vector<TxUser>& users,
                             const std::vector<ChannelMatrix>& channels,
                             const BeamCodebook& book, const Eigen::MatrixXcd& pilots,
                             const SlotSynthesisParams& params) {
    if (users.empty() || users.size() != channels.size()) {
        throw std::invalid_argument("synthesize_slot: users and channels must align and be non-empty");
    }
    const int nr = channels[0].rows();
    const int np = static_cast<int>(pilots.cols());
    const int pilot_count = static_cast<int>(pilots.rows());
    const int nd = kSymbolsPerFrame;
    const int k = static_cast<int>(users.size());

    ReceivedSlot slot;
    slot.pilot_part.resize(nr, np);
    slot.payload_part.resize(nr, nd);
    const double sigma2 = params.noise.variance() * params.noise_scale;
    noise_rng.fill_complex_noise({slot.pilot_part.data(), static_cast<std::size_t>(nr) * np},
                                 sigma2);
    noise_rng.fill_complex_noise({slot.payload_part.data(), static_cast<std::size_t>(nr) * nd},
                                 sigma2);

    Eigen::MatrixXcd g_pil = Eigen::MatrixXcd::Zero(nr, pilot_count);
    Eigen::MatrixXcd g_pay = Eigen::MatrixXcd::Zero(nr, k);
    Eigen::MatrixXcd payloads(k, nd);
    Eigen::VectorXcd g(nr);

    const double base_amp = std::sqrt(params.pt_w * params.noise.impl_gain());
    for (int u = 0; u < k; ++u) {
        const TxUser& user = users[u];
        if (channels[u].rows() != nr) {
            throw std::invalid_argument("synthesize_slot: inconsistent channel row counts");
        }
        if (user.plan.beams.size() != user.plan.pilots.size()) {
            throw std::invalid_argument("synthesize_slot: replica beams and pilots must align");
        }
        if (user.payload.size() != nd) {
            throw std::invalid_argument("synthesize_slot: payload must be one modulation frame");
        }
        const auto r = user.plan.beams.size();
        const double alpha =
            params.policy == PowerPolicy::split ? 1.0 / std::sqrt(static_cast<double>(r)) : 1.0;
        const double amp = base_amp * alpha;
        for (std::size_t j = 0; j < r; ++j) {
            const int pilot = user.plan.pilots[j];
            if (pilot < 0 || pilot >= pilot_count) {
                throw std::invalid_argument("synthesize_slot: pilot index out of range");
            }
            g.setZero();
            channels[u].accumulate_product(book.vector(user.plan.beams[j]), g);
            g_pay.col(u) += amp * g;
            g_pil.col(pilot) += amp * g;
        }
        payloads.row(u) = user.payload.transpose();
    }

    slot.pilot_part.noalias() += g_pil * pilots;
    slot.payload_part.noalias() += g_pay * payloads;

    slot.truth.reserve(users.size());
    for (const TxUser& user : users) {
        slot.truth.push_back({user.msg, user.array.center, user.plan});
    }
    return slot;
}

}  // namespace csra
