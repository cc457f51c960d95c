#include "csra/beams.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace csra {

BeamCodebook::BeamCodebook(int n_t) : n_t_(n_t) {
    if (n_t < 2) throw std::invalid_argument("BeamCodebook: n_t must be >= 2");
    const int half = n_t / 2;
    for (int n = -half; n <= half; ++n) {
        if (n != 0) indices_.push_back(n);
    }
    vectors_.reserve(indices_.size());
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_t));
    for (int n : indices_) {
        Eigen::VectorXcd b(n_t);
        for (int i = 0; i < n_t; ++i) {
            const double phase = -std::numbers::pi * i * n * 2.0 / n_t;
            b(i) = std::polar(scale, phase);
        }
        vectors_.push_back(std::move(b));
    }
}

const Eigen::VectorXcd& BeamCodebook::vector(int n) const {
    const auto it = std::find(indices_.begin(), indices_.end(), n);
    if (it == indices_.end()) throw std::out_of_range("BeamCodebook: invalid beam index");
    return vectors_[static_cast<std::size_t>(it - indices_.begin())];
}

double beam_angle(int n, int n_t) {
    if (n == 0) throw std::domain_error("beam_angle: n = 0 is not a codebook beam");
    const double s = 2.0 * n / n_t;
    if (std::abs(s) > 1.0) throw std::domain_error("beam_angle: |2n/n_t| > 1");
    return std::asin(s);
}

std::vector<int> usable_directions(const Point3& user_center, const UlaSpec& elaa, int n_t,
                                   double edge_limit) {
    const double h = elaa.center.z - user_center.z;
    const double y0 = user_center.y - elaa.center.y;
    const double half_len = edge_limit * 0.5 * elaa.aperture();
    std::vector<int> usable;
    const int half = n_t / 2;
    for (int n = -half; n <= half; ++n) {
        if (n == 0) continue;
        const double s = 2.0 * n / n_t;
        if (std::abs(s) >= 1.0) continue;  // endfire never intersects
        const double intercept = y0 + h * std::tan(std::asin(s));
        if (std::abs(intercept) <= half_len) usable.push_back(n);
    }
    return usable;
}

DirectionPlan select_replicas(Rng& rng, const std::vector<int>& usable, int r, int pilot_count,
                              bool single_pilot_per_user) {
    if (usable.empty()) throw std::invalid_argument("select_replicas: no usable directions");
    if (r < 1) throw std::invalid_argument("select_replicas: r must be >= 1");
    if (pilot_count < 1) throw std::invalid_argument("select_replicas: pilot_count must be >= 1");

    const int count = std::min<int>(r, static_cast<int>(usable.size()));
    std::vector<int> pool = usable;
    DirectionPlan plan;
    plan.beams.reserve(static_cast<std::size_t>(count));
    plan.pilots.reserve(static_cast<std::size_t>(count));
    // Partial Fisher-Yates: uniform without replacement.
    for (int i = 0; i < count; ++i) {
        const auto j = i + static_cast<int>(rng.uniform_index(pool.size() - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        plan.beams.push_back(pool[static_cast<std::size_t>(i)]);
    }
    if (single_pilot_per_user) {
        const int p = static_cast<int>(rng.uniform_index(pilot_count));
        plan.pilots.assign(static_cast<std::size_t>(count), p);
    } else {
        for (int i = 0; i < count; ++i) {
            plan.pilots.push_back(static_cast<int>(rng.uniform_index(pilot_count)));
        }
    }
    return plan;
}

ElementInterval predict_footprint(const Point3& user_center, int beam, const UlaSpec& elaa,
                                  int n_t) {
    if (beam == 0) throw std::domain_error("predict_footprint: n = 0 is not a codebook beam");
    const double s_lo = (2.0 * beam - 1.0) / n_t;
    const double s_hi = (2.0 * beam + 1.0) / n_t;

    // u(i) is strictly increasing along the array for the parallel-array
    // scenario, so the window maps to one index interval via binary search.
    const auto u_of = [&](int i) {
        const Point3 p = elaa.element_position(i);
        return (p.y - user_center.y) / distance(p, user_center);
    };
    const auto lower = [&](double s) {
        int lo = 0, hi = elaa.n;  // first index with u >= s, or n
        while (lo < hi) {
            const int mid = lo + (hi - lo) / 2;
            if (u_of(mid) < s) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return lo;
    };

    ElementInterval iv;
    iv.first = lower(s_lo);
    iv.last = lower(s_hi) - 1;
    if (iv.first >= elaa.n || iv.last < 0) return {0, -1};
    iv.first = std::max(iv.first, 0);
    iv.last = std::min(iv.last, elaa.n - 1);
    return iv;
}

}  // namespace csra
