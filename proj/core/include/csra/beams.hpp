#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "csra/geometry.hpp"
#include "csra/rng.hpp"

namespace csra {

// Closed integer interval of ELAA element indices; empty when first > last.
struct ElementInterval {
    int first = 0;
    int last = -1;

    bool empty() const { return first > last; }
    int size() const { return empty() ? 0 : last - first + 1; }
    bool contains(int i) const { return i >= first && i <= last; }
    bool intersects(const ElementInterval& o) const {
        return !empty() && !o.empty() && first <= o.last && o.first <= last;
    }
};

// Transmit DFT codebook over an n_t-element ULA. Beam indices are
// n in {-n_t/2, ..., -1, +1, ..., +n_t/2}; n = 0 (broadside) is excluded.
// For even n_t the two endfire indices +-n_t/2 alias to the same vector.
class BeamCodebook {
  public:
    explicit BeamCodebook(int n_t);

    int n_t() const { return n_t_; }
    const std::vector<int>& indices() const { return indices_; }

    // Unit-norm beamforming vector, element i = exp(-j pi i 2n/n_t)/sqrt(n_t).
    const Eigen::VectorXcd& vector(int n) const;

  private:
    int n_t_;
    std::vector<int> indices_;
    std::vector<Eigen::VectorXcd> vectors_;  // indexed by position in indices_
};

// Steering angle of beam n: asin(2n/n_t). Throws if |2n/n_t| > 1 or n == 0.
double beam_angle(int n, int n_t);

// Beam indices whose boresight ray from the user center intersects the ELAA:
// finite angle (|2n/n_t| < 1) and |y_user - y_elaa + h tan(theta_n)| <=
// edge_limit * aperture/2, with h the height offset between ELAA and user.
std::vector<int> usable_directions(const Point3& user_center, const UlaSpec& elaa, int n_t,
                                   double edge_limit = 1.0);

struct DirectionPlan {
    std::vector<int> beams;   // distinct beam indices, one per replica
    std::vector<int> pilots;  // pilot index per replica
};

// Draws min(r, usable.size()) distinct beams uniformly without replacement
// and one pilot per replica (i.i.d. uniform, or a single shared pilot when
// single_pilot_per_user is set).
DirectionPlan select_replicas(Rng& rng, const std::vector<int>& usable, int r, int pilot_count,
                              bool single_pilot_per_user = false);

// Elements whose sine-space coordinate u = (y_elem - y_user)/dist(user, elem)
// falls in the beam-n window [2n/n_t - 1/n_t, 2n/n_t + 1/n_t), clipped to the
// array. The window is half-open so one user's adjacent beams partition
// elements exactly.
ElementInterval predict_footprint(const Point3& user_center, int beam, const UlaSpec& elaa,
                                  int n_t);

}  // namespace csra
