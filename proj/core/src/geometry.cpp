#include "csra/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace csra {

double Point3::norm() const { return std::sqrt(x * x + y * y + z * z); }

double distance(const Point3& a, const Point3& b) { return (a - b).norm(); }

UlaSpec::UlaSpec(Point3 c, Point3 a, int n_elements, double spacing_m)
    : center(c), axis(a), n(n_elements), spacing(spacing_m) {
    if (n < 1) throw std::invalid_argument("UlaSpec: element count must be >= 1");
    if (spacing < 0.0) throw std::invalid_argument("UlaSpec: spacing must be >= 0");
    const double an = axis.norm();
    if (an == 0.0) throw std::invalid_argument("UlaSpec: axis must be nonzero");
    axis = axis * (1.0 / an);
}

Point3 UlaSpec::element_position(int i) const {
    if (i < 0 || i >= n) throw std::out_of_range("UlaSpec: element index");
    const double offset = (static_cast<double>(i) - 0.5 * (n - 1)) * spacing;
    return center + axis * offset;
}

std::vector<Point3> element_positions(const UlaSpec& ula) {
    std::vector<Point3> out;
    out.reserve(static_cast<std::size_t>(ula.n));
    for (int i = 0; i < ula.n; ++i) out.push_back(ula.element_position(i));
    return out;
}

double fraunhofer_distance(double aperture_m, double lambda_m) {
    if (aperture_m <= 0.0 || lambda_m <= 0.0) {
        throw std::invalid_argument("fraunhofer_distance: aperture and lambda must be > 0");
    }
    return 2.0 * aperture_m * aperture_m / lambda_m;
}

int coupled_mode_count(double lt_m, double lr_m, double d_m, double lambda_m) {
    if (lt_m <= 0.0 || lr_m <= 0.0 || d_m <= 0.0 || lambda_m <= 0.0) {
        throw std::invalid_argument("coupled_mode_count: all arguments must be > 0");
    }
    const double modes =
        1.0 + 2.0 * lt_m * lr_m / (lambda_m * std::sqrt(4.0 * d_m * d_m + lr_m * lr_m));
    return static_cast<int>(std::floor(modes));
}

std::vector<UlaSpec> place_users(Rng& rng, int k, const ScenarioGeometry& geom) {
    if (k < 0) throw std::invalid_argument("place_users: k must be >= 0");
    std::vector<UlaSpec> users;
    users.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double y = rng.uniform(-geom.user_segment_half_m, geom.user_segment_half_m);
        users.emplace_back(Point3{0.0, y, 0.0}, Point3{0.0, 1.0, 0.0}, geom.user_elements,
                           geom.user_spacing_m);
    }
    return users;
}

}  // namespace csra
