#pragma once

#include <vector>

#include "csra/rng.hpp"

namespace csra {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Point3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
};

double distance(const Point3& a, const Point3& b);

// Uniform linear array: n elements spaced `spacing` apart along a unit axis,
// centered on `center` (element centroid == center for any parity of n).
struct UlaSpec {
    Point3 center{};
    Point3 axis{0.0, 1.0, 0.0};
    int n = 1;
    double spacing = 0.0;

    UlaSpec() = default;
    UlaSpec(Point3 c, Point3 a, int n_elements, double spacing_m);

    Point3 element_position(int i) const;

    // Aperture by the N*spacing convention used for mode-count formulas.
    double aperture() const { return n * spacing; }
    // Physical end-to-end span, (N-1)*spacing.
    double span() const { return (n - 1) * spacing; }
};

std::vector<Point3> element_positions(const UlaSpec& ula);

// Far-field boundary 2 L^2 / lambda for an aperture of length L.
double fraunhofer_distance(double aperture_m, double lambda_m);

// Number of spatially multiplexable modes between two apertures facing each
// other at boresight distance d: floor(1 + 2 Lt Lr / (lambda sqrt(4 d^2 + Lr^2))).
int coupled_mode_count(double lt_m, double lr_m, double d_m, double lambda_m);

// Deployment scenario: ELAA plus the segment users may occupy. User arrays
// are parallel to the ELAA axis.
struct ScenarioGeometry {
    UlaSpec elaa;
    double user_segment_half_m = 3.0;
    int user_elements = 20;
    double user_spacing_m = 0.0;
};

// Draws k user array centers i.i.d. uniform on the segment
// y in [-user_segment_half, +user_segment_half] (x = z = 0).
std::vector<UlaSpec> place_users(Rng& rng, int k, const ScenarioGeometry& geom);

}  // namespace csra
