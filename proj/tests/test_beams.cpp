#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <vector>

#include "csra/beams.hpp"
#include "doctest.h"

using namespace csra;

namespace {

const UlaSpec kElaa({0.0, 0.0, 8.0}, {0.0, 1.0, 0.0}, 8000, 0.0025);

}  // namespace

TEST_CASE("beam steering angles") {
    CHECK(beam_angle(5, 20) == doctest::Approx(std::numbers::pi / 6.0).epsilon(1e-12));
    CHECK(beam_angle(1, 20) * 180.0 / std::numbers::pi == doctest::Approx(5.7392).epsilon(1e-4));
    CHECK(beam_angle(10, 20) == doctest::Approx(std::numbers::pi / 2.0));
    CHECK(beam_angle(-5, 20) == doctest::Approx(-std::numbers::pi / 6.0));
    CHECK_THROWS(beam_angle(11, 20));
    CHECK_THROWS(beam_angle(0, 20));
}

TEST_CASE("codebook is unit norm and orthogonal away from endfire aliasing") {
    const BeamCodebook book(20);
    CHECK(book.indices().size() == 20);
    for (int n : book.indices()) {
        CHECK(n != 0);
        CHECK(std::abs(book.vector(n).norm() - 1.0) < 1e-12);
    }
    for (int m : book.indices()) {
        for (int n : book.indices()) {
            if (m >= n) continue;
            // Eigen's dot conjugates its first argument, so this is the
            // Hermitian inner product.
            const double ip = std::abs(book.vector(m).dot(book.vector(n)));
            if (m == -10 && n == 10) {
                CHECK(ip == doctest::Approx(1.0));  // +-endfire alias for even arrays
            } else {
                CHECK(ip < 1e-12);
            }
        }
    }
    CHECK_THROWS(book.vector(0));
    CHECK_THROWS(book.vector(11));
}

TEST_CASE("usable directions from the segment center") {
    const std::vector<int> usable = usable_directions({0.0, 0.0, 0.0}, kElaa, 20);
    CHECK(usable.size() == 14);
    const std::set<int> got(usable.begin(), usable.end());
    std::set<int> want;
    for (int n = 1; n <= 7; ++n) {
        want.insert(n);
        want.insert(-n);
    }
    CHECK(got == want);  // n=8 ray lands at 10.67 m, beyond the 10 m half-aperture
}

TEST_CASE("an unbounded aperture accepts every finite-angle beam") {
    const UlaSpec wide({0.0, 0.0, 8.0}, {0.0, 1.0, 0.0}, 8000, 1e6);
    CHECK(usable_directions({0.0, 0.0, 0.0}, wide, 20).size() == 18);
}

TEST_CASE("usable count stays within the designed range over the segment") {
    for (int i = 0; i <= 60; ++i) {
        const double y = -3.0 + 6.0 * i / 60.0;
        const std::size_t count = usable_directions({0.0, y, 0.0}, kElaa, 20).size();
        CHECK(count >= 12);
        CHECK(count <= 16);
    }
}

TEST_CASE("edge limit tightens the usable set") {
    const auto strict = usable_directions({0.0, 0.0, 0.0}, kElaa, 20, 0.5);
    const auto loose = usable_directions({0.0, 0.0, 0.0}, kElaa, 20, 1.0);
    CHECK(strict.size() < loose.size());
    for (int n : strict) CHECK(std::find(loose.begin(), loose.end(), n) != loose.end());
}

TEST_CASE("replica selection draws distinct beams and per-replica pilots") {
    Rng rng(5);
    const std::vector<int> usable = usable_directions({0.0, 0.0, 0.0}, kElaa, 20);

    const DirectionPlan one = select_replicas(rng, usable, 1, 8);
    CHECK(one.beams.size() == 1);
    CHECK(one.pilots.size() == 1);

    const DirectionPlan sat = select_replicas(rng, usable, 99, 8);
    CHECK(sat.beams.size() == usable.size());

    for (int trial = 0; trial < 200; ++trial) {
        const DirectionPlan p = select_replicas(rng, usable, 4, 8);
        REQUIRE(p.beams.size() == 4);
        REQUIRE(p.pilots.size() == 4);
        std::set<int> distinct(p.beams.begin(), p.beams.end());
        CHECK(distinct.size() == 4);
        for (int b : p.beams) CHECK(std::find(usable.begin(), usable.end(), b) != usable.end());
        for (int q : p.pilots) {
            CHECK(q >= 0);
            CHECK(q < 8);
        }
    }

    const DirectionPlan shared = select_replicas(rng, usable, 4, 8, true);
    for (int q : shared.pilots) CHECK(q == shared.pilots[0]);

    CHECK_THROWS(select_replicas(rng, {}, 2, 8));
}

TEST_CASE("replica selection is uniform over the usable set") {
    Rng rng(123);
    const std::vector<int> usable = usable_directions({0.0, 0.0, 0.0}, kElaa, 20);
    REQUIRE(usable.size() == 14);
    std::map<int, int> hits;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        for (int b : select_replicas(rng, usable, 4, 8).beams) ++hits[b];
    }
    for (int n : usable) {
        const double freq = static_cast<double>(hits[n]) / draws;
        CHECK(freq == doctest::Approx(4.0 / 14.0).epsilon(0.035));
    }
}

TEST_CASE("footprint of the first off-axis beam") {
    // Sine window [0.05, 0.15) maps to y in [0.4005, 1.2136) on the ceiling.
    const ElementInterval f = predict_footprint({0.0, 0.0, 0.0}, 1, kElaa, 20);
    CHECK(f.first == 4160);
    CHECK(f.last == 4484);
    CHECK(f.size() == 325);
    const double y_mid = kElaa.element_position((f.first + f.last) / 2).y;
    CHECK(y_mid == doctest::Approx(0.80).epsilon(0.02));
}

TEST_CASE("footprints mirror and tile") {
    const ElementInterval plus = predict_footprint({0.0, 0.0, 0.0}, 1, kElaa, 20);
    const ElementInterval minus = predict_footprint({0.0, 0.0, 0.0}, -1, kElaa, 20);
    CHECK(minus.first == kElaa.n - 1 - plus.last);
    CHECK(minus.last == kElaa.n - 1 - plus.first);

    // Adjacent beams partition the covered stretch without gaps or overlap.
    ElementInterval prev = plus;
    for (int n = 2; n <= 7; ++n) {
        const ElementInterval cur = predict_footprint({0.0, 0.0, 0.0}, n, kElaa, 20);
        CHECK(cur.first == prev.last + 1);
        prev = cur;
    }
}

TEST_CASE("one user's selected footprints never overlap") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const double y = rng.uniform(-3.0, 3.0);
        const auto usable = usable_directions({0.0, y, 0.0}, kElaa, 20);
        const DirectionPlan p = select_replicas(rng, usable, 5, 8);
        std::vector<ElementInterval> fps;
        for (int b : p.beams) fps.push_back(predict_footprint({0.0, y, 0.0}, b, kElaa, 20));
        for (std::size_t i = 0; i < fps.size(); ++i) {
            CHECK(!fps[i].empty());
            for (std::size_t j = i + 1; j < fps.size(); ++j) {
                CHECK(!fps[i].intersects(fps[j]));
            }
        }
    }
}

TEST_CASE("element interval helpers") {
    const ElementInterval e{3, 7};
    CHECK(e.size() == 5);
    CHECK(e.contains(3));
    CHECK(e.contains(7));
    CHECK(!e.contains(8));
    CHECK(e.intersects({7, 9}));
    CHECK(!e.intersects({8, 9}));
    const ElementInterval empty{2, 1};
    CHECK(empty.empty());
    CHECK(empty.size() == 0);
    CHECK(!empty.intersects(e));
}
