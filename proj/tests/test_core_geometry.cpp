#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sphta/geometry.hpp"
#include "sphta/point_set.hpp"

using namespace sphta;

namespace {

Vector v2(double x, double y) {
    Vector v(2);
    v << x, y;
    return v;
}

Vector random_vec(std::mt19937_64& rng, Index m, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    Vector v(m);
    for (Index i = 0; i < m; ++i) v[i] = g(rng);
    return v;
}

}  // namespace

TEST_CASE("nearest_on_segment matches the analytic minimizer") {
    // Minimizing |(1-a)*(0,-1) + a*(1,0)|^2 over a gives a = 1/2.
    auto [q, step] = nearest_on_segment(v2(0, 0), v2(0, -1), v2(1, 0));
    CHECK(step == Catch::Approx(0.5));
    CHECK((q - v2(0.5, -0.5)).norm() < 1e-15);

    auto [q2, step2] = nearest_on_segment(v2(0, -1), v2(0, -1), v2(1, 0));
    CHECK(step2 == 0.0);
    CHECK((q2 - v2(0, -1)).norm() == 0.0);

    // Unclamped coefficient 2 clamps to the far endpoint.
    auto [q3, step3] = nearest_on_segment(v2(2, 0), v2(0, 0), v2(1, 0));
    CHECK(step3 == 1.0);
    CHECK((q3 - v2(1, 0)).norm() == 0.0);
}

TEST_CASE("nearest_on_segment degenerate segment returns the endpoint") {
    auto [q, step] = nearest_on_segment(v2(1, 1), v2(3, 4), v2(3, 4));
    CHECK(step == 0.0);
    CHECK((q - v2(3, 4)).norm() == 0.0);
}

TEST_CASE("nearest_on_segment beats the endpoints and random points of the segment") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Index m = 2 + static_cast<Index>(rng() % 5);
        const Vector p = random_vec(rng, m), a = random_vec(rng, m), b = random_vec(rng, m);
        auto [q, step] = nearest_on_segment(p, a, b);
        const double dq = (q - p).norm();
        CHECK(dq <= (a - p).norm() + 1e-12);
        CHECK(dq <= (b - p).norm() + 1e-12);
        for (int i = 0; i < 1000; ++i) {
            const double alpha = unif(rng);
            CHECK(dq <= ((1 - alpha) * a + alpha * b - p).norm() + 1e-12);
        }
    }
}

TEST_CASE("is_pivot examples") {
    CHECK(is_pivot(v2(0, 0), v2(0, -1), v2(1, 0)));
    CHECK_FALSE(is_pivot(v2(0, 0), v2(0, -1), v2(0, -1)));
    // Dot form gives -0.30 < -0.18; distance form 0.02 < 0.26.
    CHECK_FALSE(is_pivot(v2(0, 0), v2(0.6, 0), v2(0.5, 0.1)));
}

TEST_CASE("is_pivot agrees with the distance form") {
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const Index m = 2 + static_cast<Index>(rng() % 4);
        const Vector p = random_vec(rng, m), pp = random_vec(rng, m), v = random_vec(rng, m);
        const double lhs = (p - pp).dot(v);
        const double rhs = 0.5 * (p.squaredNorm() - pp.squaredNorm());
        const double scale = 1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs));
        if (std::abs(lhs - rhs) <= scale) continue;  // numerically tied, both forms may flip
        ++checked;
        CHECK(is_pivot(p, pp, v) == ((pp - v).norm() >= (p - v).norm()));
    }
    CHECK(checked > 9900);

    // Constructed exact tie: v equidistant from p and p'.
    CHECK(is_pivot(v2(0, 0), v2(2, 0), v2(1, 5)));
    CHECK((v2(2, 0) - v2(1, 5)).norm() == (v2(0, 0) - v2(1, 5)).norm());
}

TEST_CASE("is_strict_pivot examples and degenerate query") {
    CHECK(is_strict_pivot(v2(0, 0), v2(0, -1), v2(1, 0)));   // exactly right angle
    CHECK(is_strict_pivot(v2(0, 0), v2(0, -1), v2(0, 1)));   // dot -1
    CHECK_FALSE(is_strict_pivot(v2(0, 0), v2(0, -1), v2(0.1, -1)));  // dot +1
    CHECK_THROWS_AS(is_strict_pivot(v2(1, 2), v2(1, 2), v2(0, 0)), std::invalid_argument);
}

TEST_CASE("find_strict_pivot picks the steepest pivot") {
    Matrix pts(2, 3);
    pts.col(0) = v2(1, 0);
    pts.col(1) = v2(0, 1);
    pts.col(2) = v2(0, -1);
    const PointSet s(pts);
    // Dots of (p'-p) with the points are 0, -1, +1: argmin is index 1.
    const auto j = find_strict_pivot(v2(0, 0), v2(0, -1), s);
    REQUIRE(j.has_value());
    CHECK(*j == 1);
}

TEST_CASE("find_strict_pivot none certifies a witness") {
    Matrix pts(2, 2);
    pts.col(0) = v2(1, 0);
    pts.col(1) = v2(1, 1);
    const PointSet s(pts);
    const Vector p = v2(0, 0), pp = v2(1, 0);
    CHECK_FALSE(find_strict_pivot(p, pp, s).has_value());
    CHECK(verify_witness(p, pp, s));
}

TEST_CASE("strict pivot always exists at simplex vertices containing the query") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        // A triangle strictly containing the origin.
        Matrix pts(2, 3);
        pts.col(0) = v2(2 + std::uniform_real_distribution<>(0, 1)(rng), 0.5);
        pts.col(1) = v2(-1.5, 2 + std::uniform_real_distribution<>(0, 1)(rng));
        pts.col(2) = v2(-1, -2.5);
        const PointSet s(pts);
        for (Index i = 0; i < 3; ++i)
            CHECK(find_strict_pivot(Vector::Zero(2), Vector(s.col(i)), s).has_value());
    }
}

TEST_CASE("bisector_hyperplane examples") {
    const auto h = bisector_hyperplane(v2(0, 0), v2(0, -1));
    CHECK((h.normal - v2(0, 1)).norm() == 0.0);
    CHECK(h.offset == Catch::Approx(-0.5));

    const auto h2 = bisector_hyperplane(v2(1, 0), v2(-1, 0));
    CHECK((h2.normal - v2(2, 0)).norm() == 0.0);
    CHECK(h2.offset == 0.0);

    const auto h3 = bisector_hyperplane(v2(0, 0), v2(0, -2));
    CHECK((h3.normal - v2(0, 2)).norm() == 0.0);
    CHECK(h3.offset == Catch::Approx(-2.0));

    CHECK_THROWS_AS(bisector_hyperplane(v2(1, 1), v2(1, 1)), std::invalid_argument);
}

TEST_CASE("verify_witness examples") {
    Matrix pts(2, 2);
    pts.col(0) = v2(1, 0);
    pts.col(1) = v2(1, 1);
    CHECK(verify_witness(v2(0, 0), v2(0.5, 0), PointSet(pts)));

    Matrix one(2, 1);
    one.col(0) = v2(0, 1);
    CHECK_FALSE(verify_witness(v2(0, 0), v2(0, 0), PointSet(one)));
    CHECK_FALSE(verify_witness(v2(0, 0), v2(0, -1), PointSet(one)));
}

TEST_CASE("a verified witness yields a strictly separating bisector") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Index m = 2 + static_cast<Index>(rng() % 4);
        const Index n = 3 + static_cast<Index>(rng() % 6);
        // Points inside a ball far from the origin; any convex combination
        // is a witness for the query at the origin.
        Matrix pts(m, n);
        Vector shift = Vector::Zero(m);
        shift[0] = 5.0;
        for (Index j = 0; j < n; ++j) pts.col(j) = shift + random_vec(rng, m, 0.5);
        const PointSet s(pts);
        Vector w(n);
        for (Index j = 0; j < n; ++j) w[j] = unif(rng) + 1e-3;
        w /= w.sum();
        const Vector pp = pts * w;
        const Vector p = Vector::Zero(m);
        REQUIRE(verify_witness(p, pp, s));
        const auto h = bisector_hyperplane(p, pp);
        CHECK(strictly_separates(h, p, s));
        // With normal = p - p', the hull sits strictly on the side
        // normal.x < offset and the query on normal.x > offset.
        for (Index j = 0; j < n; ++j) CHECK(h.side(s.col(j)) < 0.0);
        CHECK(h.side(p) > 0.0);
    }
}

TEST_CASE("verify_witness slack rejects thin margins") {
    Matrix pts(2, 1);
    pts.col(0) = v2(1, 0);
    const PointSet s(pts);
    CHECK(verify_witness(v2(0, 0), v2(0.9, 0), s));
    CHECK_FALSE(verify_witness(v2(0, 0), v2(0.9, 0), s, 0.9));
}

TEST_CASE("directional scan matches a plain loop and is thread-stable") {
    std::mt19937_64 rng(5);
    const Index m = 8, n = 6000;
    Matrix pts(m, n);
    for (Index j = 0; j < n; ++j) pts.col(j) = random_vec(rng, m);
    const PointSet s(pts);
    const Vector c = random_vec(rng, m), p = random_vec(rng, m);

    Index ref = -1;
    double refv = 0.0;
    const double base = c.dot(p);
    for (Index j = 0; j < n; ++j) {
        const double d = c.dot(pts.col(j)) - base;
        if (ref < 0 || d < refv) {
            ref = j;
            refv = d;
        }
    }
    const auto scan = detail::directional_scan(s, c, p);
    CHECK(scan.argmin == ref);
    CHECK(scan.min_value == Catch::Approx(refv).margin(1e-12));
}
