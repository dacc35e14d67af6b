#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "sphta/point_set.hpp"

namespace sphta {

inline constexpr double kDegenerateSegmentTol = 1e-14;

/// Closest point to p on the closed segment [a, b], with the clamped
/// step coefficient alpha in [0, 1]. A degenerate segment (a ~ b)
/// yields (a, 0).
inline std::pair<Vector, double> nearest_on_segment(const Vector& p, const Vector& a,
                                                    const Vector& b) {
    const Vector ab = b - a;
    const double len2 = ab.squaredNorm();
    const double scale = 1.0 + std::max(a.norm(), b.norm());
    if (std::sqrt(len2) <= kDegenerateSegmentTol * scale) return {a, 0.0};
    double alpha = (p - a).dot(ab) / len2;
    alpha = std::clamp(alpha, 0.0, 1.0);
    return {a + alpha * ab, alpha};
}

/// Pivot test: v is a p-pivot at p' iff ||p' - v|| >= ||p - v||,
/// evaluated in the dot-product form.
inline bool is_pivot(const Vector& p, const Vector& p_prime, const Vector& v) {
    return (p - p_prime).dot(v) >= 0.5 * (p.squaredNorm() - p_prime.squaredNorm());
}

/// Strict pivot test: the angle p'pv is at least pi/2.
inline bool is_strict_pivot(const Vector& p, const Vector& p_prime, const Vector& v) {
    if ((p_prime - p).squaredNorm() == 0.0)
        throw std::invalid_argument("is_strict_pivot: already at query point");
    return (p_prime - p).dot(v - p) <= 0.0;
}

namespace detail {

inline int scan_threads() {
    static const int cached = [] {
        if (const char* env = std::getenv("CHM_THREADS")) {
            const int k = std::atoi(env);
            if (k >= 1) return k;
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }();
    return cached;
}

struct DirectionalScan {
    Index argmin = -1;
    double min_value = 0.0;
    Index first_nonpos = -1;  // lowest index with a nonpositive value, if any
};

/// Minimum over columns of c.(v_j - p), ties to the lowest index.
/// Every pivot/witness predicate of one solver iteration reads off this
/// single reduction. The dots go through one matrix-vector product into
/// a thread-local scratch; large sets additionally partition the product
/// over column ranges. Works on any point source with the PointSet
/// access surface (PointSet itself or a PointView).
template <class Points>
DirectionalScan directional_scan(const Points& s, const Vector& c, const Vector& p) {
    const Index n = s.size();
    const double base = c.dot(p);
    thread_local Vector dots_buffer;
    Vector& dots = dots_buffer;  // a plain reference, so worker lambdas share it
    if (dots.size() < n) dots.resize(n);

    const int want = scan_threads();
    if (want > 1 && n >= 4096) {
        const int parts = std::min<int>(want, static_cast<int>((n + 2047) / 2048));
        std::vector<std::thread> workers;
        workers.reserve(static_cast<size_t>(parts));
        const Index chunk = (n + parts - 1) / parts;
        for (int t = 0; t < parts; ++t) {
            const Index lo = t * chunk;
            const Index hi = std::min(n, lo + chunk);
            workers.emplace_back([&s, &c, &dots, lo, hi] {
                dots.segment(lo, hi - lo).noalias() =
                    s.points().middleCols(lo, hi - lo).transpose() * c;
            });
        }
        for (auto& w : workers) w.join();
    } else {
        dots.head(n).noalias() = s.points().transpose() * c;
    }

    DirectionalScan r;
    for (Index j = 0; j < n; ++j) {
        const double d = dots[j] - base;
        if (r.argmin < 0 || d < r.min_value) {
            r.argmin = j;
            r.min_value = d;
        }
        if (r.first_nonpos < 0 && d <= 0.0) r.first_nonpos = j;
    }
    return r;
}

}  // namespace detail

/// Steepest strict pivot: the index minimizing (p' - p).(v - p), or
/// nothing when no strict pivot exists.
inline std::optional<Index> find_strict_pivot(const Vector& p, const Vector& p_prime,
                                              const PointSet& s) {
    const auto scan = detail::directional_scan(s, p_prime - p, p);
    if (scan.argmin < 0 || scan.min_value > 0.0) return std::nullopt;
    return scan.argmin;
}

inline std::optional<Index> find_strict_pivot(const Vector& p, const Iterate& it,
                                              const PointSet& s) {
    return find_strict_pivot(p, it.coords, s);
}

/// Orthogonal bisector of the segment pp': {x : (p - p').x = (|p|^2 - |p'|^2)/2}.
inline Hyperplane bisector_hyperplane(const Vector& p, const Vector& p_prime) {
    const Vector normal = p - p_prime;
    if (normal.squaredNorm() == 0.0)
        throw std::invalid_argument("bisector_hyperplane: degenerate bisector");
    return Hyperplane{normal, 0.5 * (p.squaredNorm() - p_prime.squaredNorm())};
}

/// Witness test: p' is strictly closer than p to every point of the set,
/// by more than `slack` (distance units).
template <class Points>
bool verify_witness(const Vector& p, const Vector& p_prime, const Points& s,
                    double slack = 0.0) {
    for (Index i = 0; i < s.size(); ++i) {
        const double dp = (p - s.col(i)).norm();
        const double dq = (p_prime - s.col(i)).norm();
        if (!(dp - dq > slack)) return false;
    }
    return true;
}

/// True when the plane puts the query strictly on one side and every
/// point of the set strictly on the other, allowing `slack` relative
/// leeway on each inequality. The orientation is read off the data:
/// the hull side is the one the point average falls on.
inline bool strictly_separates(const Hyperplane& h, const Vector& query, const PointSet& s,
                               double slack = 0.0) {
    const double nq = h.side(query);
    double mean_side = 0.0;
    for (Index i = 0; i < s.size(); ++i) mean_side += h.side(s.col(i));
    mean_side /= static_cast<double>(s.size());
    if (mean_side == nq) return false;
    const double t = mean_side > nq ? 1.0 : -1.0;  // points on the t side

    const double qscale = 1.0 + std::abs(h.offset) + h.normal.norm() * query.norm();
    if (!(-t * nq > -slack * qscale)) return false;
    for (Index i = 0; i < s.size(); ++i) {
        const double scale = 1.0 + std::abs(h.offset) + h.normal.norm() * s.norm(i);
        if (!(t * h.side(s.col(i)) > -slack * scale)) return false;
    }
    return true;
}

}  // namespace sphta
