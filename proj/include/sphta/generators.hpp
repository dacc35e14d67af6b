#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "sphta/exact_oracle.hpp"
#include "sphta/lp_feasibility.hpp"
#include "sphta/point_set.hpp"

namespace sphta {

struct GenSpec {
    enum class Kind { GaussianVertices, SphereVertices, UniformMatrix };

    Kind kind = Kind::GaussianVertices;
    Index m = 2;
    Index n = 4;
    Index k_vertices = 4;
    double redundant_fraction = 0.0;  // descriptive; k_vertices governs generation
    bool feasible = true;
    std::uint64_t seed = 0;

    void check() const {
        if (m < 1) throw std::invalid_argument("GenSpec: m must be >= 1");
        if (k_vertices < 1 || k_vertices > n)
            throw std::invalid_argument("GenSpec: need 1 <= K <= n");
        if (redundant_fraction < 0.0 || redundant_fraction >= 1.0)
            throw std::invalid_argument("GenSpec: redundant fraction must lie in [0,1)");
    }
};

struct ChmInstance {
    PointSet points;
    Vector query;
    bool feasible_truth;
    Vector true_coefficients;  // feasible case: the generating combination
    double margin;             // infeasible case: certified distance lower bound
    Vector margin_normal;      // direction certifying the margin (points away from the hull)
};

namespace detail {

inline Vector gaussian_vec(std::mt19937_64& rng, Index m) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(m);
    for (Index i = 0; i < m; ++i) v[i] = g(rng);
    return v;
}

inline Vector unit_sphere_vec(std::mt19937_64& rng, Index m) {
    for (;;) {
        Vector v = gaussian_vec(rng, m);
        const double len = v.norm();
        if (len > 1e-12) return v / len;
    }
}

inline Vector uniform01_vec(std::mt19937_64& rng, Index m) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector v(m);
    for (Index i = 0; i < m; ++i) v[i] = u(rng);
    return v;
}

inline Vector kind_vec(std::mt19937_64& rng, GenSpec::Kind kind, Index m) {
    switch (kind) {
        case GenSpec::Kind::SphereVertices: return unit_sphere_vec(rng, m);
        case GenSpec::Kind::UniformMatrix: return uniform01_vec(rng, m);
        default: return gaussian_vec(rng, m);
    }
}

/// Random simplex weights with every entry bounded away from zero.
inline Vector convex_weights(std::mt19937_64& rng, Index n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vector w(n);
    for (Index i = 0; i < n; ++i) w[i] = u(rng) + 1e-3;
    w /= w.sum();
    return w;
}

}  // namespace detail

/// Points per the experiment recipes: K vertices drawn from the chosen
/// distribution, the rest random convex combinations of them. Feasible
/// queries are retained combinations; infeasible queries are displaced
/// beyond a supporting hyperplane so the margin is certified at least
/// 10% of the query's R.
inline ChmInstance gen_chm_instance(const GenSpec& spec) {
    spec.check();
    std::mt19937_64 rng(spec.seed);
    Matrix pts(spec.m, spec.n);
    for (Index j = 0; j < spec.k_vertices; ++j)
        pts.col(j) = detail::kind_vec(rng, spec.kind, spec.m);
    for (Index j = spec.k_vertices; j < spec.n; ++j)
        pts.col(j) = pts.leftCols(spec.k_vertices) *
                     detail::convex_weights(rng, spec.k_vertices);

    PointSet s(pts);
    if (spec.feasible) {
        const Vector w = detail::convex_weights(rng, spec.n);
        Vector q = pts * w;
        return ChmInstance{std::move(s), std::move(q), true, w, 0.0, Vector()};
    }

    // Displace along a supporting direction: prefer the mean direction,
    // fall back to a random one when the centroid degenerates.
    const Vector centroid = pts.rowwise().mean();
    Vector dir = centroid;
    if (dir.norm() <= 1e-8 * (1.0 + pts.cwiseAbs().maxCoeff()))
        dir = detail::unit_sphere_vec(rng, spec.m);
    dir /= dir.norm();

    Index far = 0;
    Vector support = pts.transpose() * dir;
    support.maxCoeff(&far);
    double spread = 0.0;
    for (Index j = 0; j < spec.n; ++j)
        spread = std::max(spread, (pts.col(j) - pts.col(far)).norm());
    spread = std::max(spread, 1e-3 * (1.0 + pts.col(far).norm()));

    // margin / R >= 0.15 by construction: delta = 0.15 (D + delta).
    const double delta = 0.15 * spread / (1.0 - 0.15);
    Vector q = pts.col(far) + delta * dir;
    return ChmInstance{std::move(s), std::move(q), false, Vector(), delta, -dir};
}

struct LpFeasGen {
    LpFeasInstance inst;
    bool feasible_truth;    // as constructed (certified for the dedicated recipe below)
    Vector x_truth;         // feasible case
    Vector farkas_y;        // certified-infeasible case
};

/// The LP-feasibility recipes: A from the chosen distribution; feasible
/// b = Ax with x entrywise uniform (0,1); infeasible b drawn like a
/// column of A (the experimental recipe; not certified).
inline LpFeasGen gen_lp_instance(const GenSpec& spec, double bound_m = 1000.0) {
    std::mt19937_64 rng(spec.seed);
    Matrix a(spec.m, spec.n);
    for (Index j = 0; j < spec.n; ++j) a.col(j) = detail::kind_vec(rng, spec.kind, spec.m);
    if (spec.feasible) {
        const Vector x = detail::uniform01_vec(rng, spec.n);
        Vector b = a * x;
        return LpFeasGen{LpFeasInstance(std::move(a), std::move(b), bound_m), true, x, Vector()};
    }
    Vector b = detail::kind_vec(rng, spec.kind, spec.m);
    return LpFeasGen{LpFeasInstance(std::move(a), std::move(b), bound_m), false, Vector(), Vector()};
}

/// Infeasibility by construction: a Farkas direction y with A^T y
/// componentwise bounded away from zero and b^T y negative, so
/// Ax = b, x >= 0 has no solution for any bound M.
inline LpFeasGen gen_lp_infeasible_certified(Index m, Index n, std::uint64_t seed,
                                             double bound_m = 1000.0) {
    std::mt19937_64 rng(seed);
    const Vector y = detail::unit_sphere_vec(rng, m);
    Matrix a(m, n);
    for (Index j = 0; j < n; ++j) {
        for (;;) {
            Vector col = detail::gaussian_vec(rng, m);
            const double d = col.dot(y);
            if (std::abs(d) < 0.1 * col.norm()) continue;
            a.col(j) = d > 0 ? col : Vector(-col);
            break;
        }
    }
    Vector b;
    for (;;) {
        b = detail::gaussian_vec(rng, m);
        const double d = b.dot(y);
        if (std::abs(d) < 0.3 * b.norm()) continue;
        if (d > 0) b = -b;
        break;
    }
    return LpFeasGen{LpFeasInstance(std::move(a), std::move(b), bound_m), false, Vector(), y};
}

struct StrictLpGen {
    StrictLpInstance inst;
    bool feasible_truth;
    Vector x_truth;   // feasible case: strict solution with slack >= 0.1
    Vector gordan_y;  // certified-infeasible case: weights with A^T y = 0
    double gordan_s = 0.0;
};

/// Feasible recipe b = Ax + xi + 0.1 e (slack at least 0.1 at x);
/// infeasible recipe b = Ax + xi' with half the slack entries zeroed
/// (the experimental construction; not certified infeasible).
inline StrictLpGen gen_strict_lp_instance(const GenSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    const Index n = spec.n, m = spec.m;  // n rows a_i^T, m unknowns
    Matrix a(n, m);
    for (Index i = 0; i < n; ++i) a.row(i) = detail::kind_vec(rng, spec.kind, m).transpose();
    const Vector x = detail::uniform01_vec(rng, m);
    if (spec.feasible) {
        Vector b = a * x + detail::uniform01_vec(rng, n) + Vector::Constant(n, 0.1);
        return StrictLpGen{StrictLpInstance(std::move(a), std::move(b)), true, x, Vector()};
    }
    Vector xi = detail::uniform01_vec(rng, n);
    std::vector<Index> rows(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) rows[static_cast<size_t>(i)] = i;
    std::shuffle(rows.begin(), rows.end(), rng);
    for (Index i = 0; i < n / 2; ++i) xi[rows[static_cast<size_t>(i)]] = 0.0;
    Vector b = a * x + xi;
    return StrictLpGen{StrictLpInstance(std::move(a), std::move(b)), false, Vector(), Vector()};
}

/// Infeasibility by construction via the Gordan identity: strictly
/// positive weights (y, s) with A^T y = 0 and b^T y + s = 0, built over
/// small integers so the identity holds exactly in floating point and
/// the instance is infeasible in exact arithmetic, not merely within
/// rounding noise.
inline StrictLpGen gen_strict_lp_infeasible_certified(Index n_rows, Index m_cols,
                                                      std::uint64_t seed) {
    if (n_rows < 2) throw std::invalid_argument("need at least two rows");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-9, 9);
    std::uniform_int_distribution<int> weight(1, 4);

    Vector y(n_rows);
    for (Index i = 0; i + 1 < n_rows; ++i) y[i] = weight(rng);
    y[n_rows - 1] = 1.0;  // keeps the balancing row division exact
    double s = 1.0 + (rng() % 3);

    Matrix a(n_rows, m_cols);
    for (Index i = 0; i + 1 < n_rows; ++i) {
        for (;;) {
            for (Index j = 0; j < m_cols; ++j) a(i, j) = coef(rng);
            if (a.row(i).cwiseAbs().sum() > 0) break;
        }
    }
    a.row(n_rows - 1).setZero();
    for (Index i = 0; i + 1 < n_rows; ++i) a.row(n_rows - 1) -= y[i] * a.row(i);

    Vector b(n_rows);
    for (Index i = 0; i + 1 < n_rows; ++i) b[i] = coef(rng);
    double bacc = 0.0;
    for (Index i = 0; i + 1 < n_rows; ++i) bacc += y[i] * b[i];
    b[n_rows - 1] = -s - bacc;
    if (a.row(n_rows - 1).cwiseAbs().sum() == 0 && b[n_rows - 1] == 0.0) {
        s += 1.0;  // keep the identity while avoiding an all-zero final row
        b[n_rows - 1] = -s - bacc;
    }

    const double total = y.sum() + s;
    return StrictLpGen{StrictLpInstance(std::move(a), std::move(b)), false, Vector(),
                       Vector(y / total), s / total};
}

}  // namespace sphta
