#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "sphta/lp_feasibility.hpp"
#include "sphta/point_set.hpp"
#include "sphta/solver.hpp"

namespace sphta {

struct AvtaConfig {
    double gamma = 0.1;  // absolute robustness margin, > 0
    enum class Oracle { TA, SphericalTA } oracle = Oracle::SphericalTA;
    std::uint64_t seed = 0;
    SolverConfig solver;  // epsilon is overridden per query with gamma / (2R)

    void check() const {
        if (!(gamma > 0.0)) throw std::invalid_argument("AvtaConfig: gamma must be positive");
    }
};

enum class PointLabel { Vertex, Redundant };

struct VertexReport {
    std::vector<Index> vertex_indices;  // the working set, in discovery order
    std::vector<PointLabel> labels;     // one per input point
    long queries = 0;                   // membership oracle calls
    double diameter_R = 0.0;            // hull diameter of the input
    bool degenerate_gamma = false;      // gamma >= diameter shortcut taken
};

struct AvtaOracleLimitError : std::runtime_error {
    AvtaOracleLimitError(Index point, long iters)
        : std::runtime_error("membership oracle hit its iteration cap during vertex enumeration"),
          point_index(point),
          iterations(iters) {}
    Index point_index;
    long iterations;
};

/// Index of the point farthest from v, lowest index on ties.
inline Index farthest(const Vector& v, const PointSet& s) {
    Index best = 0;
    double best_d = (s.col(0) - v).squaredNorm();
    for (Index j = 1; j < s.size(); ++j) {
        const double d = (s.col(j) - v).squaredNorm();
        if (d > best_d) {
            best = j;
            best_d = d;
        }
    }
    return best;
}

/// One vertex-discovery round: among the points outside the working set,
/// take the argmax face of the direction c', pick a random member of the
/// face, and return the face point farthest from it. The last hop keeps
/// degenerate (edge-like) argmax sets from yielding an interior point of
/// the face.
inline Index discover_vertex(const Vector& c_prime, const PointSet& s,
                             const std::vector<bool>& working, std::mt19937_64& rng) {
    if (c_prime.squaredNorm() == 0.0)
        throw std::invalid_argument("discover_vertex: zero direction");
    Index count = 0;
    double best = 0.0;
    for (Index j = 0; j < s.size(); ++j) {
        if (working[static_cast<size_t>(j)]) continue;
        const double val = c_prime.dot(s.col(j));
        if (count == 0 || val > best) best = val;
        ++count;
    }
    if (count == 0) throw std::invalid_argument("discover_vertex: no candidate points");

    const double tol = 1e-9 * c_prime.norm() * std::max(1.0, s.max_norm());
    std::vector<Index> face;
    for (Index j = 0; j < s.size(); ++j) {
        if (working[static_cast<size_t>(j)]) continue;
        if (c_prime.dot(s.col(j)) >= best - tol) face.push_back(j);
    }
    if (face.size() == 1) return face.front();

    const Index pick = face[static_cast<size_t>(rng() % face.size())];
    Index far = face.front();
    double far_d = -1.0;
    for (Index j : face) {
        const double d = (s.col(j) - s.col(pick)).squaredNorm();
        if (d > far_d) {
            far = j;
            far_d = d;
        }
    }
    return far;
}

namespace detail {

inline VertexReport run_avta(const PointSet& s, const AvtaConfig& cfg,
                             AvtaConfig::Oracle oracle) {
    cfg.check();
    const Index n = s.size(), m = s.dim();
    std::mt19937_64 rng(cfg.seed);

    VertexReport rep;
    rep.labels.assign(static_cast<size_t>(n), PointLabel::Redundant);
    rep.diameter_R = s.diameter();

    std::vector<Index> perm(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);

    const Index seed_vertex = farthest(Vector(s.col(perm[0])), s);
    if (!(cfg.gamma < rep.diameter_R)) {
        // Everything would collapse onto a single representative.
        rep.vertex_indices = {seed_vertex};
        for (Index i = 0; i < n; ++i)
            rep.labels[static_cast<size_t>(i)] =
                i == seed_vertex ? PointLabel::Vertex : PointLabel::Redundant;
        rep.degenerate_gamma = true;
        return rep;
    }

    std::vector<bool> in_working(static_cast<size_t>(n), false);
    std::vector<bool> labeled(static_cast<size_t>(n), false);
    Matrix hat(m, n);  // columns 0..k-1 hold the working set
    Vector hat_norms(n);
    Index k = 0;

    const auto add_vertex = [&](Index idx) {
        hat.col(k) = s.col(idx);
        hat_norms[k] = s.norm(idx);
        ++k;
        in_working[static_cast<size_t>(idx)] = true;
        labeled[static_cast<size_t>(idx)] = true;
        rep.labels[static_cast<size_t>(idx)] = PointLabel::Vertex;
        rep.vertex_indices.push_back(idx);
    };
    add_vertex(seed_vertex);

    // Query scratch, reused across the whole run: the spherical frame of
    // the current query is maintained incrementally while the same point
    // is re-queried against a growing working set.
    Matrix unit_buf(m, n);
    Vector scale_buf(n);
    const Vector unit_norms = Vector::Ones(n);

    std::vector<Index> pool;  // unlabeled points in seeded random order
    for (Index i : perm)
        if (!labeled[static_cast<size_t>(i)]) pool.push_back(i);

    for (size_t next = 0; next < pool.size(); ++next) {
        const Index v = pool[next];
        if (labeled[static_cast<size_t>(v)]) continue;
        const Vector vp = s.col(v);
        const double coincide = kCoincidentTol * (1.0 + vp.norm());
        std::optional<Iterate> warm;
        Index transformed = 0;  // unit_buf columns valid for this v

        for (;;) {
            SolverConfig qcfg = cfg.solver;
            detail::EngineResult res;
            bool member = false;

            if (oracle == AvtaConfig::Oracle::TA) {
                const PointView view(hat, hat_norms, k);
                Index start = 0;
                double best2 = -1.0, big_r2 = 0.0;
                for (Index j = 0; j < k; ++j) {
                    const double d2 = (hat.col(j) - vp).squaredNorm();
                    if (best2 < 0.0 || d2 < best2) {
                        best2 = d2;
                        start = j;
                    }
                    big_r2 = std::max(big_r2, d2);
                }
                const double big_r = std::sqrt(big_r2);
                if (big_r == 0.0) {
                    member = true;
                } else {
                    qcfg.epsilon = std::min(cfg.gamma / (2.0 * big_r), 0.999999);
                    res = detail::run_engine(view, vp, qcfg.epsilon * big_r, big_r, start, warm,
                                             qcfg, false);
                }
            } else {
                for (Index j = transformed; j < k && !member; ++j) {
                    unit_buf.col(j) = hat.col(j) - vp;
                    const double len = unit_buf.col(j).norm();
                    if (len <= coincide) {
                        member = true;
                        break;
                    }
                    unit_buf.col(j) /= len;
                    scale_buf[j] = len;
                }
                transformed = k;
                if (!member) {
                    const PointView uview(unit_buf, unit_norms, k);
                    Index start = 0;
                    const double big_r = scale_buf.head(k).maxCoeff();
                    scale_buf.head(k).minCoeff(&start);
                    qcfg.epsilon = std::min(cfg.gamma / (2.0 * big_r), 0.999999);
                    res = detail::run_engine(uview, Vector::Zero(m), qcfg.epsilon, 1.0, start,
                                             warm, qcfg, true, &scale_buf,
                                             qcfg.epsilon * big_r);
                }
            }
            ++rep.queries;
            if (!member && res.kind == detail::EngineResult::Kind::Limit)
                throw AvtaOracleLimitError(v, res.iterations);

            if (member || res.kind == detail::EngineResult::Kind::Inside) {
                rep.labels[static_cast<size_t>(v)] = PointLabel::Redundant;
                labeled[static_cast<size_t>(v)] = true;
                break;
            }

            // Witness: a direction separating v from conv(working set),
            // read as query minus witness in the frame the oracle ran in.
            const Vector c_prime = oracle == AvtaConfig::Oracle::TA
                                       ? Vector(vp - res.iterate.coords)
                                       : Vector(-res.iterate.coords);

            const Index found = discover_vertex(c_prime, s, in_working, rng);
            add_vertex(found);
            if (found == v) break;  // v itself surfaced as the new vertex
            // Same query against the augmented set, warm-started from the
            // previous witness; its support and frame both stay valid.
            warm = std::move(res.iterate);
        }
    }
    return rep;
}

}  // namespace detail

/// All-vertex enumeration with the vanilla Triangle Algorithm oracle.
inline VertexReport avta(const PointSet& s, const AvtaConfig& cfg) {
    return detail::run_avta(s, cfg, AvtaConfig::Oracle::TA);
}

/// All-vertex enumeration with the Spherical-TA oracle.
inline VertexReport avta_plus(const PointSet& s, const AvtaConfig& cfg) {
    return detail::run_avta(s, cfg, AvtaConfig::Oracle::SphericalTA);
}

}  // namespace sphta
