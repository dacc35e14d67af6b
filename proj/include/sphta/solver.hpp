#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "sphta/geometry.hpp"
#include "sphta/point_set.hpp"
#include "sphta/spherical.hpp"

namespace sphta {

struct SolverConfig {
    enum class PivotRule { Greedy, FirstFound };

    double epsilon = 1e-2;          // relative precision, in (0,1)
    long max_iterations = 0;        // 0 selects the default bound below
    PivotRule pivot_rule = PivotRule::Greedy;
    bool enable_eps_property = false;
    bool record_trace = false;

    // Plumbing knobs.
    long composite_cap_per_point = 50;  // inner-iteration budget factor of the restart strategy
    long reproject_every = 1000;        // dense coefficient re-projection cadence
};

/// Comfortably exceeds the O(1/eps^2) worst-case iteration bound.
inline long default_max_iterations(double eps) {
    const double c = 10.0 * std::ceil(1.0 / (eps * eps)) + 1000.0;
    return c > 9e17 ? static_cast<long>(9e17) : static_cast<long>(c);
}

inline void validate(const SolverConfig& cfg) {
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
        throw std::invalid_argument("SolverConfig: epsilon must lie in (0,1)");
    if (cfg.max_iterations < 0)
        throw std::invalid_argument("SolverConfig: max_iterations must be >= 1 (or 0 for default)");
}

/// Per-iteration record of a solver run. `deltas` holds the normalized
/// gap after each iteration including the start, so it has one more
/// entry than `pivot_indices` / `eps_property_flags` (which describe the
/// step taken). A pivot index of -1 marks a composite-restart jump.
struct IterationTrace {
    std::vector<double> deltas;
    std::vector<Index> pivot_indices;
    std::vector<char> eps_property_flags;
};

/// Worst-case gap envelope of the spherical iteration: delta_k <= 1/sqrt(1+k).
inline double worst_case_delta_bound(long k) {
    if (k < 0) throw std::invalid_argument("worst_case_delta_bound: negative k");
    return 1.0 / std::sqrt(1.0 + static_cast<double>(k));
}

struct InsideApprox {
    Iterate iterate;   // over the original point set
    double residual;   // ||p - iterate.coords|| in the original frame
};

struct WitnessResult {
    WitnessCertificate cert;  // witness + bisector in the frame the loop ran in
    Hyperplane raw_plane;     // separating plane in original coordinates
};

struct IterationLimit {
    Iterate best;      // best (last) iterate reached, original frame
    double residual;
};

struct ChmOutcome {
    std::variant<InsideApprox, WitnessResult, IterationLimit> result;
    long iterations = 0;
    std::optional<IterationTrace> trace;

    bool inside() const { return std::holds_alternative<InsideApprox>(result); }
    bool witness() const { return std::holds_alternative<WitnessResult>(result); }
    bool limit() const { return std::holds_alternative<IterationLimit>(result); }
    const InsideApprox& as_inside() const { return std::get<InsideApprox>(result); }
    const WitnessResult& as_witness() const { return std::get<WitnessResult>(result); }
    const IterationLimit& as_limit() const { return std::get<IterationLimit>(result); }
};

/// Fast-path pivot search (spherical frame): a pivot at distance at least
/// sqrt(1+eps) from p', preferring the farthest one. With unit points the
/// farthest qualifying pivot is exactly the argmin of p'.v, so one scan
/// decides.
inline std::optional<Index> check_eps_property(const Vector& p_prime, const PointSet& s_unit,
                                               double eps) {
    const double d2 = p_prime.squaredNorm();
    const auto scan = detail::directional_scan(s_unit, p_prime, Vector::Zero(p_prime.size()));
    if (scan.argmin < 0) return std::nullopt;
    if (scan.min_value <= 0.5 * (d2 - eps)) return scan.argmin;
    return std::nullopt;
}

struct CompositeReduced {
    Iterate iterate;
};
struct CompositeWitness {
    WitnessCertificate cert;
};
struct CompositeLimit {
    Iterate best;
};
using CompositeOutcome = std::variant<CompositeReduced, CompositeWitness, CompositeLimit>;

namespace detail {

inline std::vector<std::pair<Index, double>> sparse_from_dense(const Vector& w) {
    double sum = 0.0;
    for (Index i = 0; i < w.size(); ++i)
        if (w[i] > 0.0) sum += w[i];
    std::vector<std::pair<Index, double>> out;
    for (Index i = 0; i < w.size(); ++i)
        if (w[i] > 0.0) out.emplace_back(i, w[i] / sum);
    return out;
}

struct CompositeInternal {
    enum class Kind { Reduced, Witness, Limit } kind;
    Vector coords;
    Vector dense_coeffs;
};

/// The restart strategy for iterates without the eps-property: solve the
/// membership problem restricted to a small adaptive subset until the
/// squared gap drops by (0.4 eps)^2, a witness emerges, or the inner
/// budget runs out. Spherical frame (query at the origin, unit points).
/// `first_pivot`, when nonnegative, is a pivot for p_k the caller
/// already scanned for.
template <class Points>
CompositeInternal composite_engine(const Vector& pk_coords, const Vector& pk_dense,
                                   const Points& s, double eps, const SolverConfig& cfg,
                                   Index first_pivot = -1) {
    const Index m = s.dim();
    const Vector origin = Vector::Zero(m);
    const double target2 = pk_coords.squaredNorm() - (0.4 * eps) * (0.4 * eps);

    // Restricted point list: column 0 is p_k itself, the rest are
    // members of S (their original indices in `members`).
    Matrix rpts(m, 8);
    Vector rnorm2(8);  // cached squared norms of the restricted columns
    Index k = 1;
    rpts.col(0) = pk_coords;
    rnorm2[0] = pk_coords.squaredNorm();
    std::vector<Index> members;  // parallel to columns 1..k-1 of rpts

    const auto push_point = [&](Index idx) {
        if (k == rpts.cols()) {
            rpts.conservativeResize(Eigen::NoChange, 2 * k);
            rnorm2.conservativeResize(2 * k);
        }
        members.push_back(idx);
        rpts.col(k) = s.col(idx);
        rnorm2[k] = s.norm(idx) * s.norm(idx);
        ++k;
    };

    const auto compose = [&](const Vector& c) {
        Vector dense = c[0] * pk_dense;
        for (size_t r = 0; r < members.size(); ++r) dense[members[r]] += c[static_cast<Index>(r) + 1];
        return dense;
    };
    const auto outcome = [&](CompositeInternal::Kind kind, const Vector& q, const Vector& c) {
        return CompositeInternal{kind, q, compose(c)};
    };

    // Pulls a pivot for q from the full set into the restricted list;
    // returns false when none exists (q is a witness candidate) or the
    // index is somehow already present.
    const auto augment = [&](const Vector& q) {
        const auto scan = directional_scan(s, q, origin);
        if (scan.argmin < 0 || scan.min_value > 0.5 * q.squaredNorm()) return false;
        for (Index i : members)
            if (i == scan.argmin) return false;
        push_point(scan.argmin);
        return true;
    };

    Vector q = pk_coords;
    Vector c = Vector::Ones(1);
    if (first_pivot >= 0) {
        push_point(first_pivot);
    } else if (!augment(q)) {
        if (verify_witness(origin, q, s)) return outcome(CompositeInternal::Kind::Witness, q, c);
        return outcome(CompositeInternal::Kind::Limit, q, c);
    }

    // First inner step lands on Nearest(0; p_k v^k); a pivot for it seeds
    // the third restricted point.
    {
        auto [q1, alpha] = nearest_on_segment(origin, q, rpts.col(1));
        q = q1;
        c = Vector::Zero(2);
        c[0] = 1.0 - alpha;
        c[1] = alpha;
    }
    if (q.squaredNorm() <= target2) return outcome(CompositeInternal::Kind::Reduced, q, c);
    if (!augment(q)) {
        if (verify_witness(origin, q, s)) return outcome(CompositeInternal::Kind::Witness, q, c);
        return outcome(CompositeInternal::Kind::Limit, q, c);
    }
    c.conservativeResize(3);
    c[2] = 0.0;

    long inner = 0;
    double q2 = q.squaredNorm();
    for (;;) {
        if (q2 <= target2 || q2 <= eps * eps)
            return outcome(CompositeInternal::Kind::Reduced, q, c);
        if (inner >= cfg.composite_cap_per_point * k)
            return outcome(CompositeInternal::Kind::Limit, q, c);

        // Pivot scan over the restricted list only.
        Index jbest = -1;
        double dbest = 0.0;
        for (Index j = 0; j < k; ++j) {
            const double d = q.dot(rpts.col(j));
            if (jbest < 0 || d < dbest) {
                jbest = j;
                dbest = d;
            }
        }
        if (dbest > 0.5 * q2) {
            // Relative witness: grow the restricted set from the full set,
            // or conclude.
            if (!augment(q)) {
                if (verify_witness(origin, q, s)) return outcome(CompositeInternal::Kind::Witness, q, c);
                return outcome(CompositeInternal::Kind::Limit, q, c);
            }
            c.conservativeResize(k);
            c[k - 1] = 0.0;
            continue;
        }

        // Projection step onto [q, r_j], all in scalars plus one axpy.
        const double denom = q2 - 2.0 * dbest + rnorm2[jbest];
        double alpha = denom > 0.0 ? (q2 - dbest) / denom : 0.0;
        if (alpha > 1.0) alpha = 1.0;
        if (alpha <= 0.0) return outcome(CompositeInternal::Kind::Limit, q, c);
        q *= (1.0 - alpha);
        q.noalias() += alpha * rpts.col(jbest);
        q2 = q.squaredNorm();
        c *= (1.0 - alpha);
        c[jbest] += alpha;
        ++inner;
    }
}

}  // namespace detail

/// Public form of the restart strategy. `p_k` must carry valid convex
/// coefficients over `s`.
inline CompositeOutcome composite_iterate(const Iterate& p_k, const PointSet& s, double eps,
                                          const SolverConfig& cfg) {
    Vector dense = Vector::Zero(s.size());
    for (const auto& [i, w] : p_k.coeffs) dense[i] += w;
    const auto r = detail::composite_engine(p_k.coords, dense, s, eps, cfg);
    Iterate it{r.coords, detail::sparse_from_dense(r.dense_coeffs)};
    switch (r.kind) {
        case detail::CompositeInternal::Kind::Reduced:
            return CompositeReduced{std::move(it)};
        case detail::CompositeInternal::Kind::Witness: {
            Hyperplane plane = bisector_hyperplane(Vector::Zero(s.dim()), r.coords);
            return CompositeWitness{WitnessCertificate{std::move(it), std::move(plane)}};
        }
        default:
            return CompositeLimit{std::move(it)};
    }
}

namespace detail {

struct EngineResult {
    enum class Kind { Inside, Witness, Limit };
    Kind kind = Kind::Limit;
    Iterate iterate;        // frame of the engine run
    double residual = 0.0;  // distance to the query in that frame
    long iterations = 0;
    std::optional<IterationTrace> trace;
};

/// The shared iteration loop. Runs in whatever frame the caller set up:
/// vanilla TA passes the raw points and query, the spherical solver
/// passes unit points and the origin. `eps_abs` is the absolute
/// termination distance (eps * R), `r_norm` the trace normalization.
///
/// When `scales` is given (spherical runs), the loop also tracks
/// Z = sum alpha_i / s_i, because the recovered raw-frame combination
/// sits exactly dist/Z from the original query. Stopping as soon as
/// dist/Z <= eps_raw_abs delivers the identical approximation contract,
/// at most as late as the plain dist <= eps_abs rule.
template <class Points>
EngineResult run_engine(const Points& s, const Vector& p, double eps_abs, double r_norm,
                        Index start, const std::optional<Iterate>& warm,
                        const SolverConfig& cfg, bool spherical,
                        const Vector* scales = nullptr, double eps_raw_abs = 0.0) {
    const Index n = s.size();
    Vector w = Vector::Zero(n);
    double mult = 1.0;
    Vector coords;
    if (warm && !warm->coeffs.empty()) {
        for (const auto& [i, wt] : warm->coeffs) w[i] += wt;
        const double sum = w.sum();
        if (sum <= 0.0) throw std::invalid_argument("warm start: weights do not form a simplex point");
        w /= sum;
        coords = s.points() * w;
    } else {
        w[start] = 1.0;
        coords = s.col(start);
    }
    double z_inv = 0.0;  // sum of coeff_i / scale_i, tracked for spherical runs
    if (scales) {
        for (Index i = 0; i < n; ++i)
            if (w[i] != 0.0) z_inv += w[i] / (*scales)[i];
    }
    const auto raw_done = [&](double d) {
        return scales && z_inv > 0.0 && d <= eps_raw_abs * z_inv;
    };

    const auto materialize = [&]() {
        Vector dense = mult * w;
        return Iterate{coords, sparse_from_dense(dense)};
    };

    const long max_it = cfg.max_iterations > 0 ? cfg.max_iterations : default_max_iterations(cfg.epsilon);
    IterationTrace tr;
    const bool tracing = cfg.record_trace;

    double dist = (coords - p).norm();
    if (tracing) tr.deltas.push_back(dist / r_norm);

    const auto finish = [&](EngineResult::Kind kind, long iters) {
        EngineResult res{kind, materialize(), dist, iters, std::nullopt};
        if (tracing) res.trace = std::move(tr);
        return res;
    };
    const auto record_step = [&](Index piv, bool eps_flag) {
        if (!tracing) return;
        tr.deltas.push_back(dist / r_norm);
        tr.pivot_indices.push_back(piv);
        tr.eps_property_flags.push_back(eps_flag ? 1 : 0);
    };

    long k = 0;
    Vector c(s.dim());
    // After a capped-out restart, stay on plain steps until the fast
    // pivot test passes again.
    bool composite_blocked = false;
    for (;;) {
        if (dist <= eps_abs || raw_done(dist)) return finish(EngineResult::Kind::Inside, k);
        if (k >= max_it) return finish(EngineResult::Kind::Limit, k);

        c = coords - p;
        const double c2 = c.squaredNorm();
        const auto scan = directional_scan(s, c, p);

        Index piv = -1;
        bool eps_flag = false;
        const bool fast = spherical && cfg.enable_eps_property && c2 <= cfg.epsilon;

        if (scan.min_value > 0.5 * c2) {
            // No pivot at all. Certify and stop, or (numerically marginal
            // disagreement between the dot and distance forms) try one
            // more projection step.
            if (verify_witness(p, coords, s)) return finish(EngineResult::Kind::Witness, k);
            piv = scan.argmin;
        } else if (fast) {
            if (scan.min_value <= 0.5 * (c2 - cfg.epsilon)) {
                piv = scan.argmin;  // farthest qualifying pivot
                eps_flag = true;
                composite_blocked = false;
            } else if (!composite_blocked) {
                // eps-property failed here: spend a composite restart,
                // seeded with the pivot the scan just produced.
                Vector dense = mult * w;
                const Index seed_pivot = scan.min_value <= 0.5 * c2 ? scan.argmin : Index(-1);
                const auto comp = composite_engine(coords, dense, s, cfg.epsilon, cfg, seed_pivot);
                if (comp.kind == CompositeInternal::Kind::Reduced) {
                    coords = comp.coords;
                    w = comp.dense_coeffs;
                    mult = 1.0;
                    if (scales) z_inv = (w.array() / scales->head(n).array()).sum();
                    ++k;
                    dist = (coords - p).norm();
                    record_step(-1, false);
                    continue;
                }
                if (comp.kind == CompositeInternal::Kind::Witness &&
                    verify_witness(p, comp.coords, s)) {
                    coords = comp.coords;
                    w = comp.dense_coeffs;
                    mult = 1.0;
                    dist = (coords - p).norm();
                    return finish(EngineResult::Kind::Witness, k + 1);
                }
                composite_blocked = true;
                piv = scan.argmin;  // budget ran out: take the plain step
            } else {
                piv = scan.argmin;
            }
        } else if (cfg.pivot_rule == SolverConfig::PivotRule::FirstFound && scan.first_nonpos >= 0) {
            piv = scan.first_nonpos;
        } else {
            piv = scan.argmin;
        }

        auto [q, alpha] = nearest_on_segment(p, coords, s.col(piv));
        const double new_dist = (q - p).norm();
        // Exact arithmetic guarantees strict progress on every accepted
        // step; when floating point stops delivering it, stop honestly.
        if (alpha <= 0.0 || !(new_dist < dist)) return finish(EngineResult::Kind::Limit, k);
        if (alpha >= 1.0) {
            w.setZero();
            mult = 1.0;
            w[piv] = 1.0;
            if (scales) z_inv = 1.0 / (*scales)[piv];
        } else {
            mult *= (1.0 - alpha);
            if (mult < 1e-250) {
                w *= mult;
                mult = 1.0;
            }
            w[piv] += alpha / mult;
            if (scales) z_inv = (1.0 - alpha) * z_inv + alpha / (*scales)[piv];
        }
        coords = std::move(q);
        dist = new_dist;
        ++k;
        if (cfg.reproject_every > 0 && k % cfg.reproject_every == 0) {
            coords = mult * (s.points() * w);
            dist = (coords - p).norm();
        }
        record_step(piv, eps_flag);
    }
}

}  // namespace detail

/// Vanilla Triangle Algorithm on the points as given, starting from the
/// point of S closest to the query.
inline ChmOutcome solve_ta(const PointSet& s, const Vector& p, const SolverConfig& cfg,
                           const std::optional<Iterate>& warm_start = std::nullopt) {
    validate(cfg);
    if (s.dim() != p.size()) throw std::invalid_argument("solve_ta: dimension mismatch");
    const double big_r = s.max_dist(p);
    if (big_r == 0.0) {
        // Every point coincides with the query.
        return ChmOutcome{InsideApprox{Iterate::from_vertex(s, 0), 0.0}, 0, std::nullopt};
    }

    Index start = 0;
    (s.points().colwise() - p).colwise().squaredNorm().minCoeff(&start);

    auto r = detail::run_engine(s, p, cfg.epsilon * big_r, big_r, start, warm_start, cfg, false);
    ChmOutcome out;
    out.iterations = r.iterations;
    out.trace = std::move(r.trace);
    switch (r.kind) {
        case detail::EngineResult::Kind::Inside:
            out.result = InsideApprox{std::move(r.iterate), r.residual};
            break;
        case detail::EngineResult::Kind::Witness: {
            Hyperplane plane = bisector_hyperplane(p, r.iterate.coords);
            out.result = WitnessResult{WitnessCertificate{std::move(r.iterate), plane}, plane};
            break;
        }
        default:
            out.result = IterationLimit{std::move(r.iterate), r.residual};
    }
    return out;
}

/// Spherical Triangle Algorithm: converts to the spherical instance,
/// iterates there, and converts the answer back. The InsideApprox /
/// IterationLimit iterates are over the raw points; a witness certificate
/// keeps the spherical-frame witness plus the recovered raw-frame plane.
inline ChmOutcome solve_spherical_ta(const PointSet& raw, const Vector& p_raw,
                                     const SolverConfig& cfg,
                                     const std::optional<Iterate>& warm_start_raw = std::nullopt) {
    validate(cfg);
    auto conv = to_spherical(raw, p_raw);
    if (std::holds_alternative<ImmediateMember>(conv)) {
        const Index i = std::get<ImmediateMember>(conv).index;
        Iterate it = Iterate::from_vertex(raw, i);
        const double residual = (raw.col(i) - p_raw).norm();
        return ChmOutcome{InsideApprox{std::move(it), residual}, 0, std::nullopt};
    }
    const auto& inst = std::get<SphericalInstance>(conv);

    std::optional<Iterate> warm;
    if (warm_start_raw && !warm_start_raw->coeffs.empty()) {
        // Raw simplex weights lambda map to spherical weights
        // alpha_i ~ lambda_i * scale_i (the inverse of the recovery map).
        Iterate sw;
        double z = 0.0;
        for (const auto& [i, wt] : warm_start_raw->coeffs) z += wt * inst.scales[i];
        if (z > 0.0) {
            for (const auto& [i, wt] : warm_start_raw->coeffs)
                sw.coeffs.emplace_back(i, wt * inst.scales[i] / z);
            sw.coords = sw.combination(inst.unit_points);
            warm = std::move(sw);
        }
    }

    // Every unit point has gap 1, so the start is free; the point whose
    // raw original lies closest to the query points at the nearest part
    // of the hull, which pays off most on outside queries.
    Index start = 0;
    inst.scales.minCoeff(&start);
    auto r = detail::run_engine(inst.unit_points, Vector::Zero(raw.dim()), cfg.epsilon, 1.0,
                                start, warm, cfg, true);
    ChmOutcome out;
    out.iterations = r.iterations;
    out.trace = std::move(r.trace);
    switch (r.kind) {
        case detail::EngineResult::Kind::Inside: {
            Iterate rawit = recover_solution(r.iterate.coeffs, inst, raw);
            const double residual = (rawit.coords - p_raw).norm();
            out.result = InsideApprox{std::move(rawit), residual};
            break;
        }
        case detail::EngineResult::Kind::Witness: {
            Hyperplane raw_plane = recover_witness(r.iterate.coords, inst);
            Hyperplane sph_plane = spherical_frame_plane(r.iterate.coords);
            out.result =
                WitnessResult{WitnessCertificate{std::move(r.iterate), std::move(sph_plane)},
                              std::move(raw_plane)};
            break;
        }
        default: {
            Iterate rawit = recover_solution(r.iterate.coeffs, inst, raw);
            const double residual = (rawit.coords - p_raw).norm();
            out.result = IterationLimit{std::move(rawit), residual};
        }
    }
    return out;
}

}  // namespace sphta
