// Acceptance suite: end-to-end checks of the solver family's contracts,
// one criterion per function, each printing a single PASS/FAIL line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sphta/exact_oracle.hpp"
#include "sphta/generators.hpp"
#include "sphta/lp_feasibility.hpp"
#include "sphta/mvee.hpp"
#include "sphta/solver.hpp"
#include "sphta/vertex_enumeration.hpp"

using namespace sphta;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(const Clock::time_point& t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass;
    std::string detail;
};

Vector random_unit(std::mt19937_64& rng, Index m) {
    std::normal_distribution<double> g;
    for (;;) {
        Vector v(m);
        for (Index i = 0; i < m; ++i) v[i] = g(rng);
        const double len = v.norm();
        if (len > 1e-12) return v / len;
    }
}

/// Unit points whose hull contains the ball of radius 1/m around the
/// origin: a randomly rotated regular simplex plus random sphere points.
PointSet simplex_ball_instance(Index m, Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Matrix a(m, m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j) a(i, j) = g(rng);
    const Matrix rot = Eigen::HouseholderQR<Matrix>(a).householderQ();

    Matrix pts(m, n);
    const Vector centroid = Vector::Constant(m, 1.0 / static_cast<double>(m));
    // Simplex over the coordinate directions, centered and normalized.
    for (Index i = 0; i < m; ++i) {
        Vector v = -centroid;
        v[i] += 1.0;
        pts.col(i) = rot * (v / v.norm());
    }
    {
        Vector v = -centroid / centroid.norm();
        pts.col(m) = rot * v;
    }
    for (Index j = m + 1; j < n; ++j) pts.col(j) = random_unit(rng, m);
    return PointSet(pts);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double loglog_slope(const std::vector<double>& inv_eps, const std::vector<double>& iters) {
    const size_t n = inv_eps.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double x = std::log(inv_eps[i]), y = std::log(iters[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------- 1
Outcome criterion_worst_case_envelope() {
    const auto t0 = Clock::now();
    // The closed form must satisfy the squared-gap recurrence step by step.
    for (long k = 0; k < 1000000; ++k) {
        const double fk = worst_case_delta_bound(k) * worst_case_delta_bound(k);
        const double fk1 = worst_case_delta_bound(k + 1) * worst_case_delta_bound(k + 1);
        const double rec = fk / (1.0 + fk);
        if (std::abs(fk1 - rec) > 1e-12 * fk1)
            return {false, "recurrence breaks at k=" + std::to_string(k)};
    }

    long checked_steps = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        GenSpec spec;
        spec.kind = GenSpec::Kind::SphereVertices;
        spec.m = 20;
        spec.n = 100;
        spec.k_vertices = 100;
        spec.feasible = true;
        spec.seed = 100 + seed;
        const ChmInstance inst = gen_chm_instance(spec);
        SolverConfig cfg;
        cfg.epsilon = 0.01;
        cfg.record_trace = true;
        const ChmOutcome out = solve_spherical_ta(inst.points, inst.query, cfg);
        if (!out.inside() || !out.trace) return {false, "feasible solve did not finish inside"};
        const auto& d = out.trace->deltas;
        for (size_t k = 0; k < d.size(); ++k) {
            if (d[k] > worst_case_delta_bound(static_cast<long>(k)) + 1e-12)
                return {false, "trace above the envelope at step " + std::to_string(k)};
            ++checked_steps;
        }
    }
    const double secs = seconds_since(t0);
    if (secs >= 30.0) return {false, "exceeded the 30 s budget"};
    char buf[160];
    std::snprintf(buf, sizeof buf, "recurrence to 1e6 and %ld trace steps bounded, %.1fs",
                  checked_steps, secs);
    return {true, buf};
}

// ---------------------------------------------------------------- 2 (+4)
struct SmallInstances {
    std::vector<ChmInstance> feasible;
    std::vector<ChmInstance> infeasible;
};

SmallInstances make_small_instances(double eps) {
    SmallInstances out;
    std::uint64_t seed = 0;
    while (out.feasible.size() < 100 || out.infeasible.size() < 100) {
        ++seed;
        GenSpec spec;
        spec.kind = (seed % 2) ? GenSpec::Kind::GaussianVertices : GenSpec::Kind::SphereVertices;
        spec.m = 2 + static_cast<Index>(seed % 5);         // 2..6
        spec.n = 3 + static_cast<Index>((seed / 5) % 10);  // 3..12
        spec.k_vertices = spec.n;
        spec.seed = 10000 + seed;
        spec.feasible = out.feasible.size() < 100;
        ChmInstance inst = gen_chm_instance(spec);
        if (spec.feasible) {
            if (!exact::simplex_membership(inst.points, inst.query)) continue;
            out.feasible.push_back(std::move(inst));
        } else {
            const double big_r = inst.points.max_dist(inst.query);
            if (!certify_separation_margin(inst.points, inst.query, inst.margin_normal,
                                           4.0 * eps * big_r))
                continue;
            if (exact::simplex_membership(inst.points, inst.query)) continue;
            out.infeasible.push_back(std::move(inst));
        }
    }
    return out;
}

Outcome criterion_oracle_equivalence() {
    const auto t0 = Clock::now();
    const double eps = 1e-3;
    const SmallInstances all = make_small_instances(eps);
    SolverConfig cfg;
    cfg.epsilon = eps;
    int ok = 0, total = 0;
    for (const bool feasible : {true, false}) {
        for (const auto& inst : (feasible ? all.feasible : all.infeasible)) {
            ++total;
            const ChmOutcome sph = solve_spherical_ta(inst.points, inst.query, cfg);
            const ChmOutcome ta = solve_ta(inst.points, inst.query, cfg);
            const bool match = feasible ? (sph.inside() && ta.inside())
                                        : (sph.witness() && ta.witness());
            ok += match;
        }
    }
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%d verdicts match the exact oracle, %.1fs", ok, total,
                  secs);
    return {ok == total && secs < 60.0, buf};
}

// ---------------------------------------------------------------- 3
Outcome criterion_certificate_validity() {
    int ok = 0, total = 0;
    SolverConfig cfg;
    cfg.epsilon = 1e-3;
    for (std::uint64_t seed = 0; total < 100; ++seed) {
        GenSpec spec;
        spec.kind = (seed % 2) ? GenSpec::Kind::GaussianVertices : GenSpec::Kind::SphereVertices;
        spec.m = 2 + static_cast<Index>(seed % 7);         // 2..8
        spec.n = 4 + static_cast<Index>((seed / 7) % 13);  // 4..16
        spec.k_vertices = spec.n;
        spec.feasible = false;
        spec.seed = 30000 + seed;
        const ChmInstance inst = gen_chm_instance(spec);
        ++total;
        const ChmOutcome out = solve_spherical_ta(inst.points, inst.query, cfg);
        if (!out.witness()) continue;
        const auto& w = out.as_witness();

        const auto conv = to_spherical(inst.points, inst.query);
        const auto& sph = std::get<SphericalInstance>(conv);
        const bool eq3 = verify_witness(Vector::Zero(inst.points.dim()), w.cert.witness.coords,
                                        sph.unit_points, 0.0);
        const bool separates =
            strictly_separates(w.raw_plane, inst.query, inst.points, 1e-12);
        ok += (eq3 && separates);
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d/%d witnesses verified with raw-frame separation", ok,
                  total);
    return {ok == total, buf};
}

// ---------------------------------------------------------------- 4
Outcome criterion_approximation_contract() {
    const double eps = 1e-3;
    const SmallInstances all = make_small_instances(eps);
    SolverConfig cfg;
    cfg.epsilon = eps;
    int ok = 0, total = 0;
    for (const auto& inst : all.feasible) {
        for (const bool spherical : {true, false}) {
            ++total;
            const ChmOutcome out = spherical ? solve_spherical_ta(inst.points, inst.query, cfg)
                                             : solve_ta(inst.points, inst.query, cfg);
            if (!out.inside()) continue;
            const auto& in = out.as_inside();
            const double big_r = inst.points.max_dist(inst.query);
            const bool res_ok = in.residual <= eps * big_r + 1e-9;
            const bool dense_ok =
                (in.iterate.combination(inst.points) - inst.query).norm() <= eps * big_r + 1e-9;
            const bool simplex_ok = in.iterate.valid(inst.points);
            ok += (res_ok && dense_ok && simplex_ok);
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d/%d approximate solutions within eps*R with simplex weights",
                  ok, total);
    return {ok == total, buf};
}

// ---------------------------------------------------------------- 5
Outcome criterion_iteration_scaling() {
    const auto t0 = Clock::now();
    const std::vector<double> epsilons{0.02, 0.01, 0.005, 0.0025};
    std::mt19937_64 rng(2024);

    std::vector<double> inv_eps, ball_medians, generic_medians;
    for (const double eps : epsilons) {
        std::vector<double> ball_iters, generic_iters;
        for (int s = 0; s < 10; ++s) {
            SolverConfig cfg;
            cfg.epsilon = eps;
            cfg.enable_eps_property = true;

            const PointSet ball = simplex_ball_instance(6, 100, rng);
            const ChmOutcome bout = solve_spherical_ta(ball, Vector::Zero(6), cfg);
            if (!bout.inside()) return {false, "ball instance did not finish inside"};
            ball_iters.push_back(static_cast<double>(std::max<long>(1, bout.iterations)));

            Matrix gen(10, 100);
            for (Index j = 0; j < 100; ++j) gen.col(j) = random_unit(rng, 10);
            const ChmOutcome gout = solve_spherical_ta(PointSet(gen), Vector::Zero(10), cfg);
            if (!gout.inside()) return {false, "generic instance did not finish inside"};
            generic_iters.push_back(static_cast<double>(std::max<long>(1, gout.iterations)));
        }
        inv_eps.push_back(1.0 / eps);
        ball_medians.push_back(median(ball_iters));
        generic_medians.push_back(median(generic_iters));
    }
    const double ball_slope = loglog_slope(inv_eps, ball_medians);
    const double generic_slope = loglog_slope(inv_eps, generic_medians);
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "ball slope %.2f (<= 1.3), generic slope %.2f (<= 2.2), %.1fs",
                  ball_slope, generic_slope, secs);
    return {ball_slope <= 1.3 && generic_slope <= 2.2 && secs < 300.0, buf};
}

// ---------------------------------------------------------------- 6
Outcome criterion_spherical_beats_vanilla() {
    SolverConfig sph_cfg;
    sph_cfg.epsilon = 0.01;
    sph_cfg.enable_eps_property = true;  // the spherical solver's own fast path
    SolverConfig ta_cfg;
    ta_cfg.epsilon = 0.01;

    std::vector<double> t_sph, t_ta;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        GenSpec spec;
        spec.kind = GenSpec::Kind::GaussianVertices;
        spec.m = 100;
        spec.n = 500;
        spec.k_vertices = 500;
        spec.feasible = true;
        spec.seed = seed;
        const ChmInstance inst = gen_chm_instance(spec);
        // A feasible query supported on a few points: convergence is
        // iteration-dominated, the regime the timing tables live in.
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Vector w = Vector::Zero(spec.n);
        for (int t = 0; t < 10; ++t) w[static_cast<Index>(rng() % spec.n)] += u(rng) + 1e-3;
        w /= w.sum();
        const Vector query = inst.points.points() * w;

        auto t0 = Clock::now();
        const ChmOutcome a = solve_spherical_ta(inst.points, query, sph_cfg);
        t_sph.push_back(seconds_since(t0));
        t0 = Clock::now();
        const ChmOutcome b = solve_ta(inst.points, query, ta_cfg);
        t_ta.push_back(seconds_since(t0));
        if (!a.inside() || !b.inside()) return {false, "a feasible solve failed to finish"};
    }
    const double ms = median(t_sph) * 1e3, mt = median(t_ta) * 1e3;
    char buf[128];
    std::snprintf(buf, sizeof buf, "median wall: spherical %.1f ms <= vanilla %.1f ms", ms, mt);
    return {ms <= mt, buf};
}

// ---------------------------------------------------------------- 7
Outcome criterion_strict_lp_recovery() {
    SolverConfig cfg;
    cfg.epsilon = 0.01;
    int feas_ok = 0, infeas_ok = 0;
    for (int i = 0; i < 50; ++i) {
        GenSpec spec;
        spec.kind = (i % 2) ? GenSpec::Kind::SphereVertices : GenSpec::Kind::UniformMatrix;
        spec.m = 10 + (i % 3) * 20;  // 10, 30, 50 unknowns
        spec.n = 2 * spec.m;         // up to 100 constraints
        spec.k_vertices = 1;
        spec.feasible = true;
        spec.seed = 50000 + static_cast<std::uint64_t>(i);
        const StrictLpGen gen = gen_strict_lp_instance(spec);
        try {
            const StrictLpResult r = solve_strict_lp(gen.inst, cfg);
            if (!r.feasible()) continue;
            const Vector& x = r.as_feasible().x;
            bool strict = true;
            for (Index row = 0; row < gen.inst.a.rows(); ++row)
                strict = strict && (gen.inst.a.row(row).dot(x) < gen.inst.b[row]);
            feas_ok += strict;
        } catch (const std::exception&) {
        }
    }
    for (int i = 0; i < 50; ++i) {
        const StrictLpGen gen = gen_strict_lp_infeasible_certified(
            24 + (i % 3) * 8, 12 + (i % 3) * 4, 60000 + static_cast<std::uint64_t>(i));
        try {
            const StrictLpResult r = solve_strict_lp(gen.inst, cfg);
            if (r.feasible()) continue;
            infeas_ok += (r.as_infeasible().residual <= cfg.epsilon);
        } catch (const std::exception&) {
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "strictly feasible %d/50, certified infeasible %d/50", feas_ok,
                  infeas_ok);
    return {feas_ok == 50 && infeas_ok == 50, buf};
}

// ---------------------------------------------------------------- 8
Outcome criterion_lp_feasibility_recovery() {
    SolverConfig cfg;
    cfg.epsilon = 1e-4;
    const double bound_m = 1000.0;
    int feas_ok = 0, infeas_ok = 0;
    for (int i = 0; i < 50; ++i) {
        GenSpec spec;
        spec.kind = GenSpec::Kind::UniformMatrix;
        spec.m = 5 + (i % 3);
        spec.n = 12 + (i % 4);
        spec.k_vertices = 1;
        spec.feasible = true;
        spec.seed = 70000 + static_cast<std::uint64_t>(i);
        const LpFeasGen gen = gen_lp_instance(spec, bound_m);
        try {
            const LpFeasResult r = solve_lp_feasibility(gen.inst, cfg);
            if (!r.feasible()) continue;
            const auto& f = r.as_feasible();
            const double r_cols = build_lpfeas_columns(gen.inst).norms().maxCoeff();
            const bool x_ok = f.x.minCoeff() >= -1e-9;
            const bool res_ok = f.residual <= cfg.epsilon * r_cols * (1.0 + bound_m) / f.gamma;
            feas_ok += (x_ok && res_ok);
        } catch (const std::exception&) {
        }
    }
    for (int i = 0; i < 50; ++i) {
        const LpFeasGen gen =
            gen_lp_infeasible_certified(5 + (i % 3), 12 + (i % 4),
                                        80000 + static_cast<std::uint64_t>(i), bound_m);
        try {
            const LpFeasResult r = solve_lp_feasibility(gen.inst, cfg);
            infeas_ok += !r.feasible();
        } catch (const std::exception&) {
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "feasible recovered %d/50, infeasible certified %d/50",
                  feas_ok, infeas_ok);
    return {feas_ok == 50 && infeas_ok == 50, buf};
}

// ---------------------------------------------------------------- 9
double certified_gamma(const PointSet& pts, Index k_vertices) {
    // A positive lower bound on the distance from each generated vertex
    // to the hull of the others, via witness-plane margins.
    SolverConfig cfg;
    cfg.epsilon = 0.05;
    double least = -1.0;
    for (Index i = 0; i < k_vertices; ++i) {
        std::vector<Index> others;
        for (Index j = 0; j < pts.size(); ++j)
            if (j != i) others.push_back(j);
        const PointSet rest = pts.subset(others);
        const ChmOutcome out = solve_spherical_ta(rest, Vector(pts.col(i)), cfg);
        if (!out.witness()) return -1.0;
        const auto& plane = out.as_witness().raw_plane;
        const double margin = -plane.side(pts.col(i)) / plane.normal.norm();
        if (margin <= 0.0) return -1.0;
        least = least < 0.0 ? margin : std::min(least, margin);
    }
    return 0.5 * least;
}

Outcome criterion_vertex_recovery() {
    int ok = 0, total = 0;
    for (const Index m : {Index(5), Index(10)}) {
        for (const double redundancy : {0.0, 0.2, 0.5}) {
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const Index k = 20;
                const Index n = static_cast<Index>(std::lround(k / (1.0 - redundancy)));
                GenSpec spec;
                spec.kind = GenSpec::Kind::SphereVertices;
                spec.m = m;
                spec.n = n;
                spec.k_vertices = k;
                spec.feasible = true;
                spec.seed = 90000 + seed * 131 + static_cast<std::uint64_t>(m) * 7 +
                            static_cast<std::uint64_t>(redundancy * 10);
                const ChmInstance inst = gen_chm_instance(spec);
                const double gamma = certified_gamma(inst.points, k);
                ++total;
                if (gamma <= 0.0) continue;

                AvtaConfig cfg;
                cfg.gamma = gamma;
                cfg.seed = seed;
                std::set<Index> truth;
                for (Index i = 0; i < k; ++i) truth.insert(i);
                const VertexReport plain = avta(inst.points, cfg);
                const VertexReport plus = avta_plus(inst.points, cfg);
                const std::set<Index> sp(plain.vertex_indices.begin(), plain.vertex_indices.end());
                const std::set<Index> su(plus.vertex_indices.begin(), plus.vertex_indices.end());
                ok += (sp == truth && su == truth);
            }
        }
    }

    // Timing point: heavy redundancy at scale, the faster oracle wins.
    std::vector<double> t_plus, t_plain;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        GenSpec spec;
        spec.kind = GenSpec::Kind::SphereVertices;
        spec.m = 10;
        spec.n = 1000;
        spec.k_vertices = 500;
        spec.feasible = true;
        spec.seed = 95000 + seed;
        const ChmInstance inst = gen_chm_instance(spec);
        AvtaConfig cfg;
        cfg.gamma = 0.05;
        cfg.seed = seed;
        auto t0 = Clock::now();
        (void)avta_plus(inst.points, cfg);
        t_plus.push_back(seconds_since(t0));
        t0 = Clock::now();
        (void)avta(inst.points, cfg);
        t_plain.push_back(seconds_since(t0));
    }
    const double mp = median(t_plus), mq = median(t_plain);
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "exact recovery %d/%d; timing at 10x1000/50%%: plus %.2fs <= plain %.2fs", ok,
                  total, mp, mq);
    return {ok == total && mp <= mq, buf};
}

// ---------------------------------------------------------------- 10
Outcome criterion_mvee_pipeline() {
    GenSpec spec;
    spec.kind = GenSpec::Kind::SphereVertices;
    spec.m = 10;
    spec.n = 5050;
    spec.k_vertices = 50;
    spec.feasible = true;
    spec.seed = 123;
    const ChmInstance inst = gen_chm_instance(spec);
    const double eps = 0.01;

    const double gamma = certified_gamma(PointSet(inst.points.points().leftCols(50)), 50);
    if (gamma <= 0.0) return {false, "could not certify a robustness margin"};
    AvtaConfig cfg;
    cfg.gamma = gamma;
    cfg.seed = 7;

    auto t0 = Clock::now();
    const Ellipsoid pipe = avta_plus_mvee(inst.points, cfg, eps);
    const double t_pipe = seconds_since(t0);
    t0 = Clock::now();
    const Ellipsoid full = mvee(inst.points, eps);
    const double t_full = seconds_since(t0);

    const double factor = (1.0 + eps) * (1.0 + 1e-6);
    bool contained = true;
    for (Index j = 0; j < inst.points.size(); ++j)
        contained = contained && (pipe.quadratic(inst.points.col(j)) <= factor);
    const double rel_frob =
        (pipe.shape_M - full.shape_M).norm() / full.shape_M.norm();
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "containment %s, shape agreement %.3f (<= 0.1), pipeline %.2fs < full %.2fs",
                  contained ? "5050/5050" : "violated", rel_frob, t_pipe, t_full);
    return {contained && rel_frob <= 10.0 * eps && t_pipe < t_full, buf};
}

}  // namespace

int main() {
    struct Entry {
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> criteria{
        {"worst-case envelope", criterion_worst_case_envelope},
        {"oracle equivalence", criterion_oracle_equivalence},
        {"certificate validity", criterion_certificate_validity},
        {"approximation contract", criterion_approximation_contract},
        {"iteration scaling", criterion_iteration_scaling},
        {"spherical beats vanilla", criterion_spherical_beats_vanilla},
        {"strict LP recovery", criterion_strict_lp_recovery},
        {"LP feasibility recovery", criterion_lp_feasibility_recovery},
        {"vertex recovery", criterion_vertex_recovery},
        {"ellipsoid pipeline", criterion_mvee_pipeline},
    };
    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        Outcome out{false, "exception"};
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out.detail = std::string("exception: ") + e.what();
        }
        failures += !out.pass;
        std::printf("[%s] %zu. %s (%s)\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    out.detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}
