#pragma once

#include <chrono>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sphta/generators.hpp"
#include "sphta/lp_feasibility.hpp"
#include "sphta/mvee.hpp"
#include "sphta/solver.hpp"
#include "sphta/vertex_enumeration.hpp"

namespace sphta {

struct BenchRecord {
    std::string suite;
    std::string feasibility;  // feasible | infeasible | n/a
    double epsilon = 0.0;
    Index rows = 0;  // ambient dimension m
    Index cols = 0;  // point / column count n
    std::string algorithm;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
    long iterations = 0;
    std::string verdict;  // feasible | infeasible | limit
};

inline std::string bench_csv_header() {
    return "suite,feasibility,epsilon,rows,cols,algorithm,seed,wall_ms,iterations,verdict";
}

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    out << bench_csv_header() << "\n";
    char buf[64];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%.17g", r.epsilon);
        out << r.suite << "," << r.feasibility << "," << buf << "," << r.rows << "," << r.cols
            << "," << r.algorithm << "," << r.seed << ",";
        std::snprintf(buf, sizeof buf, "%.17g", r.wall_ms);
        out << buf << "," << r.iterations << "," << r.verdict << "\n";
    }
}

inline std::vector<BenchRecord> parse_bench_csv(std::istream& in) {
    std::vector<BenchRecord> out;
    std::string line;
    if (!std::getline(in, line) || line != bench_csv_header())
        throw std::invalid_argument("parse_bench_csv: missing or unexpected header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 10) throw std::invalid_argument("parse_bench_csv: bad row");
        BenchRecord r;
        r.suite = cells[0];
        r.feasibility = cells[1];
        r.epsilon = std::stod(cells[2]);
        r.rows = std::stol(cells[3]);
        r.cols = std::stol(cells[4]);
        r.algorithm = cells[5];
        r.seed = std::stoull(cells[6]);
        r.wall_ms = std::stod(cells[7]);
        r.iterations = std::stol(cells[8]);
        r.verdict = cells[9];
        out.push_back(std::move(r));
    }
    return out;
}

namespace detail {

inline double ms_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

inline std::string chm_verdict(const ChmOutcome& out) {
    if (out.inside()) return "feasible";
    if (out.witness()) return "infeasible";
    return "limit";
}

}  // namespace detail

struct BenchSizes {
    Index m = 0, n = 0;
};

/// Runs one benchmark suite over the size/epsilon/seed grid and returns
/// the flat record table. Suites:
///   chm-gaussian, chm-sphere        — membership, Spherical-TA vs TA
///   lpfeas-uniform, lpfeas-sphere   — the bounded equality reduction
///   strictlp-uniform, strictlp-sphere
///   irredundancy-sphere, irredundancy-gaussian — AVTA+ vs AVTA
///   mvee                            — pipeline vs full-set ellipsoid
inline std::vector<BenchRecord> run_benchmark(const std::string& suite,
                                              const std::vector<BenchSizes>& sizes,
                                              const std::vector<double>& epsilons,
                                              const std::vector<std::uint64_t>& seeds) {
    std::vector<BenchRecord> records;
    const auto push = [&](const std::string& feas, double eps, BenchSizes sz,
                          const std::string& algo, std::uint64_t seed, double ms, long iters,
                          const std::string& verdict) {
        records.push_back(BenchRecord{suite, feas, eps, sz.m, sz.n, algo, seed, ms, iters, verdict});
    };

    const bool gaussian = suite.find("gaussian") != std::string::npos;
    const GenSpec::Kind kind = suite.find("uniform") != std::string::npos
                                   ? GenSpec::Kind::UniformMatrix
                                   : (gaussian ? GenSpec::Kind::GaussianVertices
                                               : GenSpec::Kind::SphereVertices);

    for (const auto sz : sizes) {
        for (const double eps : epsilons) {
            for (const auto seed : seeds) {
                SolverConfig cfg;
                cfg.epsilon = eps;

                if (suite.rfind("chm-", 0) == 0) {
                    for (const bool feasible : {true, false}) {
                        GenSpec spec{kind, sz.m, sz.n, sz.n, 0.0, feasible, seed};
                        const ChmInstance inst = gen_chm_instance(spec);
                        auto t0 = std::chrono::steady_clock::now();
                        const ChmOutcome sph = solve_spherical_ta(inst.points, inst.query, cfg);
                        const double t_sph = detail::ms_since(t0);
                        t0 = std::chrono::steady_clock::now();
                        const ChmOutcome ta = solve_ta(inst.points, inst.query, cfg);
                        const double t_ta = detail::ms_since(t0);
                        const std::string feas = feasible ? "feasible" : "infeasible";
                        push(feas, eps, sz, "spherical-ta", seed, t_sph, sph.iterations,
                             detail::chm_verdict(sph));
                        push(feas, eps, sz, "ta", seed, t_ta, ta.iterations,
                             detail::chm_verdict(ta));
                    }
                } else if (suite.rfind("lpfeas", 0) == 0) {
                    for (const bool feasible : {true, false}) {
                        GenSpec spec{kind, sz.m, sz.n, sz.n, 0.0, feasible, seed};
                        const LpFeasGen gen = gen_lp_instance(spec);
                        const PointSet cols = build_lpfeas_columns(gen.inst);
                        const Vector origin = Vector::Zero(sz.m + 1);
                        auto t0 = std::chrono::steady_clock::now();
                        const ChmOutcome sph = solve_spherical_ta(cols, origin, cfg);
                        const double t_sph = detail::ms_since(t0);
                        t0 = std::chrono::steady_clock::now();
                        const ChmOutcome ta = solve_ta(cols, origin, cfg);
                        const double t_ta = detail::ms_since(t0);
                        const std::string feas = feasible ? "feasible" : "infeasible";
                        push(feas, eps, sz, "spherical-ta", seed, t_sph, sph.iterations,
                             detail::chm_verdict(sph));
                        push(feas, eps, sz, "ta", seed, t_ta, ta.iterations,
                             detail::chm_verdict(ta));
                    }
                } else if (suite.rfind("strictlp", 0) == 0) {
                    for (const bool feasible : {true, false}) {
                        // Strict systems use n constraints over m unknowns.
                        GenSpec spec{kind, sz.m, sz.n, sz.n, 0.0, feasible, seed};
                        const StrictLpGen gen = gen_strict_lp_instance(spec);
                        const PointSet cols = build_gordan_columns(gen.inst);
                        const Vector origin = Vector::Zero(sz.m + 1);
                        auto t0 = std::chrono::steady_clock::now();
                        const ChmOutcome sph = solve_spherical_ta(cols, origin, cfg);
                        const double t_sph = detail::ms_since(t0);
                        t0 = std::chrono::steady_clock::now();
                        const ChmOutcome ta = solve_ta(cols, origin, cfg);
                        const double t_ta = detail::ms_since(t0);
                        const std::string feas = feasible ? "feasible" : "infeasible";
                        // Verdict names track the membership instance: inside
                        // means the strict system is infeasible.
                        push(feas, eps, sz, "spherical-ta", seed, t_sph, sph.iterations,
                             detail::chm_verdict(sph));
                        push(feas, eps, sz, "ta", seed, t_ta, ta.iterations,
                             detail::chm_verdict(ta));
                    }
                } else if (suite.rfind("irredundancy", 0) == 0) {
                    // 50% redundancy, the hardest column of the tables; the
                    // epsilon axis carries gamma for this suite.
                    const Index k = std::max<Index>(1, sz.n / 2);
                    GenSpec spec{kind, sz.m, sz.n, k, 0.5, true, seed};
                    const ChmInstance inst = gen_chm_instance(spec);
                    AvtaConfig acfg;
                    acfg.gamma = eps;
                    acfg.seed = seed;
                    auto t0 = std::chrono::steady_clock::now();
                    const VertexReport plus = avta_plus(inst.points, acfg);
                    const double t_plus = detail::ms_since(t0);
                    t0 = std::chrono::steady_clock::now();
                    const VertexReport plain = avta(inst.points, acfg);
                    const double t_plain = detail::ms_since(t0);
                    push("n/a", eps, sz, "avta-plus", seed, t_plus, plus.queries, "feasible");
                    push("n/a", eps, sz, "avta", seed, t_plain, plain.queries, "feasible");
                } else if (suite == "mvee") {
                    const Index k = std::max<Index>(sz.m + 1, sz.n / 10);
                    GenSpec spec{kind, sz.m, sz.n, k, 0.0, true, seed};
                    const ChmInstance inst = gen_chm_instance(spec);
                    AvtaConfig acfg;
                    acfg.seed = seed;
                    acfg.gamma = 0.05;
                    auto t0 = std::chrono::steady_clock::now();
                    const Ellipsoid pipe = avta_plus_mvee(inst.points, acfg, eps);
                    const double t_pipe = detail::ms_since(t0);
                    t0 = std::chrono::steady_clock::now();
                    const Ellipsoid full = mvee(inst.points, eps);
                    const double t_full = detail::ms_since(t0);
                    (void)pipe;
                    (void)full;
                    push("n/a", eps, sz, "avta-plus-mvee", seed, t_pipe, 0, "feasible");
                    push("n/a", eps, sz, "mvee", seed, t_full, 0, "feasible");
                } else {
                    throw std::invalid_argument("run_benchmark: unknown suite " + suite);
                }
            }
        }
    }
    return records;
}

}  // namespace sphta
