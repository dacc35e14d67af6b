#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sphta/bench.hpp"
#include "sphta/generators.hpp"
#include "sphta/io.hpp"
#include "sphta/lp_feasibility.hpp"
#include "sphta/mvee.hpp"
#include "sphta/solver.hpp"
#include "sphta/vertex_enumeration.hpp"

using namespace sphta;

namespace {

double ms_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

void emit(const Json& doc, const std::string& output) {
    if (output.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(output);
        out << doc.dump(2) << "\n";
    }
}

void write_trace_csv(const std::string& path, const IterationTrace& tr) {
    std::ofstream out(path);
    out << "k,delta,pivot_index,eps_property\n";
    for (size_t k = 0; k < tr.deltas.size(); ++k) {
        out << k << "," << tr.deltas[k];
        if (k == 0)
            out << ",,0\n";  // the starting point has no step behind it
        else
            out << "," << tr.pivot_indices[k - 1] << "," << int(tr.eps_property_flags[k - 1])
                << "\n";
    }
}

Vector load_query(const std::string& inline_query, const std::string& query_file) {
    if (!inline_query.empty()) return parse_vector(inline_query);
    std::ifstream in(query_file);
    if (!in) throw std::runtime_error("cannot open " + query_file);
    std::string text, line;
    while (std::getline(in, line)) {
        if (!text.empty()) text += ",";
        text += line;
    }
    return parse_vector(text);
}

std::vector<BenchSizes> parse_sizes(const std::string& text) {
    std::vector<BenchSizes> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto x = item.find('x');
        if (x == std::string::npos) throw std::invalid_argument("sizes look like 100x500");
        out.push_back(BenchSizes{std::stol(item.substr(0, x)), std::stol(item.substr(x + 1))});
    }
    return out;
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if constexpr (std::is_same_v<T, double>)
            out.push_back(std::stod(item));
        else
            out.push_back(static_cast<T>(std::stoull(item)));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Triangle-algorithm toolkit: convex hull membership, LP feasibility "
                 "reductions, vertex enumeration and ellipsoid data reduction"};
    app.require_subcommand(1);

    // chm ------------------------------------------------------------
    auto* chm = app.add_subcommand("chm", "membership query against a point cloud");
    std::string chm_input, chm_query, chm_query_file, chm_trace, chm_output, chm_oracle = "spherical";
    bool chm_header = false, chm_eps_property = false;
    double chm_eps = 1e-2;
    long chm_max_iters = 0;
    chm->add_option("--input", chm_input, "CSV, one point per row")->required();
    chm->add_flag("--header", chm_header, "skip one header line");
    chm->add_option("--query", chm_query, "query point as c1,c2,...");
    chm->add_option("--query-file", chm_query_file, "query point file");
    chm->add_option("--epsilon", chm_eps, "relative precision");
    chm->add_option("--max-iters", chm_max_iters, "iteration cap (0 = default)");
    chm->add_option("--oracle", chm_oracle, "ta | spherical")
        ->check(CLI::IsMember({"ta", "spherical"}));
    chm->add_flag("--eps-property", chm_eps_property, "enable the fast-path strategy");
    chm->add_option("--trace", chm_trace, "write per-iteration trace CSV");
    chm->add_option("--output", chm_output, "result JSON path (default stdout)");

    // lpfeas -----------------------------------------------------------
    auto* lpf = app.add_subcommand("lpfeas", "feasibility of Ax = b, x >= 0 with bound M");
    std::string lpf_input, lpf_b, lpf_b_file, lpf_output;
    bool lpf_header = false;
    double lpf_eps = 1e-4, lpf_m = 1000.0;
    long lpf_max_iters = 0;
    lpf->add_option("--input", lpf_input, "CSV of A (m rows, n columns)")->required();
    lpf->add_flag("--header", lpf_header, "skip one header line");
    lpf->add_option("--b", lpf_b, "right-hand side as c1,c2,...");
    lpf->add_option("--b-file", lpf_b_file, "right-hand side file");
    lpf->add_option("--epsilon", lpf_eps, "relative precision");
    lpf->add_option("--bound-M", lpf_m, "bound on e^T x");
    lpf->add_option("--max-iters", lpf_max_iters, "iteration cap (0 = default)");
    lpf->add_option("--output", lpf_output, "result JSON path (default stdout)");

    // strictlp ---------------------------------------------------------
    auto* slp = app.add_subcommand("strictlp", "feasibility of the strict system Ax < b");
    std::string slp_input, slp_b, slp_b_file, slp_output;
    bool slp_header = false;
    double slp_eps = 1e-2;
    long slp_max_iters = 0;
    slp->add_option("--input", slp_input, "CSV of A (one constraint row per line)")->required();
    slp->add_flag("--header", slp_header, "skip one header line");
    slp->add_option("--b", slp_b, "right-hand side as c1,c2,...");
    slp->add_option("--b-file", slp_b_file, "right-hand side file");
    slp->add_option("--epsilon", slp_eps, "relative precision");
    slp->add_option("--max-iters", slp_max_iters, "iteration cap (0 = default)");
    slp->add_option("--output", slp_output, "result JSON path (default stdout)");

    // vertices -----------------------------------------------------------
    auto* vert = app.add_subcommand("vertices", "enumerate the vertices of the hull");
    std::string vert_input, vert_output, vert_oracle = "spherical";
    bool vert_header = false;
    double vert_gamma = 0.1;
    std::uint64_t vert_seed = 0;
    vert->add_option("--input", vert_input, "CSV, one point per row")->required();
    vert->add_flag("--header", vert_header, "skip one header line");
    vert->add_option("--gamma", vert_gamma, "robustness margin")->required();
    vert->add_option("--oracle", vert_oracle, "ta | spherical")
        ->check(CLI::IsMember({"ta", "spherical"}));
    vert->add_option("--seed", vert_seed, "selection seed");
    vert->add_option("--output", vert_output, "result JSON path (default stdout)");

    // mvee ---------------------------------------------------------------
    auto* mv = app.add_subcommand("mvee", "minimum volume enclosing ellipsoid");
    std::string mv_input, mv_output;
    bool mv_header = false, mv_pre = false;
    double mv_eps = 1e-2, mv_gamma = 0.05;
    std::uint64_t mv_seed = 0;
    mv->add_option("--input", mv_input, "CSV, one point per row")->required();
    mv->add_flag("--header", mv_header, "skip one header line");
    mv->add_option("--eps-mvee", mv_eps, "ellipsoid precision");
    mv->add_flag("--preprocess", mv_pre, "run the vertex-enumeration reduction first");
    mv->add_option("--gamma", mv_gamma, "robustness margin for the reduction");
    mv->add_option("--seed", mv_seed, "selection seed for the reduction");
    mv->add_option("--output", mv_output, "result JSON path (default stdout)");

    // gen ------------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "write a random instance to CSV files");
    std::string gen_kind = "chm-gaussian", gen_out = "instance";
    Index gen_m = 10, gen_n = 50, gen_k = 0;
    double gen_red = 0.0, gen_bound_m = 1000.0;
    bool gen_infeasible = false;
    std::uint64_t gen_seed = 0;
    gen->add_option("--kind", gen_kind,
                    "chm-gaussian | chm-sphere | chm-uniform | lpfeas-uniform | "
                    "lpfeas-sphere | strictlp-uniform | strictlp-sphere")
        ->check(CLI::IsMember({"chm-gaussian", "chm-sphere", "chm-uniform", "lpfeas-uniform",
                               "lpfeas-sphere", "strictlp-uniform", "strictlp-sphere"}));
    gen->add_option("--m", gen_m, "ambient dimension");
    gen->add_option("--n", gen_n, "number of points / columns");
    gen->add_option("--K", gen_k, "vertex count (default: derived from --redundant)");
    gen->add_option("--redundant", gen_red, "redundant fraction in [0,1)");
    gen->add_flag("--infeasible", gen_infeasible, "generate the infeasible variant");
    gen->add_option("--bound-M", gen_bound_m, "bound for lpfeas instances");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", gen_out, "output path prefix");

    // bench ------------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "run a benchmark suite, emit CSV");
    std::string bench_suite = "chm-gaussian", bench_sizes = "50x200,100x500,200x1000";
    std::string bench_eps = "0.01,0.005,0.001", bench_seeds = "1,2,3", bench_out;
    bool bench_large = false;
    bench->add_option("--suite", bench_suite,
                      "chm-gaussian | chm-sphere | lpfeas-uniform | lpfeas-sphere | "
                      "strictlp-uniform | strictlp-sphere | irredundancy-sphere | "
                      "irredundancy-gaussian | mvee");
    bench->add_option("--sizes", bench_sizes, "comma list of MxN sizes");
    bench->add_option("--epsilons", bench_eps, "comma list of precisions");
    bench->add_option("--seeds", bench_seeds, "comma list of seeds");
    bench->add_flag("--large", bench_large, "append the large 1000x5000 size");
    bench->add_option("--out", bench_out, "CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*chm) {
            const PointSet pts = PointSet::from_rows(read_points_csv_file(chm_input, chm_header));
            const Vector q = load_query(chm_query, chm_query_file);
            SolverConfig cfg;
            cfg.epsilon = chm_eps;
            cfg.max_iterations = chm_max_iters;
            cfg.enable_eps_property = chm_eps_property;
            cfg.record_trace = !chm_trace.empty();
            const auto t0 = std::chrono::steady_clock::now();
            const ChmOutcome out = chm_oracle == "ta" ? solve_ta(pts, q, cfg)
                                                      : solve_spherical_ta(pts, q, cfg);
            const double ms = ms_since(t0);
            if (!chm_trace.empty() && out.trace) write_trace_csv(chm_trace, *out.trace);
            emit(chm_result_json(out, chm_eps, ms), chm_output);
            return 0;
        }
        if (*lpf) {
            const Matrix a = read_points_csv_file(lpf_input, lpf_header);
            const Vector b = load_query(lpf_b, lpf_b_file);
            LpFeasInstance inst(a, b, lpf_m);
            SolverConfig cfg;
            cfg.epsilon = lpf_eps;
            cfg.max_iterations = lpf_max_iters;
            const auto t0 = std::chrono::steady_clock::now();
            const LpFeasResult res = solve_lp_feasibility(inst, cfg);
            emit(lp_feas_result_json(res, lpf_eps, ms_since(t0)), lpf_output);
            return 0;
        }
        if (*slp) {
            const Matrix a = read_points_csv_file(slp_input, slp_header);
            const Vector b = load_query(slp_b, slp_b_file);
            StrictLpInstance inst(a, b);
            SolverConfig cfg;
            cfg.epsilon = slp_eps;
            cfg.max_iterations = slp_max_iters;
            const auto t0 = std::chrono::steady_clock::now();
            const StrictLpResult res = solve_strict_lp(inst, cfg);
            emit(strict_lp_result_json(res, slp_eps, ms_since(t0)), slp_output);
            return 0;
        }
        if (*vert) {
            const PointSet pts = PointSet::from_rows(read_points_csv_file(vert_input, vert_header));
            AvtaConfig cfg;
            cfg.gamma = vert_gamma;
            cfg.seed = vert_seed;
            const auto t0 = std::chrono::steady_clock::now();
            const VertexReport rep =
                vert_oracle == "ta" ? avta(pts, cfg) : avta_plus(pts, cfg);
            emit(vertex_report_json(rep, ms_since(t0)), vert_output);
            return 0;
        }
        if (*mv) {
            const PointSet pts = PointSet::from_rows(read_points_csv_file(mv_input, mv_header));
            const auto t0 = std::chrono::steady_clock::now();
            Ellipsoid e = [&] {
                if (!mv_pre) return mvee(pts, mv_eps);
                AvtaConfig cfg;
                cfg.gamma = mv_gamma;
                cfg.seed = mv_seed;
                return avta_plus_mvee(pts, cfg, mv_eps);
            }();
            emit(ellipsoid_json(e, ms_since(t0)), mv_output);
            return 0;
        }
        if (*gen) {
            GenSpec spec;
            spec.m = gen_m;
            spec.n = gen_n;
            spec.seed = gen_seed;
            spec.feasible = !gen_infeasible;
            spec.redundant_fraction = gen_red;
            spec.k_vertices = gen_k > 0 ? gen_k
                                        : std::max<Index>(1, static_cast<Index>(
                                              std::lround((1.0 - gen_red) * gen_n)));
            const bool sphere = gen_kind.find("sphere") != std::string::npos;
            const bool uniform = gen_kind.find("uniform") != std::string::npos;
            spec.kind = sphere ? GenSpec::Kind::SphereVertices
                               : (uniform ? GenSpec::Kind::UniformMatrix
                                          : GenSpec::Kind::GaussianVertices);
            Json meta{{"kind", gen_kind}, {"seed", gen_seed}, {"feasible", !gen_infeasible}};
            if (gen_kind.rfind("chm", 0) == 0) {
                const ChmInstance inst = gen_chm_instance(spec);
                std::ofstream pf(gen_out + "_points.csv");
                write_points_csv(pf, inst.points.points().transpose());
                std::ofstream qf(gen_out + "_query.csv");
                write_points_csv(qf, inst.query.transpose());
                if (!inst.feasible_truth) meta["margin"] = inst.margin;
            } else if (gen_kind.rfind("lpfeas", 0) == 0) {
                const LpFeasGen g = gen_lp_instance(spec, gen_bound_m);
                std::ofstream af(gen_out + "_A.csv");
                write_points_csv(af, g.inst.a);
                std::ofstream bf(gen_out + "_b.csv");
                write_points_csv(bf, g.inst.b.transpose());
                meta["bound_M"] = gen_bound_m;
            } else {
                const StrictLpGen g = gen_strict_lp_instance(spec);
                std::ofstream af(gen_out + "_A.csv");
                write_points_csv(af, g.inst.a);
                std::ofstream bf(gen_out + "_b.csv");
                write_points_csv(bf, g.inst.b.transpose());
            }
            std::ofstream mf(gen_out + "_meta.json");
            mf << meta.dump(2) << "\n";
            return 0;
        }
        if (*bench) {
            auto sizes = parse_sizes(bench_sizes);
            if (bench_large) sizes.push_back(BenchSizes{1000, 5000});
            const auto records = run_benchmark(bench_suite, sizes, parse_list<double>(bench_eps),
                                               parse_list<std::uint64_t>(bench_seeds));
            if (bench_out.empty()) {
                write_bench_csv(std::cout, records);
            } else {
                std::ofstream out(bench_out);
                write_bench_csv(out, records);
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
