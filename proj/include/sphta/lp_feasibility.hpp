#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

#include "sphta/exact_oracle.hpp"
#include "sphta/point_set.hpp"
#include "sphta/solver.hpp"

namespace sphta {

/// Raised when an inner membership solve hits its iteration cap, so a
/// reduction cannot report a verdict.
struct IterationLimitError : std::runtime_error {
    explicit IterationLimitError(long iters)
        : std::runtime_error("membership solve hit its iteration cap"), iterations(iters) {}
    long iterations;
};

/// The strict system Ax < b with rows a_i^T (A is n x m).
struct StrictLpInstance {
    Matrix a;
    Vector b;

    StrictLpInstance(Matrix a_, Vector b_) : a(std::move(a_)), b(std::move(b_)) {
        if (a.rows() != b.size())
            throw std::invalid_argument("StrictLpInstance: row count mismatch");
        if (!a.allFinite() || !b.allFinite())
            throw std::invalid_argument("StrictLpInstance: non-finite entries");
    }
};

struct StrictlyFeasible {
    Vector x;  // satisfies Ax < b componentwise, re-verified before returning
};

/// Approximate certificate of infeasibility: simplex weights (y, s) of
/// the homogeneous membership problem of the row-normalized system,
/// reported in original-row terms. `residual` is the homogeneous
/// residual in the unit-column frame and is at most epsilon.
struct InfeasibleWithinTolerance {
    Vector y;
    double s = 0.0;
    double residual = 0.0;
    bool exact_certificate = false;  // set when the small-support exact upgrade succeeded
};

struct StrictLpResult {
    std::variant<StrictlyFeasible, InfeasibleWithinTolerance> result;
    long iterations = 0;

    bool feasible() const { return std::holds_alternative<StrictlyFeasible>(result); }
    const StrictlyFeasible& as_feasible() const { return std::get<StrictlyFeasible>(result); }
    const InfeasibleWithinTolerance& as_infeasible() const {
        return std::get<InfeasibleWithinTolerance>(result);
    }
};

/// Columns of the homogeneous dual of Ax < b: (a_i; b_i) for each row,
/// then (0; 1), the first n normalized to unit length. Scaling a row
/// positively does not change the strict system, so the normalization
/// is free, and it makes the membership instance spherical from the
/// start.
inline PointSet build_gordan_columns(const StrictLpInstance& inst) {
    const Index n = inst.a.rows(), m = inst.a.cols();
    Matrix cols(m + 1, n + 1);
    for (Index i = 0; i < n; ++i) {
        Vector col(m + 1);
        col.head(m) = inst.a.row(i).transpose();
        col[m] = inst.b[i];
        const double len = col.norm();
        if (len == 0.0)
            throw std::invalid_argument("build_gordan_columns: degenerate row (zero coefficients and zero bound)");
        cols.col(i) = col / len;
    }
    cols.col(n).setZero();
    cols(m, n) = 1.0;
    return PointSet(std::move(cols));
}

namespace detail {

// Small-support exact upgrade of an approximate Gordan certificate:
// run the exact oracle on the support columns when it fits its caps.
inline bool exact_membership_on_support(const PointSet& cols, const std::vector<Index>& support) {
    if (cols.dim() > exact::kMaxDim || static_cast<Index>(support.size()) > exact::kMaxPoints)
        return false;
    const PointSet sub = cols.subset(support);
    return exact::simplex_membership(sub, Vector::Zero(cols.dim()));
}

}  // namespace detail

/// Tests Ax < b via the homogeneous membership dual. A witness yields a
/// strictly feasible point x = -x_hat / alpha_hat; an approximate
/// solution yields the (y, s) infeasibility certificate.
inline StrictLpResult solve_strict_lp(const StrictLpInstance& inst, const SolverConfig& cfg) {
    const Index n = inst.a.rows(), m = inst.a.cols();
    const PointSet cols = build_gordan_columns(inst);
    const Vector origin = Vector::Zero(m + 1);
    const ChmOutcome out = solve_spherical_ta(cols, origin, cfg);
    if (out.limit()) throw IterationLimitError(out.iterations);

    if (out.witness()) {
        // Witness point (x_hat; alpha_hat) over the unit columns.
        const Vector& w = out.as_witness().cert.witness.coords;
        const double alpha = w[m];
        if (!(alpha > 0.0))
            throw std::runtime_error("solve_strict_lp: witness last coordinate not positive");
        Vector x = -w.head(m) / alpha;
        // The theorem promises strictness; hold the implementation to it.
        for (Index i = 0; i < n; ++i)
            if (!(inst.a.row(i).dot(x) < inst.b[i]))
                throw std::runtime_error("solve_strict_lp: recovered point fails the strict check");
        return StrictLpResult{StrictlyFeasible{std::move(x)}, out.iterations};
    }

    const InsideApprox& in = out.as_inside();
    InfeasibleWithinTolerance cert;
    cert.residual = in.residual;
    // Map unit-column weights back through the row scalings.
    Vector y = Vector::Zero(n);
    double s = 0.0, z = 0.0;
    for (const auto& [i, wt] : in.iterate.coeffs) {
        if (i < n) {
            Vector col(m + 1);
            col.head(m) = inst.a.row(i).transpose();
            col[m] = inst.b[i];
            const double scaled = wt / col.norm();
            y[i] += scaled;
            z += scaled;
        } else {
            s += wt;
            z += wt;
        }
    }
    cert.y = y / z;
    cert.s = s / z;
    if (in.iterate.coeffs.size() <= 20) {
        std::vector<Index> support;
        for (const auto& [i, wt] : in.iterate.coeffs) support.push_back(i);
        cert.exact_certificate = detail::exact_membership_on_support(cols, support);
    }
    return StrictLpResult{std::move(cert), out.iterations};
}

/// The system Ax = b, x >= 0 with a known bound M on e^T x (A is m x n).
struct LpFeasInstance {
    Matrix a;
    Vector b;
    double bound_M = 1000.0;

    LpFeasInstance(Matrix a_, Vector b_, double m_ = 1000.0)
        : a(std::move(a_)), b(std::move(b_)), bound_M(m_) {
        if (a.rows() != b.size())
            throw std::invalid_argument("LpFeasInstance: dimension mismatch");
        if (!(bound_M > 0.0)) throw std::invalid_argument("LpFeasInstance: bound M must be positive");
    }
};

struct GammaDegenerateError : std::runtime_error {
    explicit GammaDegenerateError(double gamma)
        : std::runtime_error("recovered gamma is too small to divide by; "
                             "increase the bound M or decrease epsilon"),
          gamma_value(gamma) {}
    double gamma_value;
};

struct LpFeasible {
    Vector x;
    double gamma = 0.0;
    double residual = 0.0;  // ||Ax - b||
};

struct LpInfeasible {
    Hyperplane certificate;  // separates the origin from the reduction columns
};

struct LpFeasResult {
    std::variant<LpFeasible, LpInfeasible> result;
    long iterations = 0;

    bool feasible() const { return std::holds_alternative<LpFeasible>(result); }
    const LpFeasible& as_feasible() const { return std::get<LpFeasible>(result); }
    const LpInfeasible& as_infeasible() const { return std::get<LpInfeasible>(result); }
};

/// Columns of the bounded reduction: (A_j; 1) for each column of A,
/// then (0; 1), then (-b; -M). The system is feasible (within the bound)
/// exactly when the origin lies in the hull of these columns.
inline PointSet build_lpfeas_columns(const LpFeasInstance& inst) {
    const Index m = inst.a.rows(), n = inst.a.cols();
    Matrix cols(m + 1, n + 2);
    cols.block(0, 0, m, n) = inst.a;
    cols.row(m).head(n).setOnes();
    cols.col(n).setZero();
    cols(m, n) = 1.0;
    cols.col(n + 1).head(m) = -inst.b;
    cols(m, n + 1) = -inst.bound_M;
    return PointSet(std::move(cols));
}

inline double lpfeas_gamma_floor(double epsilon) { return std::max(epsilon, 1e-10); }

/// Runs the spherical solver on the bounded reduction and recovers
/// x = alpha / gamma from an approximate solution, or reports the
/// separating certificate on a witness.
inline LpFeasResult solve_lp_feasibility(const LpFeasInstance& inst, const SolverConfig& cfg) {
    const Index m = inst.a.rows(), n = inst.a.cols();
    const PointSet cols = build_lpfeas_columns(inst);
    const Vector origin = Vector::Zero(m + 1);
    const ChmOutcome out = solve_spherical_ta(cols, origin, cfg);
    if (out.limit()) throw IterationLimitError(out.iterations);

    if (out.witness())
        return LpFeasResult{LpInfeasible{out.as_witness().raw_plane}, out.iterations};

    const InsideApprox& in = out.as_inside();
    Vector alpha = Vector::Zero(n);
    double gamma = 0.0;
    for (const auto& [i, wt] : in.iterate.coeffs) {
        if (i < n)
            alpha[i] += wt;
        else if (i == n + 1)
            gamma += wt;
    }
    if (gamma <= lpfeas_gamma_floor(cfg.epsilon)) throw GammaDegenerateError(gamma);
    Vector x = alpha / gamma;
    const double residual = (inst.a * x - inst.b).norm();
    return LpFeasResult{LpFeasible{std::move(x), gamma, residual}, out.iterations};
}

}  // namespace sphta
