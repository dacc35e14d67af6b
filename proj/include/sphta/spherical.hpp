#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "sphta/geometry.hpp"
#include "sphta/point_set.hpp"

namespace sphta {

inline constexpr double kCoincidentTol = 1e-14;

/// A general membership instance rewritten with the query at the origin
/// and every point pushed onto the unit sphere. Keeps the per-point
/// scale factors needed to convert answers back.
struct SphericalInstance {
    PointSet unit_points;   // (v_i - p) / |v_i - p|
    Vector scales;          // |v_i - p|, all > 0
    double radius_R;        // max of scales
    Vector query_origin;    // the original query point p
};

/// The query coincides with data point `index`; membership is exact with
/// the unit coefficient vector e_index.
struct ImmediateMember {
    Index index;
};

using SphericalOrMember = std::variant<SphericalInstance, ImmediateMember>;

/// Centers the instance at the query and normalizes each point onto the
/// unit sphere. Short-circuits when the query equals a data point.
inline SphericalOrMember to_spherical(const PointSet& raw, const Vector& p_raw) {
    if (raw.dim() != p_raw.size())
        throw std::invalid_argument("to_spherical: dimension mismatch");
    const Index n = raw.size();
    Matrix unit(raw.dim(), n);
    Vector scales(n);
    const double coincide = kCoincidentTol * (1.0 + p_raw.norm());
    for (Index i = 0; i < n; ++i) {
        unit.col(i) = raw.col(i) - p_raw;
        const double len = unit.col(i).norm();
        if (len <= coincide) return ImmediateMember{i};
        unit.col(i) /= len;
        scales[i] = len;
    }
    return SphericalInstance{PointSet::with_norms(std::move(unit), Vector::Ones(n)), scales,
                             scales.maxCoeff(), p_raw};
}

/// Converts simplex weights over the unit points into weights over the
/// raw points: beta_i ~ alpha_i / scale_i, renormalized. A residual of
/// eps in the spherical frame becomes at most eps * R in the raw frame.
inline Iterate recover_solution(const std::vector<std::pair<Index, double>>& alpha,
                                const SphericalInstance& inst, const PointSet& raw) {
    double z = 0.0;
    for (const auto& [i, w] : alpha) z += w / inst.scales[i];
    if (z <= 0.0) throw std::invalid_argument("recover_solution: all weights vanish");
    Iterate out;
    out.coeffs.reserve(alpha.size());
    out.coords = Vector::Zero(raw.dim());
    for (const auto& [i, w] : alpha) {
        const double beta = (w / inst.scales[i]) / z;
        out.coeffs.emplace_back(i, beta);
        out.coords += beta * raw.col(i);
    }
    return out;
}

inline Iterate recover_solution(const Vector& alpha, const SphericalInstance& inst,
                                const PointSet& raw) {
    std::vector<std::pair<Index, double>> sparse;
    for (Index i = 0; i < alpha.size(); ++i)
        if (alpha[i] != 0.0) sparse.emplace_back(i, alpha[i]);
    return recover_solution(sparse, inst, raw);
}

/// The witness bisector in the spherical frame (query at the origin).
inline Hyperplane spherical_frame_plane(const Vector& p_prime) {
    return bisector_hyperplane(Vector::Zero(p_prime.size()), p_prime);
}

/// Spherical frame over a column prefix of a raw matrix without
/// materializing the normalized copy: unit points read as
/// (w_j - query)/scale_j on demand, and directional scans transform the
/// raw dots algebraically. The repeated-membership driver leans on this
/// to make a spherical query cost what a raw one does.
class LazySphericalView {
public:
    LazySphericalView(const Matrix& points, const Vector& scales, const Vector& query,
                      Index count)
        : points_(points), scales_(scales), query_(query), count_(count) {}

    Index dim() const { return points_.rows(); }
    Index size() const { return count_; }
    Vector col(Index j) const { return (points_.col(j) - query_) / scales_[j]; }
    double norm(Index) const { return 1.0; }

    Vector combine(const Vector& w) const {
        const Vector scaled = w.array() / scales_.head(count_).array();
        Vector out = points_.leftCols(count_) * scaled;
        out.noalias() -= scaled.sum() * query_;
        return out;
    }

    const Matrix& base_points() const { return points_; }
    const Vector& base_scales() const { return scales_; }
    const Vector& base_query() const { return query_; }

private:
    const Matrix& points_;
    const Vector& scales_;
    const Vector& query_;
    Index count_;
};

namespace detail {
struct DirectionalScan;
}

/// Scan specialization for the lazy frame: one product against the raw
/// columns, then shift and rescale per point.
detail::DirectionalScan directional_scan(const LazySphericalView& s, const Vector& c,
                                         const Vector& p);

/// Converts a 0-witness for the unit points into a hyperplane separating
/// the original query from the hull of the raw points. Each w_i = (v_i - p)/R
/// is projected onto the segment from the origin to p'; the projection
/// closest to the origin spans the bisector that separates, and scaling
/// carries it back to raw coordinates.
inline Hyperplane recover_witness(const Vector& p_prime, const SphericalInstance& inst) {
    const double delta2 = p_prime.squaredNorm();
    if (delta2 == 0.0) throw std::invalid_argument("recover_witness: zero witness point");
    const Vector dots = inst.unit_points.points().transpose() * p_prime;
    double t_min = 1.0;  // projection clamped to the segment endpoint p'
    for (Index i = 0; i < dots.size(); ++i) {
        const double t = (inst.scales[i] / inst.radius_R) * dots[i] / delta2;
        if (t <= 0.0)
            throw std::domain_error("recover_witness: input is not a witness (projection behind the origin)");
        t_min = std::min(t_min, t);
    }
    const double offset = 0.5 * t_min * delta2 * inst.radius_R + p_prime.dot(inst.query_origin);
    return Hyperplane{p_prime, offset};
}

}  // namespace sphta
