#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "sphta/point_set.hpp"
#include "sphta/vertex_enumeration.hpp"

namespace sphta {

struct DimensionDeficientError : std::runtime_error {
    DimensionDeficientError()
        : std::runtime_error("mvee: points do not affinely span the ambient space") {}
};

/// The ellipsoid {x : (x - center_b)^T shape_M (x - center_b) <= 1}.
struct Ellipsoid {
    Matrix shape_M;
    Vector center_b;

    double quadratic(const Vector& x) const {
        const Vector d = x - center_b;
        return d.dot(shape_M * d);
    }

    /// Proportional to 1/volume; bigger means tighter.
    double inverse_volume_proxy() const { return std::sqrt(shape_M.determinant()); }
};

/// Minimum volume enclosing ellipsoid by the multiplicative-weights
/// ascent on the lifted dual (the classic first-order scheme behind the
/// usual MVEE packages). Every input point ends up with quadratic form
/// value at most 1 + eps_mvee.
inline Ellipsoid mvee(const PointSet& s, double eps_mvee) {
    if (!(eps_mvee > 0.0 && eps_mvee < 1.0))
        throw std::invalid_argument("mvee: eps_mvee must lie in (0,1)");
    const Index m = s.dim(), n = s.size();
    const double d = static_cast<double>(m) + 1.0;

    Matrix q(m + 1, n);
    q.topRows(m) = s.points();
    q.row(m).setOnes();

    Vector u = Vector::Constant(n, 1.0 / static_cast<double>(n));
    {
        const Matrix x0 = q * u.asDiagonal() * q.transpose();
        Eigen::FullPivLU<Matrix> lu(x0);
        if (lu.rank() < m + 1) throw DimensionDeficientError();
    }

    // Stop when max leverage <= (m+1) + m*eps: with M = Sigma^{-1}/m that
    // pins every point inside the (1+eps) inflation.
    const double stop = d + static_cast<double>(m) * eps_mvee;
    const long max_rounds = 1000000;
    for (long round = 0;; ++round) {
        const Matrix x = q * u.asDiagonal() * q.transpose();
        const Matrix t = x.ldlt().solve(q);
        const Vector lev = (q.array() * t.array()).colwise().sum();
        Index jmax = 0;
        const double wmax = lev.maxCoeff(&jmax);
        if (wmax <= stop) break;
        if (round >= max_rounds)
            throw std::runtime_error("mvee: ascent failed to converge within its round budget");
        const double step = (wmax - d) / (d * (wmax - 1.0));
        u *= (1.0 - step);
        u[jmax] += step;
    }

    Vector center = s.points() * u;
    Matrix sigma = s.points() * u.asDiagonal() * s.points().transpose() - center * center.transpose();
    Matrix shape = sigma.inverse() / static_cast<double>(m);
    shape = 0.5 * (shape + shape.transpose());
    return Ellipsoid{std::move(shape), std::move(center)};
}

/// Data-reduction pipeline: enumerate the hull vertices first, then
/// solve the ellipsoid on the vertex subset only. Containment of the
/// vertices implies containment of the full hull.
inline Ellipsoid avta_plus_mvee(const PointSet& s, const AvtaConfig& cfg, double eps_mvee) {
    const VertexReport rep = avta_plus(s, cfg);
    // Index order, not discovery order, so the reduced solve matches a
    // direct solve on the same points bit for bit.
    std::vector<Index> idx = rep.vertex_indices;
    std::sort(idx.begin(), idx.end());
    const PointSet vertices = s.subset(idx);
    return mvee(vertices, eps_mvee);
}

}  // namespace sphta
